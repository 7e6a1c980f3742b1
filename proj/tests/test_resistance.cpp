#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "resnet/error.hpp"
#include "resnet/generators.hpp"
#include "resnet/resistance.hpp"
#include "support.hpp"

using namespace resnet;
using namespace testing_support;

namespace {

constexpr Method kAll[] = {Method::M1, Method::M2, Method::M3, Method::M4, Method::M7};

VertexId id(const TruncatedGraph& t, VertexLabel l) { return *t.g().find(l); }

}  // namespace

TEST(Resistance, SingleEdgeEveryMethod) {
    auto t = whole(2, {{0, 1, 4.0}});
    for (Method m : kAll) EXPECT_NEAR(resistance(t, 0, 1, m), 0.25, 1e-12) << to_string(m);
}

TEST(Resistance, ThreeResistorConfiguration) {
    auto [x, y] = three_resistor_terminals();
    for (Method m : kAll) {
        EXPECT_NEAR(resistance(generate(family::ThreeResistor{1, 1, 1}), x, y, m), 1.5, 1e-9) << to_string(m);
        EXPECT_NEAR(resistance(generate(family::ThreeResistor{2, 3, 6}), x, y, m), 2.0 + 1.0 / (1.0 / 3 + 1.0 / 6), 1e-9);
    }
}

TEST(Resistance, HalfLineTelescoping) {
    auto t = generate(family::HalfLine{}, 8);
    for (int x = 0; x < 8; ++x)
        for (int y = x + 1; y <= 8; ++y) {
            double expected = 0.0;
            for (int i = x; i < y; ++i) expected += std::exp(-double(i));
            for (Method m : kAll)
                EXPECT_NEAR(resistance(t, id(t, {LabelKind::halfline, {x}}), id(t, {LabelKind::halfline, {y}}), m),
                            expected, 1e-9 * expected)
                    << to_string(m);
        }
}

TEST(Resistance, Errors) {
    EXPECT_THROW(resistance(k3(), 1, 1, Method::M4), InvalidArgument);
    EXPECT_THROW(method_from_string("M5"), InvalidArgument);
    EXPECT_THROW(method_from_string("M6"), InvalidArgument);
    EXPECT_THROW(method_from_string("bogus"), InvalidArgument);
    EXPECT_EQ(method_from_string("m3"), Method::M3);
}

TEST(ResistanceProperty, MethodsAgreeOnRandomGraphs) {
    for (std::uint64_t s = 1; s <= 100; ++s) {
        const std::size_t n = 5 + s % 56;
        auto t = random_connected(n, n / 2 + s % 7, s);
        Oracle oracle(t.g());
        ResistanceSolver solver(t);
        const VertexId x = s % n, y = (s * 7 + 3) % n;
        if (x == y) continue;
        const double ref = oracle.resistance(x, y);
        for (Method m : kAll) EXPECT_NEAR(solver.resistance(x, y, m), ref, 1e-7 * ref) << to_string(m) << " seed " << s;
    }
}

TEST(Current, SingleEdge) {
    auto t = whole(2, {{0, 1, 5.0}});
    auto f = current_of_dipole(solve_dipole(t, 0, 1));
    ASSERT_EQ(f.current.size(), 1u);
    EXPECT_NEAR(f.current[0], 1.0, 1e-12);
    EXPECT_NEAR(f.dissipation, 0.2, 1e-12);
    EXPECT_NEAR(f.at(1, 0), -1.0, 1e-12);
}

TEST(Current, TriangleSplit) {
    auto f = current_of_dipole(solve_dipole(k3(), 0, 1));
    EXPECT_NEAR(f.at(0, 1), 2.0 / 3.0, 1e-10);
    EXPECT_NEAR(f.at(0, 2), 1.0 / 3.0, 1e-10);
    EXPECT_NEAR(f.at(2, 1), 1.0 / 3.0, 1e-10);
    EXPECT_NEAR(f.dissipation, 2.0 / 3.0, 1e-10);
    EXPECT_LE(f.kirchhoff_residual, 1e-9);
}

TEST(Current, TreeFlowIsPathIndicator) {
    for (std::uint64_t s = 1; s <= 10; ++s) {
        auto t = generate(family::RandomTree{30, s});
        const auto& g = t.g();
        const VertexId x = 4, y = 25;
        auto f = current_of_dipole(solve_dipole(t, x, y));
        // Walk the tree path x -> y through BFS parents from y.
        std::vector<int> dist = bfs_distances(g, y);
        std::set<std::pair<VertexId, VertexId>> path;
        for (VertexId a = x; a != y;) {
            for (VertexId b : g.neighbors(a))
                if (dist[b] == dist[a] - 1) {
                    path.insert({a, b});
                    a = b;
                    break;
                }
        }
        for (const Edge& e : f.edges) {
            double expected = path.count({e.from, e.to}) ? 1.0 : path.count({e.to, e.from}) ? -1.0 : 0.0;
            EXPECT_NEAR(f.at(e.from, e.to), expected, 1e-8);
        }
    }
}

TEST(CurrentProperty, KirchhoffAndIsometry) {
    for (std::uint64_t s = 1; s <= 20; ++s) {
        auto t = random_connected(40, 30, s);
        auto v = solve_dipole(t, 1, 33);
        auto f = current_of_dipole(v);
        EXPECT_LE(f.kirchhoff_residual, 1e-9);
        EXPECT_NEAR(f.dissipation, v.potential.energy(), 1e-9 * v.potential.energy());
    }
}

TEST(Thomson, MinimizesOverCycleSpace) {
    auto t = random_connected(25, 20, 3);
    ResistanceSolver solver(t);
    Vector flow = solver.thomson_flow(2, 19);
    auto f = current_of_dipole(solve_dipole(t, 2, 19));
    for (std::size_t e = 0; e < f.current.size(); ++e) EXPECT_NEAR(flow[Eigen::Index(e)], f.current[e], 1e-8);
}

TEST(Matrix, PathAndTriangle) {
    for (Method m : kAll) {
        auto d = resistance_matrix(path3(), m);
        Eigen::Matrix3d expected;
        expected << 0, 1, 2, 1, 0, 1, 2, 1, 0;
        EXPECT_LE((d.values - expected).cwiseAbs().maxCoeff(), 1e-9) << to_string(m);
        auto k = resistance_matrix(k3(), m);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) EXPECT_NEAR(k.values(i, j), i == j ? 0.0 : 2.0 / 3.0, 1e-9);
    }
}

TEST(Matrix, SizeCap) {
    auto t = random_connected(30, 5, 1);
    EXPECT_THROW(resistance_matrix(t, Method::M4, 1e-10, 1, 20), InvalidArgument);
}

TEST(MatrixProperty, MetricAxioms) {
    for (std::uint64_t s = 1; s <= 10; ++s) {
        auto t = random_connected(30, 20, s);
        for (Method m : {Method::M2, Method::M4}) {
            auto d = resistance_matrix(t, m, 1e-10, 2);
            auto r = check_metric_axioms(d);
            EXPECT_TRUE(r.ok()) << "slack " << r.min_triangle_slack;
            EXPECT_EQ(r.max_asymmetry, 0.0);
            EXPECT_EQ(r.max_diagonal, 0.0);
        }
    }
}

TEST(MatrixProperty, KernelInequality) {
    for (std::uint64_t s = 1; s <= 10; ++s) {
        auto t = random_connected(25, 15, s);
        ResistanceSolver solver(t);
        const auto& k = solver.grounded_inverse();
        for (Eigen::Index x = 0; x < 25; ++x)
            for (Eigen::Index y = 0; y < 25; ++y)
                for (Eigen::Index z = 0; z < 25; z += 3)
                    EXPECT_GE(k(x, y) - (k(x, z) + k(z, y) - k(z, z)), -1e-8);
    }
}

TEST(Matrix, CsvHasLabelHeader) {
    auto t = generate(family::HalfLine{}, 2);
    std::ostringstream out;
    write_csv(out, resistance_matrix(t, Method::M4), t.g());
    EXPECT_EQ(out.str().substr(0, 12), "label,0,1,2\n");
}

TEST(Boundedness, HalfLineBounded) {
    auto r = boundedness_diagnostic(family::HalfLine{}, {4, 6, 8, 10});
    ASSERT_EQ(r.rows.size(), 4u);
    for (const auto& row : r.rows) {
        const double expected = std::exp(1.0) / (std::exp(1.0) - 1.0) * (1.0 - std::exp(-double(row.radius)));
        EXPECT_NEAR(row.max_distance, expected, 1e-9);
        EXPECT_NEAR(row.geodesic_resistance, expected, 1e-12);
        EXPECT_EQ(row.farthest, std::to_string(row.radius));
    }
    EXPECT_TRUE(r.bounded);
    ASSERT_TRUE(r.limit_estimate.has_value());
    EXPECT_NEAR(*r.limit_estimate, std::exp(1.0) / (std::exp(1.0) - 1.0), 1e-4);
}

TEST(Boundedness, UnitHalfLineUnbounded) {
    auto r = boundedness_diagnostic(family::HalfLine{0.0}, {4, 8, 12});
    for (const auto& row : r.rows) EXPECT_NEAR(row.max_distance, row.radius, 1e-9);
    EXPECT_FALSE(r.bounded);
    EXPECT_FALSE(r.limit_estimate.has_value());
}

TEST(Boundedness, NaryTreeGeometricDecay) {
    auto r = boundedness_diagnostic(family::NaryTree{2, 2.0}, {3, 4, 5, 6, 7});
    // d(root, level n) = sum_{j<n} 2^-j along a ray.
    for (const auto& row : r.rows) EXPECT_NEAR(row.max_distance, 2.0 * (1.0 - std::ldexp(1.0, -row.radius)), 1e-9);
    EXPECT_TRUE(r.bounded);
    for (double q : r.ratios) EXPECT_NEAR(q, 0.5, 1e-6);
}

TEST(Boundedness, NeedsTwoRadii) {
    EXPECT_THROW(boundedness_diagnostic(family::HalfLine{}, {3}), InvalidArgument);
}

TEST(TypeA, CombCrossTeethStaysSeparated) {
    auto r = type_a_diagnostic(family::Comb{}, 12, 3);
    EXPECT_EQ(r.kind, "cross-teeth");
    EXPECT_FALSE(r.rows.empty());
    EXPECT_GT(r.epsilon, 0.5);
    EXPECT_FALSE(r.cauchy);
}

TEST(TypeA, BinaryTreeWithinRayVanishes) {
    auto r = type_a_diagnostic(family::BinaryTree{1.0, 1.0, 2.0}, 9, 1);
    EXPECT_EQ(r.kind, "within-ray");
    EXPECT_TRUE(r.cauchy);
    EXPECT_LT(r.epsilon, 0.01);
}

TEST(TypeA, HalfLineCauchy) {
    auto r = type_a_diagnostic(family::HalfLine{}, 10, 2);
    EXPECT_TRUE(r.cauchy);
    EXPECT_THROW(type_a_diagnostic(family::Lattice{2}, 4, 1), InvalidArgument);
}

TEST(Continuum, ReferenceValues) {
    auto a = continuum_reference(0.3, 0.3);
    EXPECT_EQ(a.kernel, 1.0);
    EXPECT_EQ(a.distance, 0.0);
    auto b = continuum_reference(0.0, std::log(2.0));
    EXPECT_NEAR(b.kernel, 0.5, 1e-15);
    EXPECT_NEAR(b.distance, 1.0, 1e-15);
    auto c = continuum_reference(-50.0, 50.0);
    EXPECT_LT(c.distance, 2.0 + 1e-15);
    EXPECT_NEAR(c.distance, 2.0, 1e-15);
}
