#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "resnet/decomposition.hpp"
#include "resnet/error.hpp"
#include "resnet/generators.hpp"
#include "support.hpp"

using namespace resnet;
using namespace testing_support;

namespace {

TruncatedGraph path3_absorbing() {
    return TruncatedGraph::with_frontier(make_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}}, 1), {0, 2}, 1);
}

// Random tree with its leaves (other than o) as frontier.
TruncatedGraph tree_with_leaves(std::size_t n, std::uint64_t seed) {
    auto t = generate(family::RandomTree{n, seed});
    std::vector<VertexId> leaves;
    for (VertexId x = 0; x < n; ++x)
        if (x != t.g().base_point() && t.g().neighbors(x).size() == 1) leaves.push_back(x);
    return TruncatedGraph::with_frontier(t.graph, leaves, 1);
}

EnergyVector random_f(const TruncatedGraph& t, std::uint64_t seed) { return EnergyVector(t.graph, random_vector(t.size(), seed)); }

double max_abs(const Vector& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(ProjectFinite, HarmonicMapsToZero) {
    auto t = generate(family::BinaryTree{1.0, 2.0, 1.5}, 4);
    Vector data = random_vector(t.size(), 3);
    EnergyVector h(t.graph, DirichletSolver(t).extend(data));
    EXPECT_LE(max_abs(project_finite(t, h).values()), 1e-8 * max_abs(h.values()));
}

TEST(ProjectFinite, DeltaIsFixed) {
    auto t = generate(family::Lattice{2}, 3);
    auto k = dirichlet_greens(t);
    for (VertexId x : t.interior) {
        if (x == t.g().base_point()) continue;
        auto d = delta(t.graph, x);
        EXPECT_LE(max_abs(project_finite(t, k, d).values() - d.values()), 1e-10);
        EXPECT_LE(max_abs(project_finite(t, d).values() - d.values()), 1e-10);
    }
}

TEST(ProjectFinite, DipoleIsFixedWithSingleFrontierVertex) {
    auto t = generate(family::HalfLine{}, 7);
    for (VertexId x = 1; x < 7; ++x) {
        auto v = solve_dipole(t, x, t.g().base_point()).potential;
        EXPECT_LE(max_abs(project_finite(t, v).values() - v.values()), 1e-8);
    }
}

TEST(ProjectFinite, RejectsMismatchedGreens) {
    auto t = generate(family::Lattice{2}, 3);
    auto gram = greens_gram(t);
    EXPECT_THROW(project_finite(t, gram, random_f(t, 1)), InvalidArgument);
    auto other = generate(family::HalfLine{}, 3);
    EXPECT_THROW(project_finite(t, random_f(other, 1)), InvalidArgument);
    EXPECT_THROW(project_finite(k3(), random_f(k3(), 1)), InvalidArgument);
}

TEST(ProjectionProperty, IdempotentAndSelfAdjoint) {
    for (std::uint64_t s = 1; s <= 20; ++s) {
        auto t = tree_with_leaves(20 + s, s);
        auto k = dirichlet_greens(t);
        auto f = random_f(t, s), g = random_f(t, s + 500);
        auto af = project_finite(t, k, f), ag = project_finite(t, k, g);
        const double scale = f.energy() + g.energy();
        EXPECT_LE(max_abs(project_finite(t, k, af).values() - af.values()), 1e-8 * max_abs(f.values()));
        EXPECT_LE(std::abs(energy_inner(f, ag) - energy_inner(af, g)), 1e-8 * scale);
        EXPECT_LE(max_abs(project_finite(t, af).values() - af.values()), 1e-8 * max_abs(f.values()));
    }
}

TEST(ProjectionProperty, AnnihilatesHarmonicBasis) {
    auto t = generate(family::Lattice{2}, 4);
    auto k = dirichlet_greens(t);
    for (const auto& e : harmonic_basis(t)) EXPECT_LE(max_abs(project_finite(t, k, e.gauged).values()), 1e-8);
}

TEST(Split, Invariants) {
    for (std::uint64_t s = 1; s <= 20; ++s) {
        auto t = tree_with_leaves(40, s);
        auto f = random_f(t, s);
        auto r = royden_split(t, f);
        EXPECT_LE(r.sum_residual, 1e-9);
        EXPECT_LE(r.orthogonality_residual, 1e-8 * f.energy());
        EXPECT_LE(r.harmonic_residual, 1e-8);
        EXPECT_EQ(r.finite_part(t.g().base_point()), 0.0);
        EXPECT_EQ(r.harmonic_part(t.g().base_point()), 0.0);
    }
}

TEST(Interpolate, HarmonicIsPoisson) {
    auto t = path3_absorbing();
    Vector h(3);
    h << 0.0, 0.5, 1.0;
    EnergyVector f(t.graph, h);
    auto k = dirichlet_greens(t);
    EXPECT_NEAR(interpolate(t, k, harmonic_measure_exact(t, 1), f, 1), f(1), 1e-14);
}

TEST(Interpolate, DeltaFarAway) {
    auto t = generate(family::Lattice{2}, 4);
    auto k = dirichlet_greens(t);
    const VertexId z = t.interior.back(), x = t.g().base_point();
    auto d = delta(t.graph, z);
    EXPECT_NEAR(interpolate(t, k, harmonic_measure_exact(t, x), d, x), 0.0, 1e-12);
    EXPECT_NEAR(interpolate(t, k, harmonic_measure_exact(t, z), d, z), 1.0, 1e-12);
}

TEST(InterpolateProperty, IdentityOnTreesAndLattices) {
    std::vector<TruncatedGraph> graphs;
    for (std::uint64_t s = 1; s <= 5; ++s) graphs.push_back(tree_with_leaves(10 * s + 10, s));
    graphs.push_back(generate(family::Lattice{2}, 4));
    graphs.push_back(generate(family::Lattice{1}, 20));
    for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
        const auto& t = graphs[gi];
        ASSERT_LE(t.size(), 60u);
        auto k = dirichlet_greens(t);
        for (std::uint64_t s = 1; s <= 50; ++s) {
            auto f = random_f(t, 1000 * gi + s);
            const VertexId x = t.interior[s % t.interior.size()];
            EXPECT_NEAR(interpolate(t, k, harmonic_measure_exact(t, x), f, x), f(x), 1e-7);
        }
    }
}

TEST(EnergySplit, DeltaHasNoBoundaryPart) {
    auto t = generate(family::Lattice{2}, 3);
    for (VertexId x : t.interior) {
        if (x == t.g().base_point()) continue;
        auto e = energy_split(t, delta(t.graph, x));
        EXPECT_LE(e.boundary_term, 1e-8);
        EXPECT_NEAR(e.total, weighted_degree(t.g(), x), 1e-12);
        EXPECT_LE(e.identity_residual, 1e-8);
    }
}

TEST(EnergySplit, HarmonicIsAllBoundary) {
    auto t = generate(family::BinaryTree{1.0, 1.0, 2.0}, 4);
    EnergyVector h(t.graph, DirichletSolver(t).extend(random_vector(t.size(), 9)));
    auto e = energy_split(t, h);
    EXPECT_LE(std::abs(e.dirichlet_term), 1e-8 * e.total);
    EXPECT_NEAR(e.boundary_term, e.total, 1e-8 * e.total);
}

TEST(EnergySplitProperty, Pythagoras) {
    for (std::uint64_t s = 1; s <= 30; ++s) {
        auto t = s % 2 ? tree_with_leaves(30 + s, s) : generate(family::Lattice{2}, 2 + int(s % 3));
        auto e = energy_split(t, random_f(t, s));
        EXPECT_LE(e.pythagoras_residual, 1e-8);
        EXPECT_LE(e.identity_residual, 1e-8);
    }
}

TEST(EnergySplit, WholeGraphIsAllFinite) {
    auto e = energy_split(k3(), random_f(k3(), 1));
    EXPECT_EQ(e.boundary_term, 0.0);
    EXPECT_NEAR(e.dirichlet_term, e.total, 1e-12);
}

TEST(HarmonicBasis, SingleFrontierIsConstant) {
    auto t = generate(family::HalfLine{}, 5);
    auto b = harmonic_basis(t);
    ASSERT_EQ(b.size(), 1u);
    EXPECT_LE(max_abs(b[0].extension.array() - 1.0), 1e-12);
    EXPECT_LE(max_abs(b[0].gauged.values()), 1e-12);
}

TEST(HarmonicBasis, PathSumsToOne) {
    auto b = harmonic_basis(path3_absorbing());
    ASSERT_EQ(b.size(), 2u);
    Vector s = b[0].extension + b[1].extension;
    EXPECT_LE(max_abs(s.array() - 1.0), 1e-14);
    EXPECT_NEAR(b[0].extension[1], 0.5, 1e-14);
}

TEST(HarmonicBasis, BinaryTreeGram) {
    auto t = generate(family::BinaryTree{1.0, 1.0, 2.0}, 4);
    auto b = harmonic_basis(t, 4);
    ASSERT_EQ(b.size(), 16u);
    LaplacianOperator lap(t.graph);
    Eigen::MatrixXd l2(16, 16), en(16, 16);
    for (int i = 0; i < 16; ++i) {
        const Vector lh = lap.apply(b[std::size_t(i)].extension);
        for (VertexId x : t.interior) EXPECT_LE(std::abs(lh[Eigen::Index(x)]), 1e-9);
        for (int j = 0; j < 16; ++j) {
            l2(i, j) = b[std::size_t(i)].extension.dot(b[std::size_t(j)].extension);
            en(i, j) = energy_inner(t.g(), b[std::size_t(i)].extension, b[std::size_t(j)].extension);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> el2(l2), een(en);
    EXPECT_GT(el2.eigenvalues().minCoeff(), 1e-8);
    EXPECT_GT(een.eigenvalues().minCoeff(), -1e-10);
    EXPECT_NEAR(een.eigenvalues()[0], 0.0, 1e-10);
    EXPECT_GT(een.eigenvalues()[1], 1e-8);
}

TEST(Split, Csv) {
    auto t = path3_absorbing();
    std::ostringstream out;
    write_csv(out, royden_split(t, random_f(t, 2)));
    const std::string csv = out.str();
    EXPECT_EQ(csv.substr(0, 22), "vertex,f,Q_perp_f,Q_f\n");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}
