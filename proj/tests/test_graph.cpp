#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "resnet/error.hpp"
#include "resnet/generators.hpp"
#include "resnet/graph.hpp"
#include "support.hpp"

using namespace resnet;
using testing_support::make_graph;

namespace {

VertexId by_label(const ConductanceGraph& g, VertexLabel l) {
    auto id = g.find(l);
    EXPECT_TRUE(id.has_value()) << l.to_string();
    return id.value_or(0);
}

}  // namespace

TEST(Validate, SingleEdgeIsValid) {
    auto g = make_graph(2, {{0, 1, 1.0}});
    EXPECT_TRUE(validate(*g).ok());
}

TEST(Validate, ReportsDisconnected) {
    auto g = make_graph(4, {{0, 1, 1.0}, {2, 3, 1.0}});
    auto r = validate(*g);
    EXPECT_FALSE(r.ok());
    EXPECT_TRUE(r.mentions("disconnected"));
}

TEST(Validate, ReportsAsymmetric) {
    std::vector<Edge> arcs{{0, 1, 2.0}, {1, 0, 3.0}};
    auto g = ConductanceGraph::from_arcs(2, arcs, 0);
    EXPECT_TRUE(validate(g).mentions("asymmetric"));
    std::vector<Edge> one_way{{0, 1, 2.0}};
    EXPECT_TRUE(validate(ConductanceGraph::from_arcs(2, one_way, 0)).mentions("asymmetric"));
}

TEST(Validate, ReportsSelfLoopNonpositiveDuplicate) {
    std::vector<Edge> arcs{{0, 0, 1.0}, {0, 1, -1.0}, {1, 0, -1.0}};
    auto r = validate(ConductanceGraph::from_arcs(2, arcs, 0));
    EXPECT_TRUE(r.mentions("self-loop"));
    EXPECT_TRUE(r.mentions("nonpositive weight"));
    auto dup = make_graph(2, {{0, 1, 1.0}, {0, 1, 1.0}});
    EXPECT_TRUE(validate(*dup).mentions("duplicate edge"));
}

TEST(Validate, ReportsZeroDegreeAndEmpty) {
    auto g = make_graph(3, {{0, 1, 1.0}});
    auto r = validate(*g);
    EXPECT_TRUE(r.mentions("zero degree"));
    EXPECT_TRUE(r.mentions("disconnected"));
    EXPECT_TRUE(validate(ConductanceGraph{}).mentions("empty graph"));
    EXPECT_THROW(require_valid(*g), ValidationError);
}

TEST(Validate, OutOfRangeEndpointThrows) {
    std::vector<Edge> e{{0, 5, 1.0}};
    EXPECT_THROW(ConductanceGraph::from_edges(2, e, 0), InvalidArgument);
}

TEST(WeightedDegree, StarCenter) {
    auto g = make_graph(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}});
    EXPECT_DOUBLE_EQ(weighted_degree(*g, 0), 3.0);
    EXPECT_THROW(weighted_degree(*g, 7), InvalidArgument);
}

TEST(WeightedDegree, CombToothVertex) {
    auto t = generate(family::Comb{}, 8);
    const auto& g = t.g();
    for (int n = 0; n <= 3; ++n)
        for (int k = 1; n + k < 8; ++k)
            EXPECT_DOUBLE_EQ(weighted_degree(g, by_label(g, {LabelKind::comb, {n, k}})),
                             std::ldexp(1.0, k) + std::ldexp(1.0, k + 1));
}

TEST(WeightedDegree, NaryTreeLevel) {
    for (int arity : {2, 3}) {
        const double b = 2.0;
        auto t = generate(family::NaryTree{arity, b}, 5);
        const auto& g = t.g();
        auto dist = bfs_distances(g, g.base_point());
        for (VertexId x = 0; x < g.num_vertices(); ++x) {
            const int n = dist[x];
            if (n == 0 || n == 5) continue;
            EXPECT_NEAR(weighted_degree(g, x), std::pow(b, n - 1) * (1 + arity * b), 1e-12);
        }
    }
}

TEST(Generate, HalfLineRadius3) {
    auto t = generate(family::HalfLine{}, 3);
    const auto& g = t.g();
    ASSERT_EQ(g.num_vertices(), 4u);
    for (int x = 0; x < 3; ++x)
        EXPECT_DOUBLE_EQ(g.conductance(by_label(g, {LabelKind::halfline, {x}}), by_label(g, {LabelKind::halfline, {x + 1}})),
                         std::exp(double(x)));
    ASSERT_EQ(t.frontier.size(), 1u);
    EXPECT_EQ(g.label(t.frontier[0]).to_string(), "3");
    EXPECT_EQ(g.base_point(), by_label(g, {LabelKind::halfline, {0}}));
}

TEST(Generate, NaryTreeRadius2) {
    auto t = generate(family::NaryTree{2, 2.0}, 2);
    const auto& g = t.g();
    EXPECT_EQ(g.num_vertices(), 7u);
    EXPECT_EQ(t.frontier.size(), 4u);
    const VertexId root = by_label(g, {LabelKind::tree_word, {}});
    const VertexId a = by_label(g, {LabelKind::tree_word, {1}});
    const VertexId b = by_label(g, {LabelKind::tree_word, {1, 0}});
    EXPECT_DOUBLE_EQ(g.conductance(root, a), 1.0);
    EXPECT_DOUBLE_EQ(g.conductance(a, b), 2.0);
}

TEST(Generate, CombRadius2) {
    auto t = generate(family::Comb{}, 2);
    const auto& g = t.g();
    std::set<std::string> labels;
    for (VertexId x = 0; x < g.num_vertices(); ++x) labels.insert(g.label(x).to_string());
    std::set<std::string> expected{"x(0,0)", "x(0,1)", "x(0,2)", "x(1,0)", "x(1,1)", "x(2,0)"};
    EXPECT_EQ(labels, expected);
    auto id = [&](int n, int k) { return by_label(g, {LabelKind::comb, {n, k}}); };
    EXPECT_DOUBLE_EQ(g.conductance(id(0, 0), id(0, 1)), 2.0);
    EXPECT_DOUBLE_EQ(g.conductance(id(0, 1), id(0, 2)), 4.0);
    EXPECT_DOUBLE_EQ(g.conductance(id(0, 0), id(1, 0)), 2.0);
    EXPECT_DOUBLE_EQ(g.conductance(id(1, 0), id(2, 0)), 4.0);
    EXPECT_EQ(t.frontier.size(), 3u);
}

TEST(Generate, ThreeResistor) {
    auto t = generate(family::ThreeResistor{1.0, 2.0, 3.0});
    EXPECT_TRUE(validate(t.g()).ok());
    EXPECT_TRUE(t.frontier.empty());
    EXPECT_EQ(t.g().num_edges(), 5u);
}

TEST(Generate, RejectsBadParameters) {
    EXPECT_THROW(generate(family::HalfLine{}, 0), InvalidArgument);
    EXPECT_THROW(generate(family::NaryTree{1, 2.0}, 3), InvalidArgument);
    EXPECT_THROW(generate(family::NaryTree{2, 1.0}, 3), InvalidArgument);
    EXPECT_THROW(generate(family::Lattice{0}, 3), InvalidArgument);
    EXPECT_THROW(generate(family::HalfLine{1.0}, 2000), InvalidArgument);
}

namespace {

std::vector<FamilySpec> all_infinite() {
    family::Bratteli br;
    br.root_weights = {1.0, 2.0};
    br.block = Eigen::MatrixXd::Ones(2, 2);
    br.scale = 2.0;
    return {family::HalfLine{}, family::Lattice{2}, family::Lattice{3}, family::BinaryTree{1.0, 2.0, 2.0},
            family::NaryTree{3, 2.0}, family::Comb{}, br, family::BinomialChain{0.6}};
}

}  // namespace

TEST(GenerateProperty, EveryFamilyValidates) {
    for (const auto& spec : all_infinite())
        for (int r = 1; r <= 5; ++r) {
            auto t = generate(spec, r);
            EXPECT_TRUE(validate(t.g()).ok()) << family_name(spec) << " R=" << r << ": " << validate(t.g()).summary();
            EXPECT_FALSE(t.is_frontier(t.g().base_point()));
            auto dist = bfs_distances(t.g(), t.g().base_point());
            for (VertexId x = 0; x < t.size(); ++x) {
                EXPECT_LE(dist[x], r);
                EXPECT_EQ(t.is_frontier(x), dist[x] == r);
            }
            EXPECT_EQ(t.interior.size() + t.frontier.size(), t.size());
        }
}

TEST(GenerateProperty, Deterministic) {
    for (const auto& spec : all_infinite()) {
        auto a = generate(spec, 4), b = generate(spec, 4);
        ASSERT_EQ(a.size(), b.size());
        EXPECT_EQ(a.g().labels(), b.g().labels());
        auto ea = a.g().edges(), eb = b.g().edges();
        ASSERT_EQ(ea.size(), eb.size());
        for (std::size_t i = 0; i < ea.size(); ++i) {
            EXPECT_EQ(ea[i].from, eb[i].from);
            EXPECT_EQ(ea[i].to, eb[i].to);
            EXPECT_EQ(ea[i].conductance, eb[i].conductance);
        }
    }
}

TEST(GenerateProperty, BallsAreNestedInducedSubgraphs) {
    for (const auto& spec : all_infinite())
        for (int r = 1; r <= 4; ++r) {
            auto small = generate(spec, r), big = generate(spec, r + 1);
            const auto& gs = small.g();
            const auto& gb = big.g();
            for (VertexId x = 0; x < gs.num_vertices(); ++x) {
                auto bx = gb.find(gs.label(x));
                ASSERT_TRUE(bx.has_value());
                EXPECT_EQ(*bx, x) << "BFS order must be stable";
                for (VertexId y = 0; y < gs.num_vertices(); ++y)
                    EXPECT_EQ(gs.conductance(x, y), gb.conductance(*bx, *gb.find(gs.label(y))));
            }
        }
}

TEST(GenerateProperty, RandomFamiliesConnected) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto t = generate(family::RandomGraph{30, 15, seed});
        EXPECT_TRUE(validate(t.g()).ok());
        EXPECT_EQ(t.g().num_edges(), 29u + 15u);
        auto tr = generate(family::RandomTree{25, seed});
        EXPECT_TRUE(validate(tr.g()).ok());
        EXPECT_EQ(tr.g().num_edges(), 24u);
        for (const Edge& e : t.g().edges()) {
            EXPECT_GE(e.conductance, 0.1);
            EXPECT_LE(e.conductance, 10.0);
        }
    }
}

TEST(Truncation, BaseOnFrontierRejected) {
    auto g = make_graph(2, {{0, 1, 1.0}});
    EXPECT_THROW(TruncatedGraph::with_frontier(g, {0}, 1), InvalidArgument);
}

TEST(Labels, StringForms) {
    EXPECT_EQ((VertexLabel{LabelKind::tree_word, {}}).to_string(), "w:root");
    EXPECT_EQ((VertexLabel{LabelKind::tree_word, {0, 1}}).to_string(), "w:01");
    EXPECT_EQ((VertexLabel{LabelKind::comb, {2, 3}}).to_string(), "x(2,3)");
    EXPECT_EQ((VertexLabel{LabelKind::bratteli, {1, 0}}).to_string(), "v(1,0)");
    EXPECT_EQ((VertexLabel{LabelKind::lattice, {1, 2}}).to_string(), "(1,2)");
}
