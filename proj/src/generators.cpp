#include "resnet/generators.hpp"

#include <cmath>
#include <algorithm>
#include <random>
#include <set>

#include "ball.hpp"
#include "resnet/error.hpp"

namespace resnet {

namespace {

using detail::LabeledNeighbor;

constexpr double kMaxWeight = 1e300;

double checked(double w) {
    if (!std::isfinite(w) || w > kMaxWeight || w <= 0.0)
        throw InvalidArgument("conductance out of double range; reduce the truncation radius or the growth parameters");
    return w;
}

double norm(const std::vector<int>& x) {
    double s = 0.0;
    for (int v : x) s += static_cast<double>(v) * v;
    return std::sqrt(s);
}

// Uniform in [0, 1) from the top 53 bits; avoids implementation-defined std distributions.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo * std::exp(unit(rng) * std::log(hi / lo));
}

std::size_t below(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>(unit(rng) * static_cast<double>(n)) % n;
}

void check_weight_range(double lo, double hi) {
    if (!(lo > 0.0) || !(hi >= lo)) throw InvalidArgument("weights need 0 < min_weight <= max_weight");
}

TruncatedGraph finite(std::size_t n, const std::vector<Edge>& edges, VertexId base, int radius,
                      std::vector<VertexLabel> labels = {}) {
    if (labels.empty()) {
        labels.reserve(n);
        for (std::size_t i = 0; i < n; ++i) labels.push_back({LabelKind::index, {static_cast<int>(i)}});
    }
    auto graph = std::make_shared<const ConductanceGraph>(ConductanceGraph::from_edges(n, edges, base, std::move(labels)));
    if (radius <= 0) return TruncatedGraph::whole(std::move(graph));
    return TruncatedGraph::ball(*graph, radius);
}

struct Visitor {
    int radius;

    TruncatedGraph operator()(const family::EdgeList& f) const {
        if (f.vertices == 0) throw InvalidArgument("edge list needs at least one vertex");
        if (f.base_point >= f.vertices) throw InvalidArgument("base point out of range");
        return finite(f.vertices, f.edges, f.base_point, radius);
    }

    TruncatedGraph operator()(const family::HalfLine& f) const {
        if (!std::isfinite(f.growth)) throw InvalidArgument("half-line growth must be finite");
        auto nb = [&](const VertexLabel& l, std::vector<LabeledNeighbor>& out) {
            const int x = l.coords[0];
            if (x > 0) out.push_back({{LabelKind::halfline, {x - 1}}, checked(std::exp(f.growth * (x - 1)))});
            out.push_back({{LabelKind::halfline, {x + 1}}, checked(std::exp(f.growth * x))});
        };
        return detail::build_ball({LabelKind::halfline, {0}}, nb, radius);
    }

    TruncatedGraph operator()(const family::Lattice& f) const {
        if (f.dim < 1) throw InvalidArgument("lattice dimension must be >= 1");
        auto nb = [&](const VertexLabel& l, std::vector<LabeledNeighbor>& out) {
            for (int i = 0; i < f.dim; ++i) {
                if (l.coords[i] > 0) {
                    VertexLabel down = l;
                    --down.coords[i];
                    out.push_back({std::move(down), checked(std::exp(norm(l.coords)))});
                }
                VertexLabel up = l;
                ++up.coords[i];
                const double w = checked(std::exp(norm(up.coords)));
                out.push_back({std::move(up), w});
            }
        };
        return detail::build_ball({LabelKind::lattice, std::vector<int>(f.dim, 0)}, nb, radius);
    }

    TruncatedGraph operator()(const family::BinaryTree& f) const {
        if (!(f.minus_scale > 0.0) || !(f.plus_scale > 0.0) || !(f.growth > 0.0))
            throw InvalidArgument("binary tree scales and growth must be > 0");
        auto weight = [&](int digit, int level) {
            return checked((digit ? f.plus_scale : f.minus_scale) * std::pow(f.growth, level));
        };
        auto nb = [&](const VertexLabel& l, std::vector<LabeledNeighbor>& out) {
            const int level = static_cast<int>(l.coords.size());
            if (level > 0) {
                VertexLabel parent = l;
                parent.coords.pop_back();
                out.push_back({std::move(parent), weight(l.coords.back(), level - 1)});
            }
            for (int digit : {0, 1}) {
                VertexLabel child = l;
                child.coords.push_back(digit);
                out.push_back({std::move(child), weight(digit, level)});
            }
        };
        return detail::build_ball({LabelKind::tree_word, {}}, nb, radius);
    }

    TruncatedGraph operator()(const family::NaryTree& f) const {
        if (f.arity < 2) throw InvalidArgument("N-ary tree needs N >= 2");
        if (!(f.b > 1.0)) throw InvalidArgument("N-ary tree needs b > 1");
        auto nb = [&](const VertexLabel& l, std::vector<LabeledNeighbor>& out) {
            const int level = static_cast<int>(l.coords.size());
            if (level > 0) {
                VertexLabel parent = l;
                parent.coords.pop_back();
                out.push_back({std::move(parent), checked(std::pow(f.b, level - 1))});
            }
            for (int digit = 0; digit < f.arity; ++digit) {
                VertexLabel child = l;
                child.coords.push_back(digit);
                out.push_back({std::move(child), checked(std::pow(f.b, level))});
            }
        };
        return detail::build_ball({LabelKind::tree_word, {}}, nb, radius);
    }

    TruncatedGraph operator()(const family::Comb&) const {
        auto nb = [&](const VertexLabel& l, std::vector<LabeledNeighbor>& out) {
            const int n = l.coords[0];
            const int k = l.coords[1];
            if (k == 0) {
                if (n > 0) out.push_back({{LabelKind::comb, {n - 1, 0}}, checked(std::ldexp(1.0, n))});
                out.push_back({{LabelKind::comb, {n + 1, 0}}, checked(std::ldexp(1.0, n + 1))});
            } else {
                out.push_back({{LabelKind::comb, {n, k - 1}}, checked(std::ldexp(1.0, k))});
            }
            out.push_back({{LabelKind::comb, {n, k + 1}}, checked(std::ldexp(1.0, k + 1))});
        };
        return detail::build_ball({LabelKind::comb, {0, 0}}, nb, radius);
    }

    TruncatedGraph operator()(const family::Bratteli& f) const {
        const auto width = static_cast<Eigen::Index>(f.root_weights.size());
        if (width == 0) throw InvalidArgument("Bratteli diagram needs at least one level-1 vertex");
        if (f.block.rows() != width || f.block.cols() != width)
            throw InvalidArgument("Bratteli block must be square with one row per level-1 vertex");
        if ((f.block.array() < 0.0).any()) throw InvalidArgument("Bratteli block entries must be >= 0");
        for (double w : f.root_weights)
            if (!(w > 0.0)) throw InvalidArgument("Bratteli root weights must be > 0");
        if (!(f.scale > 0.0)) throw InvalidArgument("Bratteli scale must be > 0");

        auto nb = [&](const VertexLabel& l, std::vector<LabeledNeighbor>& out) {
            const int level = l.coords[0];
            const int slot = l.coords[1];
            if (level == 0) {
                for (Eigen::Index j = 0; j < width; ++j)
                    out.push_back({{LabelKind::bratteli, {1, static_cast<int>(j)}}, checked(f.root_weights[j])});
                return;
            }
            if (level == 1) {
                out.push_back({{LabelKind::bratteli, {0, 0}}, checked(f.root_weights[slot])});
            } else {
                const double s = std::pow(f.scale, level - 1);
                for (Eigen::Index i = 0; i < width; ++i)
                    if (f.block(i, slot) > 0.0)
                        out.push_back({{LabelKind::bratteli, {level - 1, static_cast<int>(i)}}, checked(f.block(i, slot) * s)});
            }
            const double s = std::pow(f.scale, level);
            for (Eigen::Index j = 0; j < width; ++j)
                if (f.block(slot, j) > 0.0)
                    out.push_back({{LabelKind::bratteli, {level + 1, static_cast<int>(j)}}, checked(f.block(slot, j) * s)});
        };
        return detail::build_ball({LabelKind::bratteli, {0, 0}}, nb, radius);
    }

    TruncatedGraph operator()(const family::ThreeResistor& f) const {
        for (double r : {f.r1, f.r2, f.r3})
            if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("resistances must be positive and finite");
        // x=0, a=1, branch midpoints 2 and 3, y=4.
        const std::vector<Edge> edges = {
            {0, 1, 1.0 / f.r1},
            {1, 2, 2.0 / f.r2}, {2, 4, 2.0 / f.r2},
            {1, 3, 2.0 / f.r3}, {3, 4, 2.0 / f.r3},
        };
        return finite(5, edges, 0, radius);
    }

    TruncatedGraph operator()(const family::BinomialChain& f) const {
        if (!(f.p_plus > 0.0 && f.p_plus < 1.0)) throw InvalidArgument("binomial chain needs 0 < p_plus < 1");
        const double ratio = f.p_plus / (1.0 - f.p_plus);
        auto nb = [&, ratio](const VertexLabel& l, std::vector<LabeledNeighbor>& out) {
            const int i = l.coords[0];
            out.push_back({{LabelKind::chain, {i - 1}}, checked(std::pow(ratio, i - 1))});
            out.push_back({{LabelKind::chain, {i + 1}}, checked(std::pow(ratio, i))});
        };
        return detail::build_ball({LabelKind::chain, {0}}, nb, radius);
    }

    TruncatedGraph operator()(const family::RandomTree& f) const {
        if (f.vertices < 2) throw InvalidArgument("random tree needs at least 2 vertices");
        check_weight_range(f.min_weight, f.max_weight);
        std::mt19937_64 rng(f.seed);
        std::vector<Edge> edges;
        for (VertexId v = 1; v < f.vertices; ++v)
            edges.push_back({below(rng, v), v, log_uniform(rng, f.min_weight, f.max_weight)});
        return finite(f.vertices, edges, 0, radius);
    }

    TruncatedGraph operator()(const family::RandomGraph& f) const {
        if (f.vertices < 2) throw InvalidArgument("random graph needs at least 2 vertices");
        check_weight_range(f.min_weight, f.max_weight);
        std::mt19937_64 rng(f.seed);
        std::vector<Edge> edges;
        std::set<std::pair<VertexId, VertexId>> present;
        for (VertexId v = 1; v < f.vertices; ++v) {
            VertexId u = below(rng, v);
            edges.push_back({u, v, log_uniform(rng, f.min_weight, f.max_weight)});
            present.emplace(u, v);
        }
        const std::size_t max_edges = f.vertices * (f.vertices - 1) / 2;
        const std::size_t target = std::min(max_edges, edges.size() + f.extra_edges);
        while (edges.size() < target) {
            VertexId a = below(rng, f.vertices), b = below(rng, f.vertices);
            if (a == b) continue;
            if (a > b) std::swap(a, b);
            if (!present.emplace(a, b).second) continue;
            edges.push_back({a, b, log_uniform(rng, f.min_weight, f.max_weight)});
        }
        return finite(f.vertices, edges, 0, radius);
    }
};

}  // namespace

bool is_infinite(const FamilySpec& spec) {
    return std::holds_alternative<family::HalfLine>(spec) || std::holds_alternative<family::Lattice>(spec) ||
           std::holds_alternative<family::BinaryTree>(spec) || std::holds_alternative<family::NaryTree>(spec) ||
           std::holds_alternative<family::Comb>(spec) || std::holds_alternative<family::Bratteli>(spec) ||
           std::holds_alternative<family::BinomialChain>(spec);
}

std::string family_name(const FamilySpec& spec) {
    static const char* names[] = {"edge-list", "halfline", "lattice", "binary-tree", "nary-tree", "comb",
                                  "bratteli", "three-resistor", "binomial-chain", "random-tree", "random-graph"};
    return names[spec.index()];
}

TruncatedGraph generate(const FamilySpec& spec, int radius) {
    if (is_infinite(spec) && radius < 1)
        throw InvalidArgument(family_name(spec) + " is infinite: truncation radius R >= 1 required");
    return std::visit(Visitor{radius}, spec);
}

ResistorTerminals three_resistor_terminals() { return {0, 4}; }

}  // namespace resnet
