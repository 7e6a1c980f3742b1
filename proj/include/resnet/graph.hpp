#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace resnet {

using VertexId = std::size_t;

enum class LabelKind { none, index, halfline, chain, lattice, tree_word, comb, bratteli };

std::string_view to_string(LabelKind kind);
std::optional<LabelKind> label_kind_from_string(std::string_view name);

// Generator coordinate of a vertex: a lattice point, a tree word (digit per
// level), a comb pair (n, k), a Bratteli (level, slot), ...
struct VertexLabel {
    LabelKind kind = LabelKind::none;
    std::vector<int> coords;

    std::string to_string() const;

    friend bool operator==(const VertexLabel&, const VertexLabel&) = default;
    friend auto operator<=>(const VertexLabel&, const VertexLabel&) = default;
};

struct Edge {
    VertexId from = 0;
    VertexId to = 0;
    double conductance = 0.0;
};

// Weighted graph in compressed sparse row form. Construction does not
// enforce the conductance invariants; call validate() / require_valid().
class ConductanceGraph {
public:
    ConductanceGraph() = default;

    // Each undirected edge listed once; stored in both directions.
    static ConductanceGraph from_edges(std::size_t num_vertices, std::span<const Edge> edges,
                                       VertexId base_point, std::vector<VertexLabel> labels = {});

    // Directed arcs stored exactly as given (used by loaders and to exercise validation).
    static ConductanceGraph from_arcs(std::size_t num_vertices, std::span<const Edge> arcs,
                                      VertexId base_point, std::vector<VertexLabel> labels = {});

    std::size_t num_vertices() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t num_arcs() const { return targets_.size(); }
    std::size_t num_edges() const { return targets_.size() / 2; }
    VertexId base_point() const { return base_point_; }

    std::span<const VertexId> neighbors(VertexId x) const {
        return {targets_.data() + offsets_[x], offsets_[x + 1] - offsets_[x]};
    }
    std::span<const double> weights(VertexId x) const {
        return {weights_.data() + offsets_[x], offsets_[x + 1] - offsets_[x]};
    }

    bool contains(VertexId x) const { return x < num_vertices(); }
    // c_xy, or 0 when x and y are not adjacent.
    double conductance(VertexId x, VertexId y) const;

    // Undirected edges with from < to, each once (weight of the from→to arc).
    std::vector<Edge> edges() const;

    bool has_labels() const { return !labels_.empty(); }
    const std::vector<VertexLabel>& labels() const { return labels_; }
    VertexLabel label(VertexId x) const;
    std::optional<VertexId> find(const VertexLabel& label) const;

private:
    std::vector<std::size_t> offsets_;
    std::vector<VertexId> targets_;
    std::vector<double> weights_;
    VertexId base_point_ = 0;
    std::vector<VertexLabel> labels_;
};

using GraphPtr = std::shared_ptr<const ConductanceGraph>;

struct ValidationReport {
    std::vector<std::string> issues;

    bool ok() const { return issues.empty(); }
    bool mentions(std::string_view keyword) const;
    std::string summary() const;
};

// Checks symmetry, positive weights, no self-loops, nonzero degree,
// connectivity from the base point and label uniqueness. Never throws.
ValidationReport validate(const ConductanceGraph& graph);

// Throws ValidationError carrying the report summary.
void require_valid(const ConductanceGraph& graph);

// c(x) = sum of incident conductances.
double weighted_degree(const ConductanceGraph& graph, VertexId x);

// Hop distances from source; -1 for unreachable vertices.
std::vector<int> bfs_distances(const ConductanceGraph& graph, VertexId source);

// Finite grounded instance: interior vertices plus an absorbing frontier.
struct TruncatedGraph {
    GraphPtr graph;
    std::vector<VertexId> interior;
    std::vector<VertexId> frontier;
    int radius = 0;

    const ConductanceGraph& g() const { return *graph; }
    std::size_t size() const { return graph->num_vertices(); }
    bool is_frontier(VertexId x) const { return frontier_mask_.at(x) != 0; }
    const std::vector<char>& frontier_mask() const { return frontier_mask_; }

    // Whole finite graph, empty frontier; radius is the eccentricity of o.
    static TruncatedGraph whole(GraphPtr graph);
    // Explicit frontier set.
    static TruncatedGraph with_frontier(GraphPtr graph, std::vector<VertexId> frontier, int radius);
    // Induced closed ball of the given radius around o, reindexed in BFS order;
    // vertices at distance exactly `radius` form the frontier.
    static TruncatedGraph ball(const ConductanceGraph& graph, int radius);

private:
    std::vector<char> frontier_mask_;
};

}  // namespace resnet
