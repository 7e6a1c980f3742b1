#include "resnet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "ball.hpp"
#include "resnet/error.hpp"

namespace resnet {

namespace {

constexpr std::pair<LabelKind, std::string_view> kLabelNames[] = {
    {LabelKind::none, "none"},       {LabelKind::index, "index"},
    {LabelKind::halfline, "halfline"}, {LabelKind::chain, "chain"},
    {LabelKind::lattice, "lattice"}, {LabelKind::tree_word, "tree"},
    {LabelKind::comb, "comb"},       {LabelKind::bratteli, "bratteli"},
};

}  // namespace

std::string_view to_string(LabelKind kind) {
    for (const auto& [k, name] : kLabelNames)
        if (k == kind) return name;
    return "none";
}

std::optional<LabelKind> label_kind_from_string(std::string_view name) {
    for (const auto& [k, n] : kLabelNames)
        if (n == name) return k;
    return std::nullopt;
}

std::string VertexLabel::to_string() const {
    std::ostringstream out;
    switch (kind) {
        case LabelKind::none:
            return "";
        case LabelKind::tree_word:
            out << "w:";
            if (coords.empty()) out << "root";
            for (int d : coords) out << d;
            return out.str();
        case LabelKind::comb:
            out << "x(" << coords.at(0) << "," << coords.at(1) << ")";
            return out.str();
        case LabelKind::bratteli:
            out << "v(" << coords.at(0) << "," << coords.at(1) << ")";
            return out.str();
        default:
            break;
    }
    if (coords.size() == 1) return std::to_string(coords[0]);
    out << "(";
    for (std::size_t i = 0; i < coords.size(); ++i) out << (i ? "," : "") << coords[i];
    out << ")";
    return out.str();
}

ConductanceGraph ConductanceGraph::from_arcs(std::size_t num_vertices, std::span<const Edge> arcs,
                                             VertexId base_point, std::vector<VertexLabel> labels) {
    ConductanceGraph g;
    g.base_point_ = base_point;
    g.labels_ = std::move(labels);
    g.offsets_.assign(num_vertices + 1, 0);
    for (const Edge& a : arcs) {
        if (a.from >= num_vertices || a.to >= num_vertices)
            throw InvalidArgument("edge endpoint out of range: (" + std::to_string(a.from) + ", " +
                                  std::to_string(a.to) + ") with " + std::to_string(num_vertices) +
                                  " vertices");
        ++g.offsets_[a.from + 1];
    }
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());

    std::vector<Edge> sorted(arcs.begin(), arcs.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](const Edge& a, const Edge& b) {
        return a.from != b.from ? a.from < b.from : a.to < b.to;
    });
    g.targets_.reserve(sorted.size());
    g.weights_.reserve(sorted.size());
    for (const Edge& a : sorted) {
        g.targets_.push_back(a.to);
        g.weights_.push_back(a.conductance);
    }
    return g;
}

ConductanceGraph ConductanceGraph::from_edges(std::size_t num_vertices, std::span<const Edge> edges,
                                              VertexId base_point, std::vector<VertexLabel> labels) {
    std::vector<Edge> arcs;
    arcs.reserve(2 * edges.size());
    for (const Edge& e : edges) {
        arcs.push_back(e);
        arcs.push_back({e.to, e.from, e.conductance});
    }
    return from_arcs(num_vertices, arcs, base_point, std::move(labels));
}

double ConductanceGraph::conductance(VertexId x, VertexId y) const {
    auto nbrs = neighbors(x);
    auto it = std::lower_bound(nbrs.begin(), nbrs.end(), y);
    if (it == nbrs.end() || *it != y) return 0.0;
    return weights(x)[static_cast<std::size_t>(it - nbrs.begin())];
}

std::vector<Edge> ConductanceGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges());
    for (VertexId x = 0; x < num_vertices(); ++x) {
        auto nbrs = neighbors(x);
        auto w = weights(x);
        for (std::size_t i = 0; i < nbrs.size(); ++i)
            if (x < nbrs[i]) out.push_back({x, nbrs[i], w[i]});
    }
    return out;
}

VertexLabel ConductanceGraph::label(VertexId x) const {
    if (labels_.empty()) return {LabelKind::index, {static_cast<int>(x)}};
    return labels_.at(x);
}

std::optional<VertexId> ConductanceGraph::find(const VertexLabel& label) const {
    for (VertexId x = 0; x < labels_.size(); ++x)
        if (labels_[x] == label) return x;
    return std::nullopt;
}

bool ValidationReport::mentions(std::string_view keyword) const {
    return std::any_of(issues.begin(), issues.end(),
                       [&](const std::string& s) { return s.find(keyword) != std::string::npos; });
}

std::string ValidationReport::summary() const {
    std::string out;
    for (const auto& s : issues) {
        if (!out.empty()) out += "; ";
        out += s;
    }
    return out;
}

ValidationReport validate(const ConductanceGraph& graph) {
    ValidationReport report;
    const std::size_t n = graph.num_vertices();
    if (n == 0) {
        report.issues.push_back("empty graph");
        return report;
    }
    if (graph.base_point() >= n) {
        report.issues.push_back("base point " + std::to_string(graph.base_point()) + " out of range");
        return report;
    }

    std::size_t asymmetric = 0, nonpositive = 0, self_loops = 0, duplicates = 0, isolated = 0;
    for (VertexId x = 0; x < n; ++x) {
        auto nbrs = graph.neighbors(x);
        auto w = graph.weights(x);
        if (nbrs.empty()) ++isolated;
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            const VertexId y = nbrs[i];
            if (i > 0 && nbrs[i - 1] == y) ++duplicates;
            if (y == x) {
                ++self_loops;
                continue;
            }
            if (!(w[i] > 0.0) || !std::isfinite(w[i])) ++nonpositive;
            if (graph.conductance(y, x) != w[i]) ++asymmetric;
        }
    }
    if (asymmetric) report.issues.push_back("asymmetric: " + std::to_string(asymmetric) + " arcs without a matching reverse arc");
    if (nonpositive) report.issues.push_back("nonpositive weight: " + std::to_string(nonpositive) + " arcs");
    if (self_loops) report.issues.push_back("self-loop: " + std::to_string(self_loops) + " arcs");
    if (duplicates) report.issues.push_back("duplicate edge: " + std::to_string(duplicates) + " arcs");
    if (isolated) report.issues.push_back("zero degree: " + std::to_string(isolated) + " vertices");

    auto dist = bfs_distances(graph, graph.base_point());
    const auto unreached = std::count(dist.begin(), dist.end(), -1);
    if (unreached) report.issues.push_back("disconnected: " + std::to_string(unreached) + " vertices unreachable from base point");

    if (graph.has_labels()) {
        if (graph.labels().size() != n) {
            report.issues.push_back("label count mismatch");
        } else {
            std::set<VertexLabel> seen(graph.labels().begin(), graph.labels().end());
            if (seen.size() != n) report.issues.push_back("duplicate labels");
        }
    }
    return report;
}

void require_valid(const ConductanceGraph& graph) {
    auto report = validate(graph);
    if (!report.ok()) throw ValidationError("invalid graph: " + report.summary());
}

double weighted_degree(const ConductanceGraph& graph, VertexId x) {
    if (!graph.contains(x)) throw InvalidArgument("unknown vertex " + std::to_string(x));
    double sum = 0.0;
    for (double w : graph.weights(x)) sum += w;
    return sum;
}

std::vector<int> bfs_distances(const ConductanceGraph& graph, VertexId source) {
    std::vector<int> dist(graph.num_vertices(), -1);
    if (!graph.contains(source)) return dist;
    std::queue<VertexId> queue;
    dist[source] = 0;
    queue.push(source);
    while (!queue.empty()) {
        VertexId x = queue.front();
        queue.pop();
        for (VertexId y : graph.neighbors(x)) {
            if (dist[y] < 0) {
                dist[y] = dist[x] + 1;
                queue.push(y);
            }
        }
    }
    return dist;
}

TruncatedGraph TruncatedGraph::with_frontier(GraphPtr graph, std::vector<VertexId> frontier, int radius) {
    TruncatedGraph t;
    t.graph = std::move(graph);
    t.radius = radius;
    const std::size_t n = t.graph->num_vertices();
    t.frontier_mask_.assign(n, 0);
    for (VertexId b : frontier) {
        if (b >= n) throw InvalidArgument("frontier vertex " + std::to_string(b) + " out of range");
        if (b == t.graph->base_point()) throw InvalidArgument("base point cannot lie on the frontier");
        t.frontier_mask_[b] = 1;
    }
    for (VertexId x = 0; x < n; ++x) (t.frontier_mask_[x] ? t.frontier : t.interior).push_back(x);
    return t;
}

TruncatedGraph TruncatedGraph::whole(GraphPtr graph) {
    auto dist = bfs_distances(*graph, graph->base_point());
    const int ecc = dist.empty() ? 0 : *std::max_element(dist.begin(), dist.end());
    return with_frontier(std::move(graph), {}, ecc);
}

TruncatedGraph TruncatedGraph::ball(const ConductanceGraph& graph, int radius) {
    if (radius < 1) throw InvalidArgument("truncation radius must be >= 1");
    std::map<VertexLabel, VertexId> index;
    for (VertexId x = 0; x < graph.num_vertices(); ++x) index.emplace(graph.label(x), x);
    if (index.size() != graph.num_vertices()) throw InvalidArgument("ball truncation needs unique labels");

    auto neighbors = [&](const VertexLabel& label, std::vector<detail::LabeledNeighbor>& out) {
        const VertexId x = index.at(label);
        auto nbrs = graph.neighbors(x);
        auto w = graph.weights(x);
        for (std::size_t i = 0; i < nbrs.size(); ++i) out.push_back({graph.label(nbrs[i]), w[i]});
    };
    return detail::build_ball(graph.label(graph.base_point()), neighbors, radius);
}

namespace detail {

TruncatedGraph build_ball(const VertexLabel& root, const NeighborFn& neighbors, int radius) {
    std::map<VertexLabel, VertexId> index;
    std::vector<VertexLabel> labels;
    std::vector<int> depth;
    std::vector<std::vector<LabeledNeighbor>> adjacency;

    index.emplace(root, 0);
    labels.push_back(root);
    depth.push_back(0);

    std::vector<LabeledNeighbor> buffer;
    for (std::size_t head = 0; head < labels.size(); ++head) {
        buffer.clear();
        neighbors(labels[head], buffer);
        adjacency.push_back(buffer);
        if (depth[head] == radius) continue;
        for (const auto& nb : buffer) {
            if (index.emplace(nb.label, labels.size()).second) {
                labels.push_back(nb.label);
                depth.push_back(depth[head] + 1);
            }
        }
    }

    std::vector<Edge> arcs;
    std::vector<VertexId> frontier;
    for (VertexId x = 0; x < labels.size(); ++x) {
        if (depth[x] == radius) frontier.push_back(x);
        for (const auto& nb : adjacency[x]) {
            auto it = index.find(nb.label);
            if (it != index.end()) arcs.push_back({x, it->second, nb.weight});
        }
    }
    const std::size_t n = labels.size();
    auto graph = std::make_shared<const ConductanceGraph>(ConductanceGraph::from_arcs(n, arcs, 0, std::move(labels)));
    return TruncatedGraph::with_frontier(std::move(graph), std::move(frontier), radius);
}

}  // namespace detail

}  // namespace resnet
