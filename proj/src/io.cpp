#include "resnet/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>

#include "resnet/error.hpp"

namespace resnet {

namespace {

Json label_to_json(const VertexLabel& l) { return Json{{"kind", std::string(to_string(l.kind))}, {"coords", l.coords}}; }

VertexLabel label_from_json(const Json& j) {
    const auto kind = label_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) throw ValidationError("graph file: unknown label kind " + j.at("kind").dump());
    return {*kind, j.at("coords").get<std::vector<int>>()};
}

VertexId vertex_id(const Json& j, std::size_t n, const char* what) {
    if (!j.is_number_integer() || j.get<long long>() < 0 || static_cast<std::size_t>(j.get<long long>()) >= n)
        throw ValidationError(std::string("graph file: ") + what + " " + j.dump() + " is not a vertex index below " + std::to_string(n));
    return static_cast<VertexId>(j.get<long long>());
}

}  // namespace

Json graph_to_json(const TruncatedGraph& trunc, const Json& meta) {
    const auto& g = trunc.g();
    Json doc;
    doc["vertices"] = g.num_vertices();
    doc["base_point"] = g.base_point();
    Json edges = Json::array();
    for (const Edge& e : g.edges()) edges.push_back(Json::array({e.from, e.to, e.conductance}));
    doc["edges"] = std::move(edges);
    if (g.has_labels()) {
        Json labels = Json::array();
        for (const auto& l : g.labels()) labels.push_back(label_to_json(l));
        doc["labels"] = std::move(labels);
    }
    if (!trunc.frontier.empty()) {
        doc["frontier"] = trunc.frontier;
        doc["radius"] = trunc.radius;
    }
    if (!meta.empty()) doc["meta"] = meta;
    return doc;
}

TruncatedGraph graph_from_json(const Json& doc) {
    try {
        if (!doc.is_object()) throw ValidationError("graph file: top level must be an object");
        const auto n_json = doc.at("vertices");
        if (!n_json.is_number_integer() || n_json.get<long long>() <= 0)
            throw ValidationError("graph file: \"vertices\" must be a positive integer");
        const auto n = static_cast<std::size_t>(n_json.get<long long>());
        const VertexId base = vertex_id(doc.at("base_point"), n, "base_point");

        std::map<std::pair<VertexId, VertexId>, double> entries;
        for (const auto& e : doc.at("edges")) {
            if (!e.is_array() || e.size() != 3 || !e[2].is_number())
                throw ValidationError("graph file: edge entries must be [x, y, c], got " + e.dump());
            const VertexId x = vertex_id(e[0], n, "edge endpoint"), y = vertex_id(e[1], n, "edge endpoint");
            if (!entries.emplace(std::make_pair(x, y), e[2].get<double>()).second)
                throw ValidationError("graph file: duplicate edge " + e.dump());
        }
        std::vector<Edge> arcs;
        arcs.reserve(2 * entries.size());
        for (const auto& [xy, c] : entries) {
            arcs.push_back({xy.first, xy.second, c});
            if (!entries.count({xy.second, xy.first})) arcs.push_back({xy.second, xy.first, c});
        }
        std::vector<VertexLabel> labels;
        if (doc.contains("labels")) {
            for (const auto& l : doc.at("labels")) labels.push_back(label_from_json(l));
            if (labels.size() != n) throw ValidationError("graph file: label count differs from vertex count");
        }
        auto graph = std::make_shared<const ConductanceGraph>(ConductanceGraph::from_arcs(n, arcs, base, std::move(labels)));
        require_valid(*graph);
        if (!doc.contains("frontier")) return TruncatedGraph::whole(graph);
        std::vector<VertexId> frontier;
        for (const auto& b : doc.at("frontier")) frontier.push_back(vertex_id(b, n, "frontier vertex"));
        const int radius = doc.contains("radius") ? doc.at("radius").get<int>() : 0;
        return TruncatedGraph::with_frontier(graph, std::move(frontier), radius);
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("graph file: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw ValidationError(std::string("graph file: ") + e.what());
    }
}

void save_graph(std::ostream& out, const TruncatedGraph& trunc, const Json& meta) {
    out << graph_to_json(trunc, meta).dump(2) << '\n';
}

TruncatedGraph load_graph(std::istream& in) {
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("graph file: ") + e.what());
    }
    return graph_from_json(doc);
}

TruncatedGraph load_graph_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open " + path.string());
    return load_graph(in);
}

void save_graph_file(const std::filesystem::path& path, const TruncatedGraph& trunc, const Json& meta) {
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot write " + path.string());
    save_graph(out, trunc, meta);
}

double round_significant(double v, int digits) {
    if (!std::isfinite(v) || v == 0.0) return v;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return std::strtod(buf, nullptr);
}

Json report_number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return round_significant(v, 12);
}

}  // namespace resnet
