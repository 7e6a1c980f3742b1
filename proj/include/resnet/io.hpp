#pragma once

#include <filesystem>
#include <iosfwd>

#include "json.hpp"
#include "resnet/graph.hpp"

namespace resnet {

using Json = nlohmann::ordered_json;

// {"vertices": N, "base_point": o, "edges": [[x, y, c], ...], "labels": [...],
//  "frontier": [...], "radius": R, "meta": {...}}; labels, frontier, radius and meta optional.
Json graph_to_json(const TruncatedGraph& trunc, const Json& meta = Json::object());

// Edges listed once are stored in both directions; an edge listed in both
// orientations is taken as two arcs, so mismatched weights fail validation.
// Throws ValidationError for malformed documents and invalid graphs.
TruncatedGraph graph_from_json(const Json& doc);

void save_graph(std::ostream& out, const TruncatedGraph& trunc, const Json& meta = Json::object());
TruncatedGraph load_graph(std::istream& in);
// Throws InvalidArgument when the file cannot be opened.
TruncatedGraph load_graph_file(const std::filesystem::path& path);
void save_graph_file(const std::filesystem::path& path, const TruncatedGraph& trunc, const Json& meta = Json::object());

// v rounded to `digits` significant digits; non-finite values unchanged.
double round_significant(double v, int digits = 12);

// Report number: 12 significant digits, null for non-finite values.
Json report_number(double v);

}  // namespace resnet
