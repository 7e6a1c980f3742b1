#pragma once

#include <functional>
#include <vector>

#include "resnet/graph.hpp"

namespace resnet::detail {

struct LabeledNeighbor {
    VertexLabel label;
    double weight;
};

using NeighborFn = std::function<void(const VertexLabel&, std::vector<LabeledNeighbor>&)>;

// Breadth-first closed ball of radius R around `root` in the graph described
// by `neighbors`. Indices follow BFS discovery order; the induced subgraph is
// kept, so the ball at R is label-matched induced in the ball at R + 1.
TruncatedGraph build_ball(const VertexLabel& root, const NeighborFn& neighbors, int radius);

}  // namespace resnet::detail
