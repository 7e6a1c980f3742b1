#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "resnet/graph.hpp"

namespace resnet {

namespace family {

// Finite graph given by its edges (each undirected edge once).
struct EdgeList {
    std::size_t vertices = 0;
    VertexId base_point = 0;
    std::vector<Edge> edges;
};

// Z+ with c_{x,x+1} = exp(growth * x). growth = 0 gives unit conductances.
struct HalfLine {
    double growth = 1.0;
};

// Z^d_+ with c(x, x + e_i) = exp(|x + e_i|), Euclidean norm.
struct Lattice {
    int dim = 2;
};

// Binary tree; a level-n vertex connects to its children with
// c_-(n) = minus_scale * growth^n (digit 0) and c_+(n) = plus_scale * growth^n (digit 1).
struct BinaryTree {
    double minus_scale = 1.0;
    double plus_scale = 1.0;
    double growth = 2.0;
};

// N-ary tree with c(n) = b^n on every edge from level n to level n + 1.
struct NaryTree {
    int arity = 2;
    double b = 2.0;
};

// Spine x_{n,0} with an infinite tooth x_{n,k}, k >= 0, at every n.
// Tooth edge x_{n,k} - x_{n,k+1} carries 2^{k+1}; spine edge x_{n,0} - x_{n+1,0} carries 2^{n+1}.
struct Comb {};

// Stationary Bratteli diagram: root -> level-1 slot j with root_weights[j];
// level n slot i -> level n+1 slot j with block(i, j) * scale^n (zero entries are absent edges).
struct Bratteli {
    std::vector<double> root_weights{1.0};
    Eigen::MatrixXd block = Eigen::MatrixXd::Ones(1, 1);
    double scale = 1.0;
};

// x --r1-- a, then r2 and r3 in parallel from a to y. Each parallel branch is
// split at a midpoint into two halves so the branches stay distinct edges.
struct ThreeResistor {
    double r1 = 1.0;
    double r2 = 1.0;
    double r3 = 1.0;
};

// Bi-infinite chain on Z with constant forward probability p_plus:
// c_{i,i+1} = (p_plus / (1 - p_plus))^i, base point 0.
struct BinomialChain {
    double p_plus = 2.0 / 3.0;
};

// Uniform random recursive tree, conductances log-uniform in [min_weight, max_weight].
struct RandomTree {
    std::size_t vertices = 10;
    std::uint64_t seed = 1;
    double min_weight = 0.1;
    double max_weight = 10.0;
};

// Random spanning tree plus extra random edges; connected by construction.
struct RandomGraph {
    std::size_t vertices = 10;
    std::size_t extra_edges = 10;
    std::uint64_t seed = 1;
    double min_weight = 0.1;
    double max_weight = 10.0;
};

}  // namespace family

using FamilySpec = std::variant<family::EdgeList, family::HalfLine, family::Lattice, family::BinaryTree,
                                family::NaryTree, family::Comb, family::Bratteli, family::ThreeResistor,
                                family::BinomialChain, family::RandomTree, family::RandomGraph>;

bool is_infinite(const FamilySpec& spec);
std::string family_name(const FamilySpec& spec);

// Infinite families: closed ball of radius R >= 1 around o, frontier = sphere
// of radius R, vertices in BFS order. Finite families: the whole graph when
// radius <= 0, otherwise its ball of that radius. The result passes validate().
TruncatedGraph generate(const FamilySpec& spec, int radius = 0);

// Terminals x and y of the ThreeResistor family.
struct ResistorTerminals {
    VertexId x;
    VertexId y;
};
ResistorTerminals three_resistor_terminals();

}  // namespace resnet
