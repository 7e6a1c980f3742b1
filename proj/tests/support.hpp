#pragma once

// Test helpers: a dense oracle built straight from the edge list (no library
// assembly or solvers) and small hand-rolled random graph generators.

#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "resnet/graph.hpp"

namespace testing_support {

using resnet::Edge;
using resnet::GraphPtr;
using resnet::TruncatedGraph;
using resnet::VertexId;

inline GraphPtr make_graph(std::size_t n, std::vector<Edge> edges, VertexId base = 0) {
    return std::make_shared<const resnet::ConductanceGraph>(resnet::ConductanceGraph::from_edges(n, edges, base));
}

inline TruncatedGraph whole(std::size_t n, std::vector<Edge> edges, VertexId base = 0) {
    return TruncatedGraph::whole(make_graph(n, std::move(edges), base));
}

inline TruncatedGraph k3() { return whole(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}); }
inline TruncatedGraph path3() { return whole(3, {{0, 1, 1.0}, {1, 2, 1.0}}); }

// Dense L = C - E from the undirected edge list.
inline Eigen::MatrixXd dense_laplacian(const resnet::ConductanceGraph& g) {
    const auto n = static_cast<Eigen::Index>(g.num_vertices());
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    for (const Edge& e : g.edges()) {
        const auto a = static_cast<Eigen::Index>(e.from), b = static_cast<Eigen::Index>(e.to);
        l(a, a) += e.conductance;
        l(b, b) += e.conductance;
        l(a, b) -= e.conductance;
        l(b, a) -= e.conductance;
    }
    return l;
}

// Moore-Penrose pseudo-inverse through the symmetric eigendecomposition.
inline Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& l) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(l);
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double cut = 1e-12 * ev.cwiseAbs().maxCoeff();
    Eigen::VectorXd inv = ev.unaryExpr([cut](double v) { return std::abs(v) > cut ? 1.0 / v : 0.0; });
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

struct Oracle {
    Eigen::MatrixXd laplacian;
    Eigen::MatrixXd pinv;

    explicit Oracle(const resnet::ConductanceGraph& g) : laplacian(dense_laplacian(g)), pinv(pseudo_inverse(laplacian)) {}

    double resistance(VertexId x, VertexId y) const {
        const auto a = static_cast<Eigen::Index>(x), b = static_cast<Eigen::Index>(y);
        return pinv(a, a) + pinv(b, b) - 2.0 * pinv(a, b);
    }
    // Dipole Delta v = delta_x - delta_y, gauged v(o) = 0.
    Eigen::VectorXd dipole(VertexId x, VertexId y, VertexId o) const {
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(laplacian.rows());
        rhs[static_cast<Eigen::Index>(x)] = 1.0;
        rhs[static_cast<Eigen::Index>(y)] = -1.0;
        Eigen::VectorXd v = pinv * rhs;
        return v.array() - v[static_cast<Eigen::Index>(o)];
    }
};

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

// Random tree on n vertices plus `extra` random chords; weights log-uniform in [0.1, 10].
inline TruncatedGraph random_connected(std::size_t n, std::size_t extra, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Edge> edges;
    std::vector<std::vector<char>> used(n, std::vector<char>(n, 0));
    for (VertexId x = 1; x < n; ++x) {
        std::uniform_int_distribution<VertexId> pick(0, x - 1);
        VertexId p = pick(rng);
        edges.push_back({p, x, log_uniform(rng, 0.1, 10.0)});
        used[p][x] = used[x][p] = 1;
    }
    std::uniform_int_distribution<VertexId> any(0, n - 1);
    for (std::size_t i = 0, tries = 0; i < extra && tries < 50 * (extra + 1); ++tries) {
        VertexId a = any(rng), b = any(rng);
        if (a == b || used[a][b]) continue;
        used[a][b] = used[b][a] = 1;
        edges.push_back({a, b, log_uniform(rng, 0.1, 10.0)});
        ++i;
    }
    return whole(n, std::move(edges));
}

inline Eigen::VectorXd random_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = nd(rng);
    return v;
}

}  // namespace testing_support
