#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "resnet/graph.hpp"

namespace resnet {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Delta = C - E with C = diag(c(x)) and E the symmetric conductance matrix.
class LaplacianOperator {
public:
    // Throws ValidationError for graphs that fail validate().
    explicit LaplacianOperator(GraphPtr graph);

    const ConductanceGraph& graph() const { return *graph_; }
    const GraphPtr& graph_ptr() const { return graph_; }
    std::size_t size() const { return degrees_.size(); }

    const Vector& degrees() const { return degrees_; }
    const SparseMatrix& conductances() const { return conductances_; }
    const SparseMatrix& matrix() const { return matrix_; }

    Vector apply(const Vector& u) const;
    // <u, Delta u> in l^2.
    double quadratic_form(const Vector& u) const;

private:
    GraphPtr graph_;
    Vector degrees_;
    SparseMatrix conductances_;
    SparseMatrix matrix_;
};

// Row-stochastic p_xy = c_xy / c(x).
class TransitionOperator {
public:
    explicit TransitionOperator(GraphPtr graph);

    const ConductanceGraph& graph() const { return *graph_; }
    const GraphPtr& graph_ptr() const { return graph_; }
    const SparseMatrix& matrix() const { return matrix_; }
    std::size_t size() const { return static_cast<std::size_t>(matrix_.rows()); }

    double probability(VertexId x, VertexId y) const;
    Vector apply(const Vector& f) const;

private:
    GraphPtr graph_;
    SparseMatrix matrix_;
};

LaplacianOperator assemble_laplacian(GraphPtr graph);

Vector apply(const LaplacianOperator& op, const Vector& u);
Vector apply(const TransitionOperator& op, const Vector& f);

struct SymmetryCheck {
    double max_residual = 0.0;
    // max |<Delta u, v>| seen, for relative comparisons.
    double scale = 0.0;
};

// max |<Delta u, v> - <u, Delta v>| over random finitely supported pairs.
SymmetryCheck l2_symmetry_check(const LaplacianOperator& op, int trials, std::uint64_t seed);

// Power-iteration estimate of the spectral radius of P restricted to `kept`
// (rows and columns), i.e. of the walk killed on leaving `kept`.
double restricted_spectral_radius(const TransitionOperator& op, std::span<const VertexId> kept,
                                  int max_iterations = 20000, double tol = 1e-13);

// Dirichlet problem on a truncation: Delta restricted to the interior,
// frontier values prescribed. Sparse LDLT, factorized once.
class DirichletSolver {
public:
    explicit DirichletSolver(const TruncatedGraph& trunc);

    const TruncatedGraph& truncation() const { return trunc_; }

    // h with Delta h = 0 on the interior and h = boundary on the frontier;
    // interior entries of `boundary` are ignored.
    Vector extend(const Vector& boundary) const;
    // Solves Delta_II g = rhs_I with g = 0 on the frontier; rhs frontier entries ignored.
    Vector solve_interior(const Vector& rhs) const;
    // Absorption distribution of the walk from x over the frontier (ordered as trunc.frontier).
    std::vector<double> harmonic_measure(VertexId x) const;

private:
    TruncatedGraph trunc_;
    std::vector<Eigen::Index> position_;
    SparseMatrix interior_block_;
    std::shared_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> factor_;
};

struct DefectRecursion {
    // l_0 .. l_levels, l_0 = 1.
    std::vector<double> values;
    // l_k 2^k
    std::vector<double> scaled;
    double limit = 0.0;
    double limit_variance = 0.0;
    // |scaled[k+1] / scaled[k] - 1| at the last level.
    double last_ratio_gap = 0.0;
    // max_k |(1/3) l_{k-1} + (2/3) l_{k+1} - (1 + 1/(3 2^k)) l_k| over 1 <= k < levels.
    double max_residual = 0.0;
    // partial sums of 2^k (l_k - l_{k+1})^2
    std::vector<double> energy_partial_sums;
    double energy_sum = 0.0;
    // |S_levels - S_{levels-1}|
    double energy_cauchy_gap = 0.0;
    // Forward solution from l_0 = 1, l_1 = 2: successive ratios l_{k+1} / l_k.
    std::vector<double> forward_ratios;
    // Dominant eigenvalue of the asymptotic transfer matrix [[3/2, -1/2], [1, 0]].
    double dominant_eigenvalue = 1.0;
    bool unstable = false;
};

// Decaying solution of the comb defect recursion by backward recursion
// from l_K = 2^-K, l_{K+1} = 2^-(K+1) with K well beyond `levels`.
DefectRecursion defect_recursion_comb(int levels);

// Coordinate-format text: one "row col value" line per stored entry.
void write_coo(std::ostream& out, const SparseMatrix& m);
void write_coo(std::ostream& out, const Vector& diagonal);

}  // namespace resnet
