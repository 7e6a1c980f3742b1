#pragma once

#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "resnet/energy.hpp"
#include "resnet/generators.hpp"

namespace resnet {

// M1 dipole increment, M2 energy norm, M3 minimal dissipation (Thomson),
// M4 grounded inverse quadratic form (dense oracle), M7 variational sup.
enum class Method { M1, M2, M3, M4, M7 };

std::string_view to_string(Method m);
// Accepts "M1".."M7" case-insensitively; M5 and M6 are rejected.
Method method_from_string(std::string_view name);

inline constexpr std::size_t kDenseLimit = 2000;

// Effective resistance on the (free) truncated graph. Caches the dense
// grounded inverse and the cycle-space factorization on first use.
class ResistanceSolver {
public:
    explicit ResistanceSolver(const TruncatedGraph& trunc, double tol = 1e-10);

    const TruncatedGraph& truncation() const { return trunc_; }
    const LaplacianOperator& laplacian() const { return op_; }
    double tolerance() const { return tol_; }

    double resistance(VertexId x, VertexId y, Method method) const;

    // (Delta restricted to V \ {o})^{-1}, padded with a zero row and column at o.
    // N <= kDenseLimit.
    const Eigen::MatrixXd& grounded_inverse() const;

    // Unit x->y flow minimizing sum I^2 / c, one entry per edge of graph().edges().
    Vector thomson_flow(VertexId x, VertexId y) const;

private:
    struct CycleSpace;
    const CycleSpace& cycle_space() const;

    TruncatedGraph trunc_;
    LaplacianOperator op_;
    double tol_;
    mutable std::once_flag dense_once_;
    mutable Eigen::MatrixXd dense_;
    mutable std::once_flag cycle_once_;
    mutable std::shared_ptr<CycleSpace> cycles_;
};

double resistance(const TruncatedGraph& trunc, VertexId x, VertexId y, Method method, double tol = 1e-10);

struct CurrentFlow {
    // Parallel to `edges` (from < to): I_(from,to) = c (v(from) - v(to)).
    std::vector<Edge> edges;
    std::vector<double> current;
    // sum over unordered edges of I^2 / c
    double dissipation = 0.0;
    // max_x |sum_y I_(xy) - (delta_source - delta_sink)(x)|
    double kirchhoff_residual = 0.0;

    // I_(xy), antisymmetric; 0 for non-adjacent pairs.
    double at(VertexId x, VertexId y) const;
};

CurrentFlow current_of_dipole(const DipoleVector& v);

struct ResistanceMatrix {
    Eigen::MatrixXd values;
    Method method = Method::M4;
    double tolerance = 0.0;

    double operator()(VertexId x, VertexId y) const {
        return values(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
    }
    std::size_t size() const { return static_cast<std::size_t>(values.rows()); }
};

// Throws InvalidArgument when the graph exceeds size_cap vertices.
ResistanceMatrix resistance_matrix(const TruncatedGraph& trunc, Method method, double tol = 1e-10,
                                   unsigned threads = 0, std::size_t size_cap = kDenseLimit);

struct MetricReport {
    double max_diagonal = 0.0;
    double max_asymmetry = 0.0;
    double min_off_diagonal = 0.0;
    // min over triples of d(x,z) + d(z,y) - d(x,y)
    double min_triangle_slack = 0.0;
    bool ok(double slack_tol = 1e-8) const {
        return max_diagonal == 0.0 && max_asymmetry == 0.0 && min_off_diagonal > 0.0 &&
               min_triangle_slack >= -slack_tol;
    }
};

MetricReport check_metric_axioms(const ResistanceMatrix& d);

// Header row of labels, then one row per vertex.
void write_csv(std::ostream& out, const ResistanceMatrix& d, const ConductanceGraph& graph);

struct BoundednessRow {
    int radius = 0;
    std::size_t vertices = 0;
    double max_distance = 0.0;
    std::string farthest;
    // sum of 1/c along a BFS geodesic from o to the farthest vertex
    double geodesic_resistance = 0.0;
};

struct BoundednessReport {
    std::vector<BoundednessRow> rows;
    // successive differences of max_distance and their ratios
    std::vector<double> differences;
    std::vector<double> ratios;
    bool bounded = false;
    // Aitken extrapolation of max_distance when bounded.
    std::optional<double> limit_estimate;
};

// Needs at least two radii, strictly increasing.
BoundednessReport boundedness_diagnostic(const FamilySpec& family, const std::vector<int>& radii,
                                         double tol = 1e-10, unsigned threads = 0);

struct RayPairRow {
    std::string a;
    std::string b;
    int depth = 0;
    double distance = 0.0;
};

struct TypeAReport {
    // "cross-teeth" for the comb, "within-ray" for trees and the half-line
    std::string kind;
    std::vector<RayPairRow> rows;
    // comb: min cross-teeth distance; rays: last within-ray distance
    double epsilon = 0.0;
    // within-ray distances decreasing towards 0 / cross distances bounded below
    bool cauchy = false;
};

// Supports Comb, BinaryTree, NaryTree, HalfLine; other families throw InvalidArgument.
TypeAReport type_a_diagnostic(const FamilySpec& family, int radius, int sample_pairs, double tol = 1e-10);

struct ContinuumValue {
    double kernel;
    double distance;
};

// K(x,y) = exp(-|x-y|), d(x,y) = 2 (1 - exp(-|x-y|)).
ContinuumValue continuum_reference(double x, double y);

}  // namespace resnet
