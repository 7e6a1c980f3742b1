#pragma once

#include <iosfwd>

#include "resnet/laplacian.hpp"

namespace resnet {

// A function on the vertices modulo constants, represented by its
// gauge-fixed member: value 0 at the base point o.
class EnergyVector {
public:
    // Subtracts values[o] from every entry.
    EnergyVector(GraphPtr graph, Vector values);

    const GraphPtr& graph_ptr() const { return graph_; }
    const ConductanceGraph& graph() const { return *graph_; }
    const Vector& values() const { return values_; }
    double operator()(VertexId x) const { return values_[static_cast<Eigen::Index>(x)]; }
    std::size_t size() const { return static_cast<std::size_t>(values_.size()); }

    // ||u||^2_E, computed at construction.
    double energy() const { return energy_; }

private:
    GraphPtr graph_;
    Vector values_;
    double energy_ = 0.0;
};

// (1/2) sum_x sum_y c_xy (u(x) - u(y)) (v(x) - v(y)), i.e. one term per undirected edge.
double energy_inner(const ConductanceGraph& graph, const Vector& u, const Vector& v);
double energy_inner(const EnergyVector& u, const EnergyVector& v);
double energy_norm_sq(const EnergyVector& u);

EnergyVector delta(GraphPtr graph, VertexId x);

struct SolveResult {
    Vector solution;
    double relative_residual = 0.0;
    int iterations = 0;
};

// Jacobi-preconditioned conjugate gradients for Delta u = rhs, rhs orthogonal to
// constants. The constant component of the residual is projected out each step
// and the result is pinned to 0 at the base point. Iteration cap 20 N by default.
SolveResult solve_laplacian(const LaplacianOperator& op, const Vector& rhs, double tol, int max_iterations = 0);

struct DipoleVector {
    EnergyVector potential;
    VertexId source;
    VertexId sink;
    double solve_residual;
    int iterations;
};

// v with Delta v = delta_source - delta_sink, v(o) = 0.
DipoleVector solve_dipole(const LaplacianOperator& op, VertexId source, VertexId sink, double tol = 1e-10);
DipoleVector solve_dipole(const TruncatedGraph& trunc, VertexId source, VertexId sink, double tol = 1e-10);

// |<v, f>_E - (f(source) - f(sink))|
double reproducing_check(const DipoleVector& v, const EnergyVector& f);

struct ProductCertificate {
    EnergyVector product;
    double product_energy;
    // (||u||_inf^2 + ||w||_inf^2)(||u||_E^2 + ||w||_E^2)
    double bound;
    double slack;
};

ProductCertificate pointwise_product(const EnergyVector& u, const EnergyVector& w);

// max_z |delta_x(z) - (c(x) v_x(z) - sum_{y~x} c_xy v_y(z))| with v_y = v_{y,o}, v_o = 0.
double delta_expansion_check(const TruncatedGraph& trunc, VertexId x, double tol = 1e-10);

// CSV rows: vertex_index,label,value
void write_csv(std::ostream& out, const EnergyVector& u);

}  // namespace resnet
