#pragma once

#include <iosfwd>
#include <vector>

#include "resnet/greens.hpp"
#include "resnet/markov.hpp"

namespace resnet {

// f = finite_part + harmonic_part on a truncation. finite_part lies in
// span{delta_x : x interior} (modulo the gauge); harmonic_part has Delta = 0 on the interior.
struct RoydenSplit {
    EnergyVector input;
    EnergyVector finite_part;
    EnergyVector harmonic_part;
    // |<finite_part, harmonic_part>_E|
    double orthogonality_residual = 0.0;
    // max |input - finite_part - harmonic_part|
    double sum_residual = 0.0;
    // max over interior x of |Delta harmonic_part (x)|
    double harmonic_residual = 0.0;
};

// (Q_perp f)(x) = sum_{y interior} K(x,y) (Delta f)(y), gauged at o. K must be the
// frontier-grounded Green's function (index set = interior); throws InvalidArgument otherwise.
EnergyVector project_finite(const TruncatedGraph& trunc, const GreensMatrix& k, const EnergyVector& f);

// Same projection through a sparse interior solve.
EnergyVector project_finite(const TruncatedGraph& trunc, const EnergyVector& f);

RoydenSplit royden_split(const TruncatedGraph& trunc, const EnergyVector& f);
RoydenSplit royden_split(const TruncatedGraph& trunc, const GreensMatrix& k, const EnergyVector& f);

// (Q_perp f)(x) + sum_b mu_x(b) (Q f)(b), with mu_x the harmonic measure of x.
double interpolate(const TruncatedGraph& trunc, const GreensMatrix& k, const BoundaryEstimate& mu_x,
                   const EnergyVector& f, VertexId x);

struct EnergySplit {
    // sum over interior x of g(x) (Delta f)(x), g the frontier-vanishing finite part
    double dirichlet_term = 0.0;
    // ||Q f||^2_E
    double boundary_term = 0.0;
    // ||f||^2_E
    double total = 0.0;
    // ||Q_perp f||^2_E
    double finite_energy = 0.0;
    // |total - dirichlet_term - boundary_term| / max(total, tiny)
    double identity_residual = 0.0;
    // |total - finite_energy - boundary_term| / max(total, tiny)
    double pythagoras_residual = 0.0;
};

EnergySplit energy_split(const TruncatedGraph& trunc, const EnergyVector& f);

struct HarmonicBasisElement {
    VertexId frontier_vertex;
    // harmonic extension of the indicator of frontier_vertex (not gauged)
    Vector extension;
    EnergyVector gauged;
};

// One element per frontier vertex, in frontier order; the extensions sum to 1.
std::vector<HarmonicBasisElement> harmonic_basis(const TruncatedGraph& trunc, unsigned threads = 0);

// CSV rows: vertex,f,Q_perp_f,Q_f
void write_csv(std::ostream& out, const RoydenSplit& split);

}  // namespace resnet
