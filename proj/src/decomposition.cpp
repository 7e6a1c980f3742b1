#include "resnet/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>

#include "resnet/error.hpp"
#include "resnet/parallel.hpp"

namespace resnet {

namespace {

void require_same_graph(const TruncatedGraph& trunc, const EnergyVector& f, const char* what) {
    if (f.size() != trunc.size()) throw InvalidArgument(std::string(what) + ": dimension mismatch");
}

void require_dirichlet(const TruncatedGraph& trunc, const GreensMatrix& k, const char* what) {
    if (k.size() != trunc.interior.size() || k.position.size() != trunc.size())
        throw InvalidArgument(std::string(what) + ": Green's matrix does not match the truncation interior");
    for (VertexId x : trunc.interior)
        if (k.position[x] < 0) throw InvalidArgument(std::string(what) + ": Green's matrix misses interior vertex " + std::to_string(x));
}

// g = K (Delta f) on the interior, 0 on the frontier.
Vector finite_raw(const TruncatedGraph& trunc, const GreensMatrix& k, const Vector& lf) {
    Eigen::VectorXd rhs(Eigen::Index(k.size()));
    for (std::size_t i = 0; i < k.size(); ++i) rhs[Eigen::Index(i)] = lf[Eigen::Index(k.vertices[i])];
    const Eigen::VectorXd gi = k.values * rhs;
    Vector g = Vector::Zero(Eigen::Index(trunc.size()));
    for (std::size_t i = 0; i < k.size(); ++i) g[Eigen::Index(k.vertices[i])] = gi[Eigen::Index(i)];
    return g;
}

Vector finite_raw(const TruncatedGraph& trunc, const Vector& lf) {
    if (trunc.interior.empty()) return Vector::Zero(Eigen::Index(trunc.size()));
    Vector g = DirichletSolver(trunc).solve_interior(lf);
    for (VertexId b : trunc.frontier) g[Eigen::Index(b)] = 0.0;
    return g;
}

void require_frontier(const TruncatedGraph& trunc, const char* what) {
    if (trunc.frontier.empty()) throw InvalidArgument(std::string(what) + ": empty frontier");
}

RoydenSplit make_split(const TruncatedGraph& trunc, const EnergyVector& f, const Vector& g) {
    EnergyVector finite(trunc.graph, g);
    EnergyVector harmonic(trunc.graph, f.values() - finite.values());
    RoydenSplit s{f, finite, harmonic};
    s.orthogonality_residual = std::abs(energy_inner(finite, harmonic));
    s.sum_residual = (f.values() - finite.values() - harmonic.values()).cwiseAbs().maxCoeff();
    const Vector lh = LaplacianOperator(trunc.graph).apply(harmonic.values());
    for (VertexId x : trunc.interior) s.harmonic_residual = std::max(s.harmonic_residual, std::abs(lh[Eigen::Index(x)]));
    return s;
}

double relative(double diff, double total) {
    return std::abs(diff) / std::max(std::abs(total), std::numeric_limits<double>::min());
}

}  // namespace

EnergyVector project_finite(const TruncatedGraph& trunc, const GreensMatrix& k, const EnergyVector& f) {
    require_same_graph(trunc, f, "project_finite");
    require_frontier(trunc, "project_finite");
    require_dirichlet(trunc, k, "project_finite");
    const Vector lf = LaplacianOperator(trunc.graph).apply(f.values());
    return EnergyVector(trunc.graph, finite_raw(trunc, k, lf));
}

EnergyVector project_finite(const TruncatedGraph& trunc, const EnergyVector& f) {
    require_same_graph(trunc, f, "project_finite");
    require_frontier(trunc, "project_finite");
    const Vector lf = LaplacianOperator(trunc.graph).apply(f.values());
    return EnergyVector(trunc.graph, finite_raw(trunc, lf));
}

RoydenSplit royden_split(const TruncatedGraph& trunc, const EnergyVector& f) {
    return make_split(trunc, f, project_finite(trunc, f).values());
}

RoydenSplit royden_split(const TruncatedGraph& trunc, const GreensMatrix& k, const EnergyVector& f) {
    return make_split(trunc, f, project_finite(trunc, k, f).values());
}

double interpolate(const TruncatedGraph& trunc, const GreensMatrix& k, const BoundaryEstimate& mu_x,
                   const EnergyVector& f, VertexId x) {
    if (!trunc.g().contains(x)) throw InvalidArgument("interpolate: unknown vertex " + std::to_string(x));
    if (mu_x.frontier != trunc.frontier || mu_x.weights.size() != trunc.frontier.size())
        throw InvalidArgument("interpolate: harmonic measure frontier does not match the truncation");
    auto split = royden_split(trunc, k, f);
    double value = split.finite_part(x);
    for (std::size_t i = 0; i < trunc.frontier.size(); ++i) value += mu_x.weights[i] * split.harmonic_part(trunc.frontier[i]);
    return value;
}

EnergySplit energy_split(const TruncatedGraph& trunc, const EnergyVector& f) {
    require_same_graph(trunc, f, "energy_split");
    EnergySplit e;
    e.total = f.energy();
    if (trunc.frontier.empty()) {
        // Everything lies in the finite part.
        const Vector lf = LaplacianOperator(trunc.graph).apply(f.values());
        e.dirichlet_term = f.values().dot(lf);
        e.finite_energy = e.total;
    } else {
        const Vector lf = LaplacianOperator(trunc.graph).apply(f.values());
        const Vector g = finite_raw(trunc, lf);
        for (VertexId x : trunc.interior) e.dirichlet_term += g[Eigen::Index(x)] * lf[Eigen::Index(x)];
        auto split = make_split(trunc, f, g);
        e.boundary_term = split.harmonic_part.energy();
        e.finite_energy = split.finite_part.energy();
    }
    e.identity_residual = relative(e.total - e.dirichlet_term - e.boundary_term, e.total);
    e.pythagoras_residual = relative(e.total - e.finite_energy - e.boundary_term, e.total);
    return e;
}

std::vector<HarmonicBasisElement> harmonic_basis(const TruncatedGraph& trunc, unsigned threads) {
    require_frontier(trunc, "harmonic_basis");
    const std::optional<DirichletSolver> solver =
        trunc.interior.empty() ? std::nullopt : std::optional<DirichletSolver>(DirichletSolver(trunc));
    std::vector<Vector> ext(trunc.frontier.size());
    parallel_for(trunc.frontier.size(), threads, [&](std::size_t i) {
        Vector data = Vector::Zero(Eigen::Index(trunc.size()));
        data[Eigen::Index(trunc.frontier[i])] = 1.0;
        ext[i] = solver ? solver->extend(data) : data;
    });
    std::vector<HarmonicBasisElement> out;
    out.reserve(ext.size());
    for (std::size_t i = 0; i < ext.size(); ++i) out.push_back({trunc.frontier[i], ext[i], EnergyVector(trunc.graph, ext[i])});
    return out;
}

void write_csv(std::ostream& out, const RoydenSplit& split) {
    const auto prec = out.precision(12);
    out << "vertex,f,Q_perp_f,Q_f\n";
    for (std::size_t x = 0; x < split.input.size(); ++x)
        out << x << ',' << split.input(x) << ',' << split.finite_part(x) << ',' << split.harmonic_part(x) << '\n';
    out.precision(prec);
}

}  // namespace resnet
