#include "resnet/energy.hpp"

#include <cmath>
#include <ostream>

#include "resnet/error.hpp"

namespace resnet {

EnergyVector::EnergyVector(GraphPtr graph, Vector values) : graph_(std::move(graph)), values_(std::move(values)) {
    if (static_cast<std::size_t>(values_.size()) != graph_->num_vertices())
        throw InvalidArgument("energy vector has " + std::to_string(values_.size()) + " entries, graph has " +
                              std::to_string(graph_->num_vertices()) + " vertices");
    values_.array() -= values_[static_cast<Eigen::Index>(graph_->base_point())];
    energy_ = energy_inner(*graph_, values_, values_);
}

double energy_inner(const ConductanceGraph& graph, const Vector& u, const Vector& v) {
    double sum = 0.0;
    for (VertexId x = 0; x < graph.num_vertices(); ++x) {
        auto nbrs = graph.neighbors(x);
        auto w = graph.weights(x);
        const auto xi = static_cast<Eigen::Index>(x);
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            if (nbrs[i] <= x) continue;
            const auto yi = static_cast<Eigen::Index>(nbrs[i]);
            sum += w[i] * (u[xi] - u[yi]) * (v[xi] - v[yi]);
        }
    }
    return sum;
}

double energy_inner(const EnergyVector& u, const EnergyVector& v) {
    if (u.graph_ptr() != v.graph_ptr()) throw InvalidArgument("energy vectors live on different graphs");
    return energy_inner(u.graph(), u.values(), v.values());
}

double energy_norm_sq(const EnergyVector& u) { return u.energy(); }

EnergyVector delta(GraphPtr graph, VertexId x) {
    if (!graph->contains(x)) throw InvalidArgument("unknown vertex " + std::to_string(x));
    Vector v = Vector::Zero(static_cast<Eigen::Index>(graph->num_vertices()));
    v[static_cast<Eigen::Index>(x)] = 1.0;
    return EnergyVector(std::move(graph), std::move(v));
}

SolveResult solve_laplacian(const LaplacianOperator& op, const Vector& rhs, double tol, int max_iterations) {
    if (!(tol > 0.0)) throw InvalidArgument("solver tolerance must be > 0");
    const auto n = static_cast<Eigen::Index>(op.size());
    if (rhs.size() != n) throw InvalidArgument("right-hand side dimension mismatch");
    if (max_iterations <= 0) max_iterations = static_cast<int>(20 * n);

    Vector b = rhs.array() - rhs.mean();
    const double bnorm = b.norm();
    SolveResult out;
    out.solution = Vector::Zero(n);
    if (bnorm == 0.0) return out;

    const Vector inv_diag = op.degrees().cwiseInverse();
    const auto& a = op.matrix();
    Vector& x = out.solution;

    // Restarted from the true residual until it, not the recurrence, meets tol.
    double true_residual = 1.0;
    while (out.iterations < max_iterations) {
        Vector r = b - a * x;
        r.array() -= r.mean();
        true_residual = r.norm() / bnorm;
        if (true_residual <= tol) break;
        Vector z = inv_diag.cwiseProduct(r);
        Vector p = z;
        double rz = r.dot(z);
        while (out.iterations < max_iterations) {
            ++out.iterations;
            Vector ap = a * p;
            const double pap = p.dot(ap);
            if (!(pap > 0.0)) break;
            const double alpha = rz / pap;
            x += alpha * p;
            r -= alpha * ap;
            r.array() -= r.mean();
            if (r.norm() <= 0.5 * tol * bnorm) break;
            z = inv_diag.cwiseProduct(r);
            const double rz_next = r.dot(z);
            p = z + (rz_next / rz) * p;
            rz = rz_next;
        }
    }
    x.array() -= x[static_cast<Eigen::Index>(op.graph().base_point())];
    Vector r = b - a * x;
    out.relative_residual = r.norm() / bnorm;
    if (!(out.relative_residual <= tol))
        throw NumericalError("conjugate gradients did not converge in " + std::to_string(out.iterations) +
                                 " iterations (relative residual " + std::to_string(out.relative_residual) + ")",
                             out.relative_residual);
    return out;
}

DipoleVector solve_dipole(const LaplacianOperator& op, VertexId source, VertexId sink, double tol) {
    const auto& g = op.graph();
    if (!g.contains(source) || !g.contains(sink)) throw InvalidArgument("dipole endpoints must be graph vertices");
    if (source == sink) throw InvalidArgument("dipole needs distinct source and sink");
    Vector rhs = Vector::Zero(static_cast<Eigen::Index>(op.size()));
    rhs[static_cast<Eigen::Index>(source)] = 1.0;
    rhs[static_cast<Eigen::Index>(sink)] = -1.0;
    SolveResult s = solve_laplacian(op, rhs, tol);
    return DipoleVector{EnergyVector(op.graph_ptr(), std::move(s.solution)), source, sink, s.relative_residual,
                        s.iterations};
}

DipoleVector solve_dipole(const TruncatedGraph& trunc, VertexId source, VertexId sink, double tol) {
    return solve_dipole(LaplacianOperator(trunc.graph), source, sink, tol);
}

double reproducing_check(const DipoleVector& v, const EnergyVector& f) {
    return std::abs(energy_inner(v.potential, f) - (f(v.source) - f(v.sink)));
}

ProductCertificate pointwise_product(const EnergyVector& u, const EnergyVector& w) {
    if (u.graph_ptr() != w.graph_ptr()) throw InvalidArgument("energy vectors live on different graphs");
    EnergyVector product(u.graph_ptr(), u.values().cwiseProduct(w.values()));
    const double su = u.values().cwiseAbs().maxCoeff();
    const double sw = w.values().cwiseAbs().maxCoeff();
    const double bound = (su * su + sw * sw) * (u.energy() + w.energy());
    const double e = product.energy();
    return ProductCertificate{std::move(product), e, bound, bound - e};
}

double delta_expansion_check(const TruncatedGraph& trunc, VertexId x, double tol) {
    const auto& g = trunc.g();
    if (!g.contains(x)) throw InvalidArgument("unknown vertex " + std::to_string(x));
    LaplacianOperator op(trunc.graph);
    const VertexId o = g.base_point();
    auto dipole_to_base = [&](VertexId y) -> Vector {
        if (y == o) return Vector::Zero(static_cast<Eigen::Index>(op.size()));
        return solve_dipole(op, y, o, tol).potential.values();
    };

    Vector rhs = op.degrees()[static_cast<Eigen::Index>(x)] * dipole_to_base(x);
    auto nbrs = g.neighbors(x);
    auto w = g.weights(x);
    for (std::size_t i = 0; i < nbrs.size(); ++i) rhs -= w[i] * dipole_to_base(nbrs[i]);

    Vector target = delta(trunc.graph, x).values();
    return (rhs - target).cwiseAbs().maxCoeff();
}

void write_csv(std::ostream& out, const EnergyVector& u) {
    out.precision(12);
    out << "vertex_index,label,value\n";
    for (VertexId x = 0; x < u.size(); ++x) out << x << ',' << u.graph().label(x).to_string() << ',' << u(x) << '\n';
}

}  // namespace resnet
