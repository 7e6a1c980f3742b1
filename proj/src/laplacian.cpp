#include "resnet/laplacian.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include "resnet/error.hpp"

namespace resnet {

namespace {

SparseMatrix build_sparse(std::size_t n, const std::vector<Eigen::Triplet<double>>& entries) {
    SparseMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    m.setFromTriplets(entries.begin(), entries.end());
    m.makeCompressed();
    return m;
}

void check_dimension(Eigen::Index got, std::size_t expected) {
    if (got != static_cast<Eigen::Index>(expected))
        throw InvalidArgument("dimension mismatch: function has " + std::to_string(got) + " entries, graph has " +
                              std::to_string(expected) + " vertices");
}

}  // namespace

LaplacianOperator::LaplacianOperator(GraphPtr graph) : graph_(std::move(graph)) {
    require_valid(*graph_);
    const std::size_t n = graph_->num_vertices();
    degrees_ = Vector::Zero(static_cast<Eigen::Index>(n));
    std::vector<Eigen::Triplet<double>> e_entries, l_entries;
    e_entries.reserve(graph_->num_arcs());
    l_entries.reserve(graph_->num_arcs() + n);
    for (VertexId x = 0; x < n; ++x) {
        auto nbrs = graph_->neighbors(x);
        auto w = graph_->weights(x);
        double cx = 0.0;
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            cx += w[i];
            e_entries.emplace_back(x, nbrs[i], w[i]);
            l_entries.emplace_back(x, nbrs[i], -w[i]);
        }
        degrees_[x] = cx;
        l_entries.emplace_back(x, x, cx);
    }
    conductances_ = build_sparse(n, e_entries);
    matrix_ = build_sparse(n, l_entries);
}

Vector LaplacianOperator::apply(const Vector& u) const {
    check_dimension(u.size(), size());
    // Difference form, so constants map to exactly 0.
    Vector out(u.size());
    for (VertexId x = 0; x < graph_->num_vertices(); ++x) {
        auto nbrs = graph_->neighbors(x);
        auto w = graph_->weights(x);
        const double ux = u[static_cast<Eigen::Index>(x)];
        double s = 0.0;
        for (std::size_t i = 0; i < nbrs.size(); ++i) s += w[i] * (ux - u[static_cast<Eigen::Index>(nbrs[i])]);
        out[static_cast<Eigen::Index>(x)] = s;
    }
    return out;
}

double LaplacianOperator::quadratic_form(const Vector& u) const { return u.dot(apply(u)); }

TransitionOperator::TransitionOperator(GraphPtr graph) : graph_(std::move(graph)) {
    require_valid(*graph_);
    const std::size_t n = graph_->num_vertices();
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(graph_->num_arcs());
    for (VertexId x = 0; x < n; ++x) {
        const double cx = weighted_degree(*graph_, x);
        auto nbrs = graph_->neighbors(x);
        auto w = graph_->weights(x);
        for (std::size_t i = 0; i < nbrs.size(); ++i) entries.emplace_back(x, nbrs[i], w[i] / cx);
    }
    matrix_ = build_sparse(n, entries);
}

double TransitionOperator::probability(VertexId x, VertexId y) const {
    return matrix_.coeff(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
}

Vector TransitionOperator::apply(const Vector& f) const {
    check_dimension(f.size(), size());
    return matrix_ * f;
}

LaplacianOperator assemble_laplacian(GraphPtr graph) { return LaplacianOperator(std::move(graph)); }

Vector apply(const LaplacianOperator& op, const Vector& u) { return op.apply(u); }
Vector apply(const TransitionOperator& op, const Vector& f) { return op.apply(f); }

SymmetryCheck l2_symmetry_check(const LaplacianOperator& op, int trials, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, op.size() - 1);
    std::uniform_real_distribution<double> value(-1.0, 1.0);
    SymmetryCheck out;
    const auto n = static_cast<Eigen::Index>(op.size());
    for (int t = 0; t < trials; ++t) {
        Vector u = Vector::Zero(n), v = Vector::Zero(n);
        // finitely supported: a few random vertices each
        const std::size_t support = 1 + pick(rng) % std::max<std::size_t>(1, op.size());
        for (std::size_t i = 0; i < support; ++i) {
            u[static_cast<Eigen::Index>(pick(rng))] = value(rng);
            v[static_cast<Eigen::Index>(pick(rng))] = value(rng);
        }
        const double lhs = op.apply(u).dot(v);
        const double rhs = u.dot(op.apply(v));
        out.max_residual = std::max(out.max_residual, std::abs(lhs - rhs));
        out.scale = std::max({out.scale, std::abs(lhs), std::abs(rhs)});
    }
    return out;
}

double restricted_spectral_radius(const TransitionOperator& op, std::span<const VertexId> kept, int max_iterations,
                                  double tol) {
    if (kept.empty()) return 0.0;
    const auto& g = op.graph();
    const auto k = static_cast<Eigen::Index>(kept.size());
    std::vector<Eigen::Index> position(g.num_vertices(), -1);
    for (Eigen::Index i = 0; i < k; ++i) position[kept[i]] = i;

    // S = C^{-1/2} E C^{-1/2} on the kept set is similar to the killed walk matrix and symmetric.
    Vector inv_sqrt_degree(k);
    for (Eigen::Index i = 0; i < k; ++i) inv_sqrt_degree[i] = 1.0 / std::sqrt(weighted_degree(g, kept[i]));
    std::vector<Eigen::Triplet<double>> entries;
    for (Eigen::Index i = 0; i < k; ++i) {
        auto nbrs = g.neighbors(kept[i]);
        auto w = g.weights(kept[i]);
        for (std::size_t a = 0; a < nbrs.size(); ++a) {
            const Eigen::Index j = position[nbrs[a]];
            if (j >= 0) entries.emplace_back(i, j, w[a] * inv_sqrt_degree[i] * inv_sqrt_degree[j]);
        }
    }
    Eigen::SparseMatrix<double> s(k, k);
    s.setFromTriplets(entries.begin(), entries.end());

    // Shifted power iteration on S + I: the Perron root dominates even for bipartite graphs.
    Vector v = Vector::Ones(k).normalized();
    double rayleigh = 0.0;
    for (int it = 0; it < max_iterations; ++it) {
        Vector w = s * v + v;
        const double next = v.dot(w) - 1.0;
        const double nrm = w.norm();
        if (nrm == 0.0) return 0.0;
        v = w / nrm;
        if (it > 0 && std::abs(next - rayleigh) <= tol * std::max(1.0, std::abs(next))) {
            rayleigh = next;
            break;
        }
        rayleigh = next;
    }
    return std::max(0.0, rayleigh);
}

DirichletSolver::DirichletSolver(const TruncatedGraph& trunc) : trunc_(trunc) {
    require_valid(trunc_.g());
    if (trunc_.frontier.empty()) throw InvalidArgument("Dirichlet problem needs a nonempty frontier");
    const auto& g = trunc_.g();
    position_.assign(g.num_vertices(), -1);
    for (std::size_t i = 0; i < trunc_.interior.size(); ++i) position_[trunc_.interior[i]] = static_cast<Eigen::Index>(i);

    const auto ni = static_cast<Eigen::Index>(trunc_.interior.size());
    std::vector<Eigen::Triplet<double>> entries;
    for (Eigen::Index i = 0; i < ni; ++i) {
        const VertexId x = trunc_.interior[static_cast<std::size_t>(i)];
        auto nbrs = g.neighbors(x);
        auto w = g.weights(x);
        double cx = 0.0;
        for (std::size_t a = 0; a < nbrs.size(); ++a) {
            cx += w[a];
            const Eigen::Index j = position_[nbrs[a]];
            if (j >= 0) entries.emplace_back(i, j, -w[a]);
        }
        entries.emplace_back(i, i, cx);
    }
    interior_block_ = build_sparse(trunc_.interior.size(), entries);
    Eigen::SparseMatrix<double> col_major = interior_block_;
    factor_ = std::make_shared<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>(col_major);
    if (factor_->info() != Eigen::Success) throw NumericalError("Dirichlet factorization failed", 0.0);
}

Vector DirichletSolver::extend(const Vector& boundary) const {
    const auto& g = trunc_.g();
    check_dimension(boundary.size(), g.num_vertices());
    const auto ni = static_cast<Eigen::Index>(trunc_.interior.size());
    Vector rhs = Vector::Zero(ni);
    for (Eigen::Index i = 0; i < ni; ++i) {
        const VertexId x = trunc_.interior[static_cast<std::size_t>(i)];
        auto nbrs = g.neighbors(x);
        auto w = g.weights(x);
        for (std::size_t a = 0; a < nbrs.size(); ++a)
            if (position_[nbrs[a]] < 0) rhs[i] += w[a] * boundary[static_cast<Eigen::Index>(nbrs[a])];
    }
    Vector interior = factor_->solve(rhs);
    Vector h = boundary;
    for (Eigen::Index i = 0; i < ni; ++i) h[static_cast<Eigen::Index>(trunc_.interior[static_cast<std::size_t>(i)])] = interior[i];
    return h;
}

Vector DirichletSolver::solve_interior(const Vector& rhs) const {
    check_dimension(rhs.size(), trunc_.size());
    const auto ni = static_cast<Eigen::Index>(trunc_.interior.size());
    Vector b(ni);
    for (Eigen::Index i = 0; i < ni; ++i) b[i] = rhs[static_cast<Eigen::Index>(trunc_.interior[static_cast<std::size_t>(i)])];
    Vector sol = factor_->solve(b);
    Vector out = Vector::Zero(rhs.size());
    for (Eigen::Index i = 0; i < ni; ++i) out[static_cast<Eigen::Index>(trunc_.interior[static_cast<std::size_t>(i)])] = sol[i];
    return out;
}

std::vector<double> DirichletSolver::harmonic_measure(VertexId x) const {
    const auto& g = trunc_.g();
    if (!g.contains(x)) throw InvalidArgument("unknown vertex " + std::to_string(x));
    std::vector<double> mu(trunc_.frontier.size(), 0.0);
    if (trunc_.is_frontier(x)) {
        for (std::size_t b = 0; b < mu.size(); ++b) mu[b] = trunc_.frontier[b] == x ? 1.0 : 0.0;
        return mu;
    }
    // g_x = Delta_II^{-1} e_x; mu_x(b) = sum_i g_x(i) c_ib.
    Vector e = Vector::Zero(static_cast<Eigen::Index>(trunc_.size()));
    e[static_cast<Eigen::Index>(x)] = 1.0;
    Vector green = solve_interior(e);
    for (std::size_t b = 0; b < mu.size(); ++b) {
        const VertexId fb = trunc_.frontier[b];
        auto nbrs = g.neighbors(fb);
        auto w = g.weights(fb);
        for (std::size_t a = 0; a < nbrs.size(); ++a)
            if (!trunc_.is_frontier(nbrs[a])) mu[b] += w[a] * green[static_cast<Eigen::Index>(nbrs[a])];
    }
    return mu;
}

DefectRecursion defect_recursion_comb(int levels) {
    if (levels < 10) throw InvalidArgument("defect recursion needs levels >= 10");
    DefectRecursion out;
    // Start deep enough that the non-decaying mode, suppressed by 2^-(K-k), is below roundoff.
    const int start = levels + 64;
    std::vector<double> l(static_cast<std::size_t>(start) + 2);
    l[start] = std::ldexp(1.0, -start);
    l[start + 1] = std::ldexp(1.0, -(start + 1));
    for (int k = start; k >= 1; --k) {
        // (1/3) l_{k-1} = (1 + 1/(3 2^k)) l_k - (2/3) l_{k+1}
        l[k - 1] = (3.0 + std::ldexp(1.0, -k)) * l[k] - 2.0 * l[k + 1];
    }
    const double norm0 = l[0];
    for (double& v : l) v /= norm0;

    out.values.assign(l.begin(), l.begin() + levels + 1);
    out.scaled.resize(out.values.size());
    for (int k = 0; k <= levels; ++k) out.scaled[k] = std::ldexp(out.values[k], k);

    for (int k = 1; k < levels; ++k) {
        const double lhs = l[k - 1] / 3.0 + 2.0 * l[k + 1] / 3.0;
        const double rhs = (1.0 + 1.0 / (3.0 * std::ldexp(1.0, k))) * l[k];
        out.max_residual = std::max(out.max_residual, std::abs(lhs - rhs));
    }

    out.limit = out.scaled.back();
    out.last_ratio_gap = std::abs(out.scaled[levels] / out.scaled[levels - 1] - 1.0);
    const int window = 5;
    double mean = 0.0;
    for (int k = levels - window + 1; k <= levels; ++k) mean += out.scaled[k];
    mean /= window;
    for (int k = levels - window + 1; k <= levels; ++k) out.limit_variance += (out.scaled[k] - mean) * (out.scaled[k] - mean);
    out.limit_variance /= window;
    out.unstable = out.limit_variance > 1e-6 || !(out.limit > 0.0);

    double sum = 0.0;
    for (int k = 0; k < levels; ++k) {
        const double diff = l[k] - l[k + 1];
        sum += std::ldexp(diff * diff, k);
        out.energy_partial_sums.push_back(sum);
    }
    out.energy_sum = sum;
    const auto m = out.energy_partial_sums.size();
    out.energy_cauchy_gap = std::abs(out.energy_partial_sums[m - 1] - out.energy_partial_sums[m - 2]);

    std::vector<double> fwd{1.0, 2.0};
    for (int k = 1; k < levels; ++k) fwd.push_back((1.5 + std::ldexp(1.0, -(k + 1))) * fwd[k] - 0.5 * fwd[k - 1]);
    for (std::size_t k = 0; k + 1 < fwd.size(); ++k) out.forward_ratios.push_back(fwd[k + 1] / fwd[k]);

    Eigen::Matrix2d transfer;
    transfer << 1.5, -0.5, 1.0, 0.0;
    out.dominant_eigenvalue = transfer.eigenvalues().cwiseAbs().maxCoeff();
    return out;
}

void write_coo(std::ostream& out, const SparseMatrix& m) {
    out.precision(12);
    for (Eigen::Index r = 0; r < m.outerSize(); ++r)
        for (SparseMatrix::InnerIterator it(m, r); it; ++it) out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

void write_coo(std::ostream& out, const Vector& diagonal) {
    out.precision(12);
    for (Eigen::Index i = 0; i < diagonal.size(); ++i) out << i << ' ' << i << ' ' << diagonal[i] << '\n';
}

}  // namespace resnet
