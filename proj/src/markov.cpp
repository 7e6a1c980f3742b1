#include "resnet/markov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "resnet/error.hpp"
#include "resnet/parallel.hpp"
#include "resnet/resistance.hpp"

namespace resnet {

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void require_vertex(const ConductanceGraph& g, VertexId x, const char* what) {
    if (!g.contains(x)) throw InvalidArgument(std::string(what) + ": unknown vertex " + std::to_string(x));
}

std::vector<double> degrees_of(const ConductanceGraph& g) {
    std::vector<double> c(g.num_vertices());
    for (VertexId x = 0; x < c.size(); ++x) c[x] = weighted_degree(g, x);
    return c;
}

// One walk from x with its own substream.
PathSample walk(const TruncatedGraph& trunc, const std::vector<double>& deg, VertexId x, std::size_t max_steps,
                CounterRng rng, bool keep_steps) {
    const auto& g = trunc.g();
    PathSample s;
    s.start = x;
    s.steps.push_back(x);
    VertexId cur = x;
    std::size_t taken = 0;
    while (true) {
        if (trunc.is_frontier(cur)) {
            s.absorbed_at = cur;
            break;
        }
        if (taken == max_steps) break;
        const double target = rng.uniform() * deg[cur];
        auto nbrs = g.neighbors(cur);
        auto w = g.weights(cur);
        std::size_t k = 0;
        double acc = w[0];
        while (acc <= target && k + 1 < nbrs.size()) acc += w[++k];
        s.log_probability += std::log(w[k] / deg[cur]);
        cur = nbrs[k];
        ++taken;
        if (keep_steps) s.steps.push_back(cur);
    }
    if (!keep_steps && s.steps.back() != cur) s.steps.push_back(cur);
    return s;
}

std::vector<PathSample> run_walks(const TruncatedGraph& trunc, VertexId x, std::size_t n_samples,
                                  std::size_t max_steps, std::uint64_t seed, std::uint64_t stream_offset,
                                  unsigned threads, bool keep_steps) {
    require_vertex(trunc.g(), x, "sample_paths");
    const auto deg = degrees_of(trunc.g());
    std::vector<PathSample> out(n_samples);
    parallel_for(n_samples, threads, [&](std::size_t i) {
        out[i] = walk(trunc, deg, x, max_steps, CounterRng(seed, stream_offset + i), keep_steps);
    });
    return out;
}

std::size_t frontier_slot(const TruncatedGraph& trunc, VertexId b) {
    auto it = std::find(trunc.frontier.begin(), trunc.frontier.end(), b);
    if (it == trunc.frontier.end()) throw InvalidArgument("vertex " + std::to_string(b) + " is not on the frontier");
    return static_cast<std::size_t>(it - trunc.frontier.begin());
}

BoundaryEstimate empty_estimate(const TruncatedGraph& trunc) {
    BoundaryEstimate e;
    e.frontier = trunc.frontier;
    e.counts.assign(trunc.frontier.size(), 0);
    return e;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix64(seed ^ mix64(stream ^ 0x5851f42d4c957f2dULL))) {}

std::uint64_t CounterRng::next() { return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

double CounterRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double cylinder_probability(const ConductanceGraph& graph, std::span<const VertexId> word) {
    if (word.empty()) throw InvalidArgument("cylinder_probability: empty word");
    for (VertexId v : word) require_vertex(graph, v, "cylinder_probability");
    double p = 1.0;
    for (std::size_t i = 0; i + 1 < word.size(); ++i) {
        const double c = graph.conductance(word[i], word[i + 1]);
        if (c <= 0.0)
            throw InvalidArgument("cylinder_probability: vertices " + std::to_string(word[i]) + " and " +
                                  std::to_string(word[i + 1]) + " are not adjacent");
        p *= c / weighted_degree(graph, word[i]);
    }
    return p;
}

double cylinder_total(const ConductanceGraph& graph, VertexId x, int length) {
    require_vertex(graph, x, "cylinder_total");
    if (length < 0) throw InvalidArgument("cylinder_total: negative length");
    std::vector<VertexId> word{x};
    double total = 0.0;
    auto rec = [&](auto&& self, int remaining) -> void {
        if (remaining == 0) {
            total += cylinder_probability(graph, word);
            return;
        }
        for (VertexId y : graph.neighbors(word.back())) {
            word.push_back(y);
            self(self, remaining - 1);
            word.pop_back();
        }
    };
    rec(rec, length);
    return total;
}

std::vector<PathSample> sample_paths(const TruncatedGraph& trunc, VertexId x, std::size_t n_samples,
                                     std::size_t max_steps, std::uint64_t seed, unsigned threads) {
    return run_walks(trunc, x, n_samples, max_steps, seed, 0, threads, true);
}

void BoundaryEstimate::merge(const BoundaryEstimate& other) {
    if (other.frontier != frontier) throw InvalidArgument("BoundaryEstimate::merge: frontiers differ");
    if (exact || other.exact) throw InvalidArgument("BoundaryEstimate::merge: exact measures cannot be merged");
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
    samples += other.samples;
    unabsorbed += other.unabsorbed;
    finalize();
}

void BoundaryEstimate::finalize() {
    if (exact) return;
    const std::uint64_t absorbed = samples - unabsorbed;
    weights.assign(counts.size(), 0.0);
    std_errors.assign(counts.size(), 0.0);
    if (absorbed == 0) return;
    const double n = static_cast<double>(absorbed);
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double w = static_cast<double>(counts[i]) / n;
        weights[i] = w;
        std_errors[i] = std::sqrt(w * (1.0 - w) / n);
    }
}

double BoundaryEstimate::integrate(const Vector& h) const {
    double s = 0.0;
    for (std::size_t i = 0; i < frontier.size(); ++i) s += weights[i] * h[Eigen::Index(frontier[i])];
    return s;
}

BoundaryEstimate estimate_boundary(const TruncatedGraph& trunc, VertexId x, std::size_t n_samples, std::size_t max_steps,
                                   std::uint64_t seed, unsigned threads) {
    if (trunc.frontier.empty()) throw InvalidArgument("estimate_boundary: empty frontier");
    auto paths = run_walks(trunc, x, n_samples, max_steps, seed, 0, threads, false);
    BoundaryEstimate e = empty_estimate(trunc);
    std::vector<std::size_t> slot(trunc.size(), 0);
    for (std::size_t i = 0; i < trunc.frontier.size(); ++i) slot[trunc.frontier[i]] = i;
    e.samples = n_samples;
    for (const auto& p : paths) {
        if (p.absorbed_at)
            ++e.counts[slot[*p.absorbed_at]];
        else
            ++e.unabsorbed;
    }
    e.finalize();
    return e;
}

BoundaryEstimate harmonic_measure_exact(const TruncatedGraph& trunc, VertexId x) {
    require_vertex(trunc.g(), x, "harmonic_measure_exact");
    if (trunc.frontier.empty()) throw InvalidArgument("harmonic_measure_exact: empty frontier");
    BoundaryEstimate e = empty_estimate(trunc);
    e.exact = true;
    e.std_errors.assign(trunc.frontier.size(), 0.0);
    if (trunc.is_frontier(x)) {
        e.weights.assign(trunc.frontier.size(), 0.0);
        e.weights[frontier_slot(trunc, x)] = 1.0;
    } else {
        e.weights = DirichletSolver(trunc).harmonic_measure(x);
    }
    return e;
}

PowerIteration power_iterate(const TruncatedGraph& trunc, const Vector& boundary, int iterations) {
    if (trunc.frontier.empty()) throw InvalidArgument("power_iterate: empty frontier");
    if (iterations < 1) throw InvalidArgument("power_iterate: iterations must be positive");
    if (boundary.size() != Eigen::Index(trunc.size())) throw InvalidArgument("power_iterate: boundary size mismatch");
    TransitionOperator op(trunc.graph);
    double mean = 0.0;
    for (VertexId b : trunc.frontier) mean += boundary[Eigen::Index(b)];
    mean /= double(trunc.frontier.size());

    PowerIteration r;
    Vector h = Vector::Constant(Eigen::Index(trunc.size()), mean);
    for (VertexId b : trunc.frontier) h[Eigen::Index(b)] = boundary[Eigen::Index(b)];
    r.increments.reserve(std::size_t(iterations));
    for (int k = 0; k < iterations; ++k) {
        Vector next = op.apply(h);
        for (VertexId b : trunc.frontier) next[Eigen::Index(b)] = boundary[Eigen::Index(b)];
        r.increments.push_back((next - h).cwiseAbs().maxCoeff());
        h = std::move(next);
    }
    r.values = std::move(h);

    const std::size_t n = r.increments.size();
    const std::size_t span = std::max<std::size_t>(1, n / 4);
    if (n > span && r.increments[n - 1 - span] > 0.0 && r.increments[n - 1] > 0.0)
        r.observed_rate = std::pow(r.increments[n - 1] / r.increments[n - 1 - span], 1.0 / double(span));
    r.predicted_rate = trunc.interior.empty() ? 0.0 : restricted_spectral_radius(op, trunc.interior);
    return r;
}

PoissonReproduction poisson_reproduce(const TruncatedGraph& trunc, const Vector& h, VertexId x, std::size_t n_samples,
                                      std::uint64_t seed, std::size_t max_steps, unsigned threads) {
    require_vertex(trunc.g(), x, "poisson_reproduce");
    if (trunc.frontier.empty()) throw InvalidArgument("poisson_reproduce: empty frontier");
    if (h.size() != Eigen::Index(trunc.size())) throw InvalidArgument("poisson_reproduce: size mismatch");
    if (n_samples < 2) throw InvalidArgument("poisson_reproduce: need at least two samples");

    PoissonReproduction r;
    LaplacianOperator lap(trunc.graph);
    const Vector lh = lap.apply(h);
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    for (VertexId v : trunc.interior)
        r.harmonic_residual = std::max(r.harmonic_residual, std::abs(lh[Eigen::Index(v)]) / (lap.degrees()[Eigen::Index(v)] * scale));
    if (r.harmonic_residual > 1e-8)
        throw InvalidArgument("poisson_reproduce: function is not harmonic on the interior (residual " +
                              std::to_string(r.harmonic_residual) + ")");

    r.exact = h[Eigen::Index(x)];
    r.exact_measure_value = harmonic_measure_exact(trunc, x).integrate(h);

    auto paths = run_walks(trunc, x, n_samples, max_steps, seed, 0, threads, false);
    double sum = 0.0, sum_sq = 0.0;
    std::uint64_t absorbed = 0;
    for (const auto& p : paths) {
        if (!p.absorbed_at) {
            ++r.unabsorbed;
            continue;
        }
        const double v = h[Eigen::Index(*p.absorbed_at)];
        sum += v;
        sum_sq += v * v;
        ++absorbed;
    }
    r.samples = n_samples;
    if (absorbed < 2) throw NumericalError("poisson_reproduce: too few absorbed walks", double(r.unabsorbed));
    const double n = double(absorbed);
    r.mc_estimate = sum / n;
    const double var = std::max(0.0, (sum_sq - n * r.mc_estimate * r.mc_estimate) / (n - 1.0));
    r.std_error = std::sqrt(var / n);
    return r;
}

double martin_kernel(const TruncatedGraph& trunc, const WalkGreens& g, VertexId x, VertexId y) {
    const VertexId o = trunc.g().base_point();
    for (VertexId v : {o, x, y}) {
        if (v >= g.position.size() || g.position[v] < 0)
            throw InvalidArgument("martin_kernel: vertex " + std::to_string(v) + " is not kept by the walk Green's function");
    }
    const double den = g(o, y);
    if (den == 0.0) throw InvalidArgument("martin_kernel: G(o, y) vanishes");
    return g(x, y) / den;
}

double frontier_martin_kernel(const TruncatedGraph& trunc, VertexId x, VertexId b) {
    const std::size_t slot = frontier_slot(trunc, b);
    const auto mu_o = harmonic_measure_exact(trunc, trunc.g().base_point());
    if (mu_o.weights[slot] == 0.0) throw InvalidArgument("frontier_martin_kernel: mu_o(b) vanishes");
    return harmonic_measure_exact(trunc, x).weights[slot] / mu_o.weights[slot];
}

ShiftInvariantEstimate shift_invariant_correspondence_demo(const TruncatedGraph& trunc,
                                                           const std::function<double(VertexId)>& f,
                                                           std::size_t n_samples, std::uint64_t seed,
                                                           std::size_t max_steps, unsigned threads) {
    if (trunc.frontier.empty()) throw InvalidArgument("shift_invariant_correspondence_demo: empty frontier");
    if (n_samples < 2) throw InvalidArgument("shift_invariant_correspondence_demo: need at least two samples");
    const auto& g = trunc.g();
    const std::size_t n = trunc.size();
    ShiftInvariantEstimate r;
    r.values = Vector::Zero(Eigen::Index(n));
    r.std_errors = Vector::Zero(Eigen::Index(n));
    for (VertexId b : trunc.frontier) r.values[Eigen::Index(b)] = f(b);

    for (VertexId x : trunc.interior) {
        auto paths = run_walks(trunc, x, n_samples, max_steps, seed, std::uint64_t(x) * n_samples, threads, false);
        double sum = 0.0, sum_sq = 0.0, m = 0.0;
        for (const auto& p : paths) {
            if (!p.absorbed_at) continue;
            const double v = r.values[Eigen::Index(*p.absorbed_at)];
            sum += v;
            sum_sq += v * v;
            m += 1.0;
        }
        if (m < 2.0) throw NumericalError("shift_invariant_correspondence_demo: too few absorbed walks", m);
        const double mean = sum / m;
        r.values[Eigen::Index(x)] = mean;
        r.std_errors[Eigen::Index(x)] = std::sqrt(std::max(0.0, (sum_sq - m * mean * mean) / (m - 1.0)) / m);
    }

    LaplacianOperator lap(trunc.graph);
    const Vector lh = lap.apply(r.values);
    for (VertexId x : trunc.interior) {
        r.laplacian_residual = std::max(r.laplacian_residual, std::abs(lh[Eigen::Index(x)]));
        double bound = lap.degrees()[Eigen::Index(x)] * r.std_errors[Eigen::Index(x)];
        auto nbrs = g.neighbors(x);
        auto w = g.weights(x);
        for (std::size_t k = 0; k < nbrs.size(); ++k) bound += w[k] * r.std_errors[Eigen::Index(nbrs[k])];
        r.propagated_error = std::max(r.propagated_error, bound);
    }
    return r;
}

std::vector<ClassARow> class_a_statistic(const TruncatedGraph& trunc, VertexId x, std::size_t n_samples,
                                         std::size_t path_length, std::uint64_t seed) {
    if (path_length < 2) throw InvalidArgument("class_a_statistic: path_length must be at least 2");
    if (n_samples == 0) throw InvalidArgument("class_a_statistic: need at least one sample");
    auto paths = run_walks(trunc, x, n_samples, path_length, seed, 0, 1, true);
    ResistanceSolver solver(trunc);
    auto at = [](const PathSample& p, std::size_t k) { return p.steps[std::min(k, p.steps.size() - 1)]; };

    std::vector<ClassARow> rows;
    for (std::size_t k = 1; 2 * k <= path_length; k *= 2) {
        ClassARow row{k, 2 * k, 0.0, 0.0};
        for (const auto& p : paths) {
            const VertexId a = at(p, k), b = at(p, 2 * k);
            const double d = a == b ? 0.0 : solver.resistance(a, b, Method::M4);
            row.mean_distance += d;
            row.max_distance = std::max(row.max_distance, d);
        }
        row.mean_distance /= double(n_samples);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace resnet
