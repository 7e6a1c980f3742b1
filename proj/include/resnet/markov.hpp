#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "resnet/greens.hpp"

namespace resnet {

// Counter-based generator: output i of substream (seed, stream) is a fixed
// function of (seed, stream, i), so results do not depend on scheduling.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next();
    // Uniform in [0, 1) with 53 random bits.
    double uniform();

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

struct PathSample {
    VertexId start = 0;
    // steps[0] = start
    std::vector<VertexId> steps;
    double log_probability = 0.0;
    std::optional<VertexId> absorbed_at;

    std::size_t length() const { return steps.empty() ? 0 : steps.size() - 1; }
};

// Product of p along the word; 1 for a single vertex. Throws InvalidArgument
// for an empty word or a non-adjacent consecutive pair.
double cylinder_probability(const ConductanceGraph& graph, std::span<const VertexId> word);

// Sum of cylinder_probability over every word of `length` steps from x (exhaustive).
double cylinder_total(const ConductanceGraph& graph, VertexId x, int length);

// Walks from x until it hits the frontier or takes max_steps steps. Sample i uses
// substream i of `seed`. With an empty frontier every sample runs max_steps steps.
std::vector<PathSample> sample_paths(const TruncatedGraph& trunc, VertexId x, std::size_t n_samples,
                                     std::size_t max_steps, std::uint64_t seed, unsigned threads = 0);

struct BoundaryEstimate {
    std::vector<VertexId> frontier;
    std::vector<std::uint64_t> counts;
    std::uint64_t samples = 0;
    std::uint64_t unabsorbed = 0;
    // counts / absorbed samples (or exact weights), ordered like `frontier`
    std::vector<double> weights;
    // sqrt(w (1 - w) / absorbed); zero for exact measures
    std::vector<double> std_errors;
    bool exact = false;

    // Adds counts; frontiers must match. Associative and commutative.
    void merge(const BoundaryEstimate& other);
    void finalize();
    // sum_b weights[b] h(b)
    double integrate(const Vector& h) const;
};

BoundaryEstimate estimate_boundary(const TruncatedGraph& trunc, VertexId x, std::size_t n_samples, std::size_t max_steps,
                                   std::uint64_t seed, unsigned threads = 0);

// Absorption distribution of the walk from x, by a direct sparse solve.
BoundaryEstimate harmonic_measure_exact(const TruncatedGraph& trunc, VertexId x);

struct PowerIteration {
    Vector values;
    // ||h_{k+1} - h_k||_inf per iteration
    std::vector<double> increments;
    // geometric mean of increment ratios over the last quarter of the iterations
    double observed_rate = 0.0;
    // spectral radius of P restricted to the interior
    double predicted_rate = 0.0;
};

// h <- P h on the interior with frontier values clamped to `boundary`; the interior
// starts at the mean of the boundary data.
PowerIteration power_iterate(const TruncatedGraph& trunc, const Vector& boundary, int iterations);

struct PoissonReproduction {
    double exact = 0.0;
    double exact_measure_value = 0.0;
    double mc_estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t unabsorbed = 0;
    // max over interior x of |Delta h (x)| / (c(x) max(1, ||h||_inf))
    double harmonic_residual = 0.0;
};

// h must be harmonic on the interior (relative residual <= 1e-8) or InvalidArgument is thrown.
PoissonReproduction poisson_reproduce(const TruncatedGraph& trunc, const Vector& h, VertexId x, std::size_t n_samples,
                                      std::uint64_t seed, std::size_t max_steps = 1000000, unsigned threads = 0);

// G_P(x,y) / G_P(o,y) from a walk Green's function that keeps o.
double martin_kernel(const TruncatedGraph& trunc, const WalkGreens& g, VertexId x, VertexId y);

// mu_x(b) / mu_o(b) for a frontier vertex b.
double frontier_martin_kernel(const TruncatedGraph& trunc, VertexId x, VertexId b);

struct ShiftInvariantEstimate {
    // empirical E[F | start x]; F(b) itself on the frontier
    Vector values;
    Vector std_errors;
    // max over interior x of |Delta h(x)| and of c(x)-weighted propagated std error
    double laplacian_residual = 0.0;
    double propagated_error = 0.0;
};

// F depends on the absorption vertex only.
ShiftInvariantEstimate shift_invariant_correspondence_demo(const TruncatedGraph& trunc,
                                                           const std::function<double(VertexId)>& f,
                                                           std::size_t n_samples, std::uint64_t seed,
                                                           std::size_t max_steps = 1000000, unsigned threads = 0);

struct ClassARow {
    std::size_t k = 0;
    std::size_t l = 0;
    double mean_distance = 0.0;
    double max_distance = 0.0;
};

// d(pi_k, pi_l) along sampled paths of the walk stopped at the frontier, for the
// pairs (k, 2k), k = 1, 2, 4, ... up to path_length / 2.
std::vector<ClassARow> class_a_statistic(const TruncatedGraph& trunc, VertexId x, std::size_t n_samples,
                                         std::size_t path_length, std::uint64_t seed);

}  // namespace resnet
