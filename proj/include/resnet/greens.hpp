#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "resnet/energy.hpp"

namespace resnet {

enum class GreensMethod { gram, neumann, closed_form, dirichlet };
std::string_view to_string(GreensMethod m);

// K restricted to an index set: V \ {o} for gram/neumann, the interior for dirichlet.
struct GreensMatrix {
    Eigen::MatrixXd values;
    std::vector<VertexId> vertices;
    // graph vertex -> row, -1 outside the index set
    std::vector<Eigen::Index> position;
    GreensMethod method = GreensMethod::gram;
    // max |K_xy - K_yx| before symmetrization
    double symmetry_residual = 0.0;

    // 0 when either vertex is outside the index set (e.g. the base point).
    double operator()(VertexId x, VertexId y) const;
    std::size_t size() const { return vertices.size(); }
};

// K(x,y) = v_x(y), v_x = v_{x,o}, one CG dipole solve per column.
GreensMatrix greens_gram(const TruncatedGraph& trunc, double tol = 1e-10, unsigned threads = 0);

// (Delta restricted to the interior)^{-1}: frontier-grounded Green's function.
GreensMatrix dirichlet_greens(const TruncatedGraph& trunc);

struct InversionResidual {
    // max |Delta K - I| and |K Delta - I| over the index set of K
    double left = 0.0;
    double right = 0.0;
    double max() const { return left > right ? left : right; }
};

InversionResidual greens_inversion_check(const TruncatedGraph& trunc, const GreensMatrix& k);

// G_P = sum_n (C^{-1} E)^n for the walk killed on `killed`, over the kept vertices.
struct WalkGreens {
    Eigen::MatrixXd values;
    std::vector<VertexId> kept;
    std::vector<Eigen::Index> position;
    // number of series terms summed (a power of two)
    long long order = 0;
    double spectral_radius = 0.0;
    // rho^order / (1 - rho)
    double tail_bound = 0.0;
    // max |G - I - P G| on kept rows
    double fixed_point_residual = 0.0;

    double operator()(VertexId x, VertexId y) const;
};

// Sums by repeated squaring, G_{2^k} = prod_{j<k} (I + P^{2^j}), until the tail
// bound drops below tail_tol. Throws NumericalError (carrying rho) if that needs
// more than order_cap terms. Dense; kept set limited to kDenseGreens vertices.
WalkGreens walk_greens(const GraphPtr& graph, const std::vector<VertexId>& killed, long long order_cap = 1LL << 40,
                       double tail_tol = 1e-12);
// Killed at the base point: K = G_P C^{-1}.
WalkGreens walk_greens_grounded(const TruncatedGraph& trunc, long long order_cap = 1LL << 40, double tail_tol = 1e-12);
// Killed on the frontier.
WalkGreens walk_greens_absorbed(const TruncatedGraph& trunc, long long order_cap = 1LL << 40, double tail_tol = 1e-12);

inline constexpr std::size_t kDenseGreens = 3000;

// K_xy = G_P(x,y) / c(y) over the kept vertices.
GreensMatrix greens_from_walk(const WalkGreens& g, const ConductanceGraph& graph);

struct SeriesValue {
    double value = 0.0;
    double tail_bound = 0.0;
    int terms = 0;
};

// Bi-infinite chain with constant forward probability p+ (p- = 1 - p+).
class BinomialClosedForm {
public:
    // Throws InvalidArgument ("degenerate") at p+ = 1/2 and outside (0, 1).
    explicit BinomialClosedForm(double p_plus);

    double p_plus() const { return p_; }
    double p_minus() const { return 1.0 - p_; }
    // 1 / sqrt(1 - 4 p+ p-)
    double g_diag() const;
    // 1 / (c(i) sqrt(1 - 4 p+ p-))
    double k_diag(double c_i) const;
    // (P^n)_{i,i+d}: binom(n, (n+d)/2) p+^{(n+d)/2} p-^{(n-d)/2}, 0 unless n >= |d| and n = d mod 2.
    double power_entry(int n, int d) const;
    // (P^{2m})_{i,i} = binom(2m, m) (p+ p-)^m
    double even_power_diag(int m) const;
    // (P^{2m+1})_{i,i+1} = binom(2m+1, m+1) p+^{m+1} p-^m
    double odd_power_next(int m) const;
    // G_P(i, i+d) by partial summation until the tail bound is below tail_tol.
    SeriesValue green_entry(int d, double tail_tol = 1e-14, int max_terms = 1000000) const;

private:
    double p_;
};

struct GeneratingCheck {
    double partial_sum = 0.0;
    double closed_form = 0.0;
    double residual = 0.0;
    // next term / (1 - 4 lambda)
    double tail_bound = 0.0;
    int terms = 0;
};

// sum_{m <= 200} lambda^m binom(2m, m) against 1 / sqrt(1 - 4 lambda); lambda in [0, 1/4).
GeneratingCheck generating_function_check(double lambda, int terms = 200);

struct NaryClosedForms {
    // (Nb + 1) / (Nb - 1)
    double g_same_level = 0.0;
    // 1 / ((1 + Nb) b^{n-1})
    double d_root = 0.0;
};

NaryClosedForms nary_tree_closed_forms(int arity, double b, int level);

struct NaryTreeComparison {
    NaryClosedForms closed;
    int depth = 0;
    // free effective resistance root -> a level-n vertex on the generated tree
    double d_root_measured = 0.0;
    double d_root_relative_bias = 0.0;
    // sum over level-n vertices x' of G_P(x, x') for the frontier-absorbed walk, x at level n
    double g_level_measured = 0.0;
    double g_level_relative_bias = 0.0;
};

NaryTreeComparison nary_tree_comparison(int arity, double b, int level, int depth);

// Levels by graph distance from o; every edge must join adjacent levels.
struct BratteliDiagram {
    GraphPtr graph;
    std::vector<std::vector<VertexId>> levels;
    std::vector<int> level_of;
    std::vector<Eigen::Index> slot_of;

    static BratteliDiagram from_truncation(const TruncatedGraph& trunc);
    int depth() const { return static_cast<int>(levels.size()) - 1; }
    // Rows V_n, columns V_{n+1} (up) or V_{n-1} (down), entries p_xy.
    Eigen::MatrixXd up_block(int n) const;
    Eigen::MatrixXd down_block(int n) const;
};

// Product of level blocks along a word of +1 / -1 steps starting at start_level.
// Throws InvalidArgument when the word leaves levels 0..depth.
Eigen::MatrixXd bratteli_transition_product(const BratteliDiagram& diagram, int start_level, const std::vector<int>& word);

void write_csv(std::ostream& out, const GreensMatrix& k, const ConductanceGraph& graph);

}  // namespace resnet
