#include "resnet/greens.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "resnet/error.hpp"
#include "resnet/generators.hpp"
#include "resnet/parallel.hpp"
#include "resnet/resistance.hpp"

namespace resnet {

namespace {

std::vector<Eigen::Index> positions(std::size_t n, const std::vector<VertexId>& members) {
    std::vector<Eigen::Index> pos(n, -1);
    for (std::size_t i = 0; i < members.size(); ++i) pos[members[i]] = static_cast<Eigen::Index>(i);
    return pos;
}

// Delta restricted to rows and columns in `members`.
Eigen::MatrixXd restricted_laplacian(const ConductanceGraph& g, const std::vector<VertexId>& members,
                                     const std::vector<Eigen::Index>& pos) {
    const auto m = static_cast<Eigen::Index>(members.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const VertexId x = members[static_cast<std::size_t>(i)];
        auto nbrs = g.neighbors(x);
        auto w = g.weights(x);
        for (std::size_t k = 0; k < nbrs.size(); ++k) {
            a(i, i) += w[k];
            if (pos[nbrs[k]] >= 0) a(i, pos[nbrs[k]]) -= w[k];
        }
    }
    return a;
}

double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

std::string_view to_string(GreensMethod m) {
    switch (m) {
        case GreensMethod::gram: return "gram";
        case GreensMethod::neumann: return "neumann";
        case GreensMethod::closed_form: return "closed_form";
        case GreensMethod::dirichlet: return "dirichlet";
    }
    return "gram";
}

double GreensMatrix::operator()(VertexId x, VertexId y) const {
    if (x >= position.size() || y >= position.size()) throw InvalidArgument("unknown vertex");
    const Eigen::Index i = position[x], j = position[y];
    if (i < 0 || j < 0) return 0.0;
    return values(i, j);
}

double WalkGreens::operator()(VertexId x, VertexId y) const {
    if (x >= position.size() || y >= position.size()) throw InvalidArgument("unknown vertex");
    const Eigen::Index i = position[x], j = position[y];
    if (i < 0 || j < 0) return 0.0;
    return values(i, j);
}

GreensMatrix greens_gram(const TruncatedGraph& trunc, double tol, unsigned threads) {
    const auto& g = trunc.g();
    const std::size_t n = g.num_vertices();
    const VertexId o = g.base_point();
    GreensMatrix k;
    k.method = GreensMethod::gram;
    for (VertexId x = 0; x < n; ++x)
        if (x != o) k.vertices.push_back(x);
    k.position = positions(n, k.vertices);
    const auto m = static_cast<Eigen::Index>(k.vertices.size());
    k.values.resize(m, m);

    LaplacianOperator op(trunc.graph);
    parallel_for(k.vertices.size(), threads ? threads : default_threads(), [&](std::size_t c) {
        auto v = solve_dipole(op, k.vertices[c], o, tol);
        for (Eigen::Index r = 0; r < m; ++r) k.values(r, static_cast<Eigen::Index>(c)) = v.potential(k.vertices[static_cast<std::size_t>(r)]);
    });
    k.symmetry_residual = (k.values - k.values.transpose()).cwiseAbs().maxCoeff();
    k.values = 0.5 * (k.values + k.values.transpose()).eval();
    return k;
}

GreensMatrix dirichlet_greens(const TruncatedGraph& trunc) {
    if (trunc.frontier.empty()) throw InvalidArgument("Dirichlet Green's function needs a nonempty frontier");
    if (trunc.interior.size() > kDenseGreens)
        throw InvalidArgument("dense Green's function limited to " + std::to_string(kDenseGreens) + " vertices");
    GreensMatrix k;
    k.method = GreensMethod::dirichlet;
    k.vertices = trunc.interior;
    k.position = positions(trunc.size(), k.vertices);
    Eigen::MatrixXd a = restricted_laplacian(trunc.g(), k.vertices, k.position);
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) throw NumericalError("interior Laplacian is not positive definite", 0.0);
    k.values = llt.solve(Eigen::MatrixXd::Identity(a.rows(), a.cols()));
    k.symmetry_residual = (k.values - k.values.transpose()).cwiseAbs().maxCoeff();
    k.values = 0.5 * (k.values + k.values.transpose()).eval();
    return k;
}

InversionResidual greens_inversion_check(const TruncatedGraph& trunc, const GreensMatrix& k) {
    if (k.position.size() != trunc.size()) throw InvalidArgument("Green's matrix built on a different graph");
    Eigen::MatrixXd a = restricted_laplacian(trunc.g(), k.vertices, k.position);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(a.rows(), a.cols());
    InversionResidual r;
    if (a.size() == 0) return r;
    r.left = (a * k.values - id).cwiseAbs().maxCoeff();
    r.right = (k.values * a - id).cwiseAbs().maxCoeff();
    return r;
}

WalkGreens walk_greens(const GraphPtr& graph, const std::vector<VertexId>& killed, long long order_cap, double tail_tol) {
    if (!(tail_tol > 0.0)) throw InvalidArgument("tail tolerance must be > 0");
    const auto& g = *graph;
    const std::size_t n = g.num_vertices();
    std::vector<char> dead(n, 0);
    for (VertexId x : killed) {
        if (x >= n) throw InvalidArgument("killed vertex " + std::to_string(x) + " out of range");
        dead[x] = 1;
    }
    WalkGreens out;
    for (VertexId x = 0; x < n; ++x)
        if (!dead[x]) out.kept.push_back(x);
    if (out.kept.size() > kDenseGreens)
        throw InvalidArgument("dense walk Green's function limited to " + std::to_string(kDenseGreens) + " vertices");
    out.position = positions(n, out.kept);

    TransitionOperator p(graph);
    const double rho = restricted_spectral_radius(p, out.kept);
    out.spectral_radius = rho;
    if (!(rho < 1.0))
        throw NumericalError("walk is not killed: spectral radius estimate " + std::to_string(rho), rho);

    auto tail = [rho](long long order) { return std::pow(rho, static_cast<double>(order)) / (1.0 - rho); };
    long long order = 1;
    int squarings = 0;
    while (tail(order) >= tail_tol) {
        if (order > order_cap / 2)
            throw NumericalError("Neumann series needs more than " + std::to_string(order_cap) +
                                     " terms (spectral radius " + std::to_string(rho) + ")",
                                 rho);
        order *= 2;
        ++squarings;
    }
    out.order = order;
    out.tail_bound = tail(order);

    const auto m = static_cast<Eigen::Index>(out.kept.size());
    Eigen::MatrixXd pk = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const VertexId x = out.kept[static_cast<std::size_t>(i)];
        const double cx = weighted_degree(g, x);
        auto nbrs = g.neighbors(x);
        auto w = g.weights(x);
        for (std::size_t a = 0; a < nbrs.size(); ++a)
            if (out.position[nbrs[a]] >= 0) pk(i, out.position[nbrs[a]]) = w[a] / cx;
    }
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(m, m);
    Eigen::MatrixXd gsum = id;
    Eigen::MatrixXd power = pk;
    for (int j = 0; j < squarings; ++j) {
        gsum = (gsum * (id + power)).eval();
        if (j + 1 < squarings) power = (power * power).eval();
    }
    out.values = std::move(gsum);
    out.fixed_point_residual = m ? (out.values - id - pk * out.values).cwiseAbs().maxCoeff() : 0.0;
    return out;
}

WalkGreens walk_greens_grounded(const TruncatedGraph& trunc, long long order_cap, double tail_tol) {
    return walk_greens(trunc.graph, {trunc.g().base_point()}, order_cap, tail_tol);
}

WalkGreens walk_greens_absorbed(const TruncatedGraph& trunc, long long order_cap, double tail_tol) {
    if (trunc.frontier.empty()) throw InvalidArgument("absorbed walk needs a nonempty frontier");
    return walk_greens(trunc.graph, trunc.frontier, order_cap, tail_tol);
}

GreensMatrix greens_from_walk(const WalkGreens& g, const ConductanceGraph& graph) {
    if (g.position.size() != graph.num_vertices()) throw InvalidArgument("walk Green's function built on a different graph");
    GreensMatrix k;
    k.method = GreensMethod::neumann;
    k.vertices = g.kept;
    k.position = g.position;
    k.values = g.values;
    for (Eigen::Index j = 0; j < k.values.cols(); ++j)
        k.values.col(j) /= weighted_degree(graph, g.kept[static_cast<std::size_t>(j)]);
    k.symmetry_residual = k.values.size() ? (k.values - k.values.transpose()).cwiseAbs().maxCoeff() : 0.0;
    return k;
}

BinomialClosedForm::BinomialClosedForm(double p_plus) : p_(p_plus) {
    if (!(p_plus > 0.0 && p_plus < 1.0)) throw InvalidArgument("p_plus must lie in (0, 1)");
    if (p_plus == 0.5) throw InvalidArgument("degenerate case p_plus = p_minus = 1/2: the chain is recurrent");
}

double BinomialClosedForm::g_diag() const { return 1.0 / std::sqrt(1.0 - 4.0 * p_plus() * p_minus()); }

double BinomialClosedForm::k_diag(double c_i) const {
    if (!(c_i > 0.0)) throw InvalidArgument("c(i) must be > 0");
    return g_diag() / c_i;
}

double BinomialClosedForm::power_entry(int n, int d) const {
    if (n < 0) throw InvalidArgument("power must be >= 0");
    if (std::abs(d) > n || (n - d) % 2 != 0) return 0.0;
    const int up = (n + d) / 2, down = n - up;
    return std::exp(log_binomial(n, up) + up * std::log(p_plus()) + down * std::log(p_minus()));
}

double BinomialClosedForm::even_power_diag(int m) const { return power_entry(2 * m, 0); }

double BinomialClosedForm::odd_power_next(int m) const { return power_entry(2 * m + 1, 1); }

SeriesValue BinomialClosedForm::green_entry(int d, double tail_tol, int max_terms) const {
    // Each term is at most (p+/p-)^{d/2} r^n with r = sqrt(4 p+ p-) < 1.
    const double r = std::sqrt(4.0 * p_plus() * p_minus());
    const double scale = std::pow(p_plus() / p_minus(), 0.5 * d);
    SeriesValue s;
    int n = std::abs(d);
    for (; s.terms < max_terms; n += 2) {
        s.value += power_entry(n, d);
        ++s.terms;
        s.tail_bound = scale * std::pow(r, n + 1) / (1.0 - r);
        if (s.tail_bound < tail_tol) break;
    }
    if (s.tail_bound >= tail_tol)
        throw NumericalError("binomial Green's series did not reach its tail tolerance", s.tail_bound);
    return s;
}

GeneratingCheck generating_function_check(double lambda, int terms) {
    if (!(lambda >= 0.0)) throw InvalidArgument("lambda must be >= 0");
    if (lambda >= 0.25) throw InvalidArgument("generating function diverges for lambda >= 1/4");
    if (terms < 1) throw InvalidArgument("terms must be >= 1");
    GeneratingCheck out;
    double term = 1.0;  // binom(2m, m) lambda^m at m = 0
    for (int m = 0; m <= terms; ++m) {
        out.partial_sum += term;
        term *= lambda * 2.0 * (2.0 * m + 1.0) / (m + 1.0);
    }
    out.terms = terms + 1;
    out.closed_form = 1.0 / std::sqrt(1.0 - 4.0 * lambda);
    out.residual = std::abs(out.closed_form - out.partial_sum);
    // successive term ratios increase towards 4 lambda
    out.tail_bound = term / (1.0 - 4.0 * lambda);
    return out;
}

NaryClosedForms nary_tree_closed_forms(int arity, double b, int level) {
    if (arity < 2) throw InvalidArgument("N-ary tree needs N >= 2");
    if (!(b > 0.0) || !(arity * b > 1.0)) throw InvalidArgument("N-ary closed forms need N b > 1");
    if (level < 1) throw InvalidArgument("level must be >= 1");
    const double nb = arity * b;
    return {(nb + 1.0) / (nb - 1.0), 1.0 / ((1.0 + nb) * std::pow(b, level - 1))};
}

NaryTreeComparison nary_tree_comparison(int arity, double b, int level, int depth) {
    if (depth < level + 1) throw InvalidArgument("depth must exceed the level");
    NaryTreeComparison out;
    out.closed = nary_tree_closed_forms(arity, b, level);
    out.depth = depth;
    TruncatedGraph trunc = generate(family::NaryTree{arity, b}, depth);
    const auto& g = trunc.g();
    const VertexId x = *g.find({LabelKind::tree_word, std::vector<int>(static_cast<std::size_t>(level), 0)});

    ResistanceSolver solver(trunc);
    out.d_root_measured = solver.resistance(g.base_point(), x, trunc.size() <= kDenseLimit ? Method::M4 : Method::M2);
    out.d_root_relative_bias = (out.d_root_measured - out.closed.d_root) / out.closed.d_root;

    WalkGreens walk = walk_greens_absorbed(trunc);
    auto dist = bfs_distances(g, g.base_point());
    for (VertexId y = 0; y < g.num_vertices(); ++y)
        if (dist[y] == level) out.g_level_measured += walk(x, y);
    out.g_level_relative_bias = (out.g_level_measured - out.closed.g_same_level) / out.closed.g_same_level;
    return out;
}

BratteliDiagram BratteliDiagram::from_truncation(const TruncatedGraph& trunc) {
    BratteliDiagram d;
    d.graph = trunc.graph;
    const auto& g = trunc.g();
    d.level_of = bfs_distances(g, g.base_point());
    const int depth = *std::max_element(d.level_of.begin(), d.level_of.end());
    d.levels.resize(static_cast<std::size_t>(depth) + 1);
    d.slot_of.assign(g.num_vertices(), 0);
    for (VertexId x = 0; x < g.num_vertices(); ++x) {
        auto& lvl = d.levels[static_cast<std::size_t>(d.level_of[x])];
        d.slot_of[x] = static_cast<Eigen::Index>(lvl.size());
        lvl.push_back(x);
    }
    for (const Edge& e : g.edges())
        if (std::abs(d.level_of[e.from] - d.level_of[e.to]) != 1)
            throw InvalidArgument("not a Bratteli diagram: edge " + g.label(e.from).to_string() + " - " +
                                  g.label(e.to).to_string() + " does not join adjacent levels");
    return d;
}

Eigen::MatrixXd BratteliDiagram::up_block(int n) const {
    if (n < 0 || n >= depth()) throw InvalidArgument("no level above " + std::to_string(n));
    const auto& rows = levels[static_cast<std::size_t>(n)];
    const auto& cols = levels[static_cast<std::size_t>(n) + 1];
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double cx = weighted_degree(*graph, rows[i]);
        auto nbrs = graph->neighbors(rows[i]);
        auto w = graph->weights(rows[i]);
        for (std::size_t a = 0; a < nbrs.size(); ++a)
            if (level_of[nbrs[a]] == n + 1) m(static_cast<Eigen::Index>(i), slot_of[nbrs[a]]) = w[a] / cx;
    }
    return m;
}

Eigen::MatrixXd BratteliDiagram::down_block(int n) const {
    if (n <= 0 || n > depth()) throw InvalidArgument("level underflow: no level below " + std::to_string(n));
    const auto& rows = levels[static_cast<std::size_t>(n)];
    const auto& cols = levels[static_cast<std::size_t>(n) - 1];
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double cx = weighted_degree(*graph, rows[i]);
        auto nbrs = graph->neighbors(rows[i]);
        auto w = graph->weights(rows[i]);
        for (std::size_t a = 0; a < nbrs.size(); ++a)
            if (level_of[nbrs[a]] == n - 1) m(static_cast<Eigen::Index>(i), slot_of[nbrs[a]]) = w[a] / cx;
    }
    return m;
}

Eigen::MatrixXd bratteli_transition_product(const BratteliDiagram& diagram, int start_level, const std::vector<int>& word) {
    if (start_level < 0 || start_level > diagram.depth())
        throw InvalidArgument("start level " + std::to_string(start_level) + " outside 0.." + std::to_string(diagram.depth()));
    const auto width = static_cast<Eigen::Index>(diagram.levels[static_cast<std::size_t>(start_level)].size());
    Eigen::MatrixXd product = Eigen::MatrixXd::Identity(width, width);
    int level = start_level;
    for (int step : word) {
        if (step == 1) {
            if (level + 1 > diagram.depth()) throw InvalidArgument("level overflow: word climbs past the truncation");
            product = (product * diagram.up_block(level)).eval();
            ++level;
        } else if (step == -1) {
            if (level == 0) throw InvalidArgument("level underflow: word steps below level 0");
            product = (product * diagram.down_block(level)).eval();
            --level;
        } else {
            throw InvalidArgument("word letters must be +1 or -1");
        }
    }
    return product;
}

void write_csv(std::ostream& out, const GreensMatrix& k, const ConductanceGraph& graph) {
    out.precision(12);
    out << "label";
    for (VertexId x : k.vertices) out << ',' << graph.label(x).to_string();
    out << '\n';
    for (std::size_t i = 0; i < k.vertices.size(); ++i) {
        out << graph.label(k.vertices[i]).to_string();
        for (std::size_t j = 0; j < k.vertices.size(); ++j)
            out << ',' << k.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        out << '\n';
    }
}

}  // namespace resnet
