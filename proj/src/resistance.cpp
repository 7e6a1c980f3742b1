#include "resnet/resistance.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <ostream>
#include <queue>

#include "resnet/error.hpp"
#include "resnet/parallel.hpp"

namespace resnet {

namespace {

constexpr std::size_t kMaxCycleRank = 3000;

struct SpanningTree {
    std::vector<VertexId> parent;
    std::vector<std::size_t> parent_edge;
    std::vector<int> depth;
};

// Edge ids follow graph.edges() order.
std::vector<std::vector<std::pair<VertexId, std::size_t>>> incidence(const ConductanceGraph& g,
                                                                     const std::vector<Edge>& edges) {
    std::vector<std::vector<std::pair<VertexId, std::size_t>>> inc(g.num_vertices());
    for (std::size_t e = 0; e < edges.size(); ++e) {
        inc[edges[e].from].push_back({edges[e].to, e});
        inc[edges[e].to].push_back({edges[e].from, e});
    }
    return inc;
}

SpanningTree bfs_tree(const ConductanceGraph& g, const std::vector<std::vector<std::pair<VertexId, std::size_t>>>& inc) {
    const std::size_t n = g.num_vertices();
    SpanningTree t{std::vector<VertexId>(n, n), std::vector<std::size_t>(n, 0), std::vector<int>(n, -1)};
    const VertexId o = g.base_point();
    std::queue<VertexId> queue;
    t.depth[o] = 0;
    t.parent[o] = o;
    queue.push(o);
    while (!queue.empty()) {
        VertexId x = queue.front();
        queue.pop();
        for (auto [y, e] : inc[x]) {
            if (t.depth[y] >= 0) continue;
            t.depth[y] = t.depth[x] + 1;
            t.parent[y] = x;
            t.parent_edge[y] = e;
            queue.push(y);
        }
    }
    return t;
}

// Adds `amount` units of flow along the tree path from a to b.
void add_tree_path(const SpanningTree& t, const std::vector<Edge>& edges, VertexId a, VertexId b, double amount,
                   Vector& flow) {
    auto step = [&](VertexId from, VertexId to, std::size_t e) {
        flow[static_cast<Eigen::Index>(e)] += edges[e].from == from ? amount : -amount;
        (void)to;
    };
    std::vector<std::pair<VertexId, std::size_t>> tail;
    while (a != b) {
        if (t.depth[a] >= t.depth[b]) {
            step(a, t.parent[a], t.parent_edge[a]);
            a = t.parent[a];
        } else {
            tail.push_back({b, t.parent_edge[b]});
            b = t.parent[b];
        }
    }
    for (auto it = tail.rbegin(); it != tail.rend(); ++it) step(t.parent[it->first], it->first, it->second);
}

double path_resistance(const ConductanceGraph& g, const SpanningTree& t, const std::vector<Edge>& edges, VertexId x) {
    double sum = 0.0;
    for (; x != g.base_point(); x = t.parent[x]) sum += 1.0 / edges[t.parent_edge[x]].conductance;
    return sum;
}

}  // namespace

struct ResistanceSolver::CycleSpace {
    std::vector<Edge> edges;
    SpanningTree tree;
    Eigen::SparseMatrix<double> basis;  // m x k
    Vector resistances;                 // 1/c per edge
    Eigen::LDLT<Eigen::MatrixXd> factor;
    bool usable = false;
};

std::string_view to_string(Method m) {
    switch (m) {
        case Method::M1: return "M1";
        case Method::M2: return "M2";
        case Method::M3: return "M3";
        case Method::M4: return "M4";
        case Method::M7: return "M7";
    }
    return "M4";
}

Method method_from_string(std::string_view name) {
    std::string s(name);
    for (auto& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (s == "M1") return Method::M1;
    if (s == "M2") return Method::M2;
    if (s == "M3") return Method::M3;
    if (s == "M4") return Method::M4;
    if (s == "M7") return Method::M7;
    if (s == "M5" || s == "M6")
        throw InvalidArgument("method " + s + " is analytically identical to M7/M2 and not implemented separately");
    throw InvalidArgument("unknown resistance method '" + std::string(name) + "'");
}

ResistanceSolver::ResistanceSolver(const TruncatedGraph& trunc, double tol)
    : trunc_(trunc), op_(trunc.graph), tol_(tol) {
    if (!(tol > 0.0)) throw InvalidArgument("solver tolerance must be > 0");
}

const Eigen::MatrixXd& ResistanceSolver::grounded_inverse() const {
    std::call_once(dense_once_, [this] {
        const auto n = static_cast<Eigen::Index>(op_.size());
        if (static_cast<std::size_t>(n) > kDenseLimit)
            throw InvalidArgument("dense grounded inverse limited to " + std::to_string(kDenseLimit) +
                                  " vertices; use an iterative method");
        const auto o = static_cast<Eigen::Index>(op_.graph().base_point());
        Eigen::MatrixXd full = Eigen::MatrixXd(op_.matrix());
        std::vector<Eigen::Index> keep;
        for (Eigen::Index i = 0; i < n; ++i)
            if (i != o) keep.push_back(i);
        const auto m = static_cast<Eigen::Index>(keep.size());
        Eigen::MatrixXd reduced(m, m);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j) reduced(i, j) = full(keep[i], keep[j]);
        Eigen::LLT<Eigen::MatrixXd> llt(reduced);
        if (llt.info() != Eigen::Success)
            throw NumericalError("grounded Laplacian is not positive definite", 0.0);
        Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(m, m));
        dense_ = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j) dense_(keep[i], keep[j]) = 0.5 * (inv(i, j) + inv(j, i));
    });
    return dense_;
}

const ResistanceSolver::CycleSpace& ResistanceSolver::cycle_space() const {
    std::call_once(cycle_once_, [this] {
        auto cs = std::make_shared<CycleSpace>();
        const auto& g = op_.graph();
        cs->edges = g.edges();
        auto inc = incidence(g, cs->edges);
        cs->tree = bfs_tree(g, inc);
        const auto m = static_cast<Eigen::Index>(cs->edges.size());
        cs->resistances.resize(m);
        for (Eigen::Index e = 0; e < m; ++e) cs->resistances[e] = 1.0 / cs->edges[static_cast<std::size_t>(e)].conductance;

        std::vector<char> in_tree(cs->edges.size(), 0);
        for (VertexId x = 0; x < g.num_vertices(); ++x)
            if (x != g.base_point()) in_tree[cs->tree.parent_edge[x]] = 1;
        std::vector<std::size_t> chords;
        for (std::size_t e = 0; e < cs->edges.size(); ++e)
            if (!in_tree[e]) chords.push_back(e);
        if (chords.size() > kMaxCycleRank) {
            cycles_ = cs;
            return;
        }

        const auto k = static_cast<Eigen::Index>(chords.size());
        std::vector<Eigen::Triplet<double>> triplets;
        Vector column = Vector::Zero(m);
        for (Eigen::Index j = 0; j < k; ++j) {
            const Edge& chord = cs->edges[chords[static_cast<std::size_t>(j)]];
            column.setZero();
            column[static_cast<Eigen::Index>(chords[static_cast<std::size_t>(j)])] = 1.0;
            add_tree_path(cs->tree, cs->edges, chord.to, chord.from, 1.0, column);
            for (Eigen::Index e = 0; e < m; ++e)
                if (column[e] != 0.0) triplets.emplace_back(e, j, column[e]);
        }
        cs->basis.resize(m, k);
        cs->basis.setFromTriplets(triplets.begin(), triplets.end());
        Eigen::MatrixXd gram = Eigen::MatrixXd(cs->basis.transpose() * cs->resistances.asDiagonal() * cs->basis);
        cs->factor.compute(gram);
        cs->usable = cs->factor.info() == Eigen::Success;
        cycles_ = cs;
    });
    return *cycles_;
}

Vector ResistanceSolver::thomson_flow(VertexId x, VertexId y) const {
    const auto& g = op_.graph();
    if (!g.contains(x) || !g.contains(y)) throw InvalidArgument("unknown vertex");
    const auto& cs = cycle_space();
    if (x == y) return Vector::Zero(static_cast<Eigen::Index>(cs.edges.size()));
    if (!cs.usable) {
        CurrentFlow f = current_of_dipole(solve_dipole(op_, x, y, tol_));
        return Eigen::Map<const Vector>(f.current.data(), static_cast<Eigen::Index>(f.current.size()));
    }
    Vector flow = Vector::Zero(static_cast<Eigen::Index>(cs.edges.size()));
    add_tree_path(cs.tree, cs.edges, x, y, 1.0, flow);
    if (cs.basis.cols() > 0) {
        Vector rhs = cs.basis.transpose() * cs.resistances.cwiseProduct(flow);
        Vector alpha = cs.factor.solve(rhs);
        flow -= cs.basis * alpha;
    }
    return flow;
}

double ResistanceSolver::resistance(VertexId x, VertexId y, Method method) const {
    const auto& g = op_.graph();
    if (!g.contains(x) || !g.contains(y)) throw InvalidArgument("unknown vertex");
    if (x == y) throw InvalidArgument("resistance needs distinct vertices");
    switch (method) {
        case Method::M1: {
            auto v = solve_dipole(op_, x, y, tol_);
            return v.potential(x) - v.potential(y);
        }
        case Method::M2:
            return solve_dipole(op_, x, y, tol_).potential.energy();
        case Method::M3: {
            const auto& cs = cycle_space();
            Vector flow = thomson_flow(x, y);
            return flow.cwiseAbs2().dot(cs.resistances);
        }
        case Method::M4: {
            const auto& k = grounded_inverse();
            const auto i = static_cast<Eigen::Index>(x), j = static_cast<Eigen::Index>(y);
            return k(i, i) + k(j, j) - 2.0 * k(i, j);
        }
        case Method::M7: {
            auto v = solve_dipole(op_, x, y, tol_);
            const double drop = v.potential(x) - v.potential(y);
            return drop * drop / v.potential.energy();
        }
    }
    return 0.0;
}

double resistance(const TruncatedGraph& trunc, VertexId x, VertexId y, Method method, double tol) {
    return ResistanceSolver(trunc, tol).resistance(x, y, method);
}

double CurrentFlow::at(VertexId x, VertexId y) const {
    const VertexId a = std::min(x, y), b = std::max(x, y);
    auto it = std::lower_bound(edges.begin(), edges.end(), std::pair{a, b}, [](const Edge& e, const auto& key) {
        return std::pair{e.from, e.to} < key;
    });
    if (it == edges.end() || it->from != a || it->to != b) return 0.0;
    const double i = current[static_cast<std::size_t>(it - edges.begin())];
    return x == a ? i : -i;
}

CurrentFlow current_of_dipole(const DipoleVector& v) {
    const auto& g = v.potential.graph();
    CurrentFlow out;
    out.edges = g.edges();
    out.current.reserve(out.edges.size());
    std::vector<double> net(g.num_vertices(), 0.0);
    for (const Edge& e : out.edges) {
        const double i = e.conductance * (v.potential(e.from) - v.potential(e.to));
        out.current.push_back(i);
        out.dissipation += i * i / e.conductance;
        net[e.from] += i;
        net[e.to] -= i;
    }
    net[v.source] -= 1.0;
    net[v.sink] += 1.0;
    for (double r : net) out.kirchhoff_residual = std::max(out.kirchhoff_residual, std::abs(r));
    return out;
}

ResistanceMatrix resistance_matrix(const TruncatedGraph& trunc, Method method, double tol, unsigned threads,
                                   std::size_t size_cap) {
    const std::size_t n = trunc.size();
    if (n > size_cap)
        throw InvalidArgument("resistance matrix limited to " + std::to_string(size_cap) + " vertices (graph has " +
                              std::to_string(n) + "); use pairwise queries");
    ResistanceSolver solver(trunc, tol);
    const auto ni = static_cast<Eigen::Index>(n);
    ResistanceMatrix out{Eigen::MatrixXd::Zero(ni, ni), method, tol};
    if (threads == 0) threads = default_threads();
    const VertexId o = trunc.g().base_point();
    const auto& op = solver.laplacian();

    if (method == Method::M4) {
        const auto& k = solver.grounded_inverse();
        for (Eigen::Index i = 0; i < ni; ++i)
            for (Eigen::Index j = i + 1; j < ni; ++j) out.values(i, j) = k(i, i) + k(j, j) - 2.0 * k(i, j);
    } else if (method == Method::M3) {
        solver.thomson_flow(o, o);  // builds the cycle factor
        parallel_for(n, threads, [&](std::size_t i) {
            for (std::size_t j = i + 1; j < n; ++j)
                out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    solver.resistance(i, j, Method::M3);
        });
    } else {
        // Grounded dipoles v_x = v_{x,o}; v_xy = v_x - v_y.
        std::vector<Vector> grounded(n, Vector::Zero(ni));
        parallel_for(n, threads, [&](std::size_t x) {
            if (x != o) grounded[x] = solve_dipole(op, x, o, tol).potential.values();
        });
        const auto& g = trunc.g();
        parallel_for(n, threads, [&](std::size_t i) {
            const auto ii = static_cast<Eigen::Index>(i);
            for (std::size_t j = i + 1; j < n; ++j) {
                const auto jj = static_cast<Eigen::Index>(j);
                Vector v = grounded[i] - grounded[j];
                const double drop = v[ii] - v[jj];
                const double energy = energy_inner(g, v, v);
                double d = method == Method::M1 ? drop : method == Method::M2 ? energy : drop * drop / energy;
                out.values(ii, jj) = d;
            }
        });
    }
    for (Eigen::Index i = 0; i < ni; ++i)
        for (Eigen::Index j = 0; j < i; ++j) out.values(i, j) = out.values(j, i);
    return out;
}

MetricReport check_metric_axioms(const ResistanceMatrix& d) {
    MetricReport r;
    const auto n = d.values.rows();
    r.min_off_diagonal = n > 1 ? std::numeric_limits<double>::infinity() : 0.0;
    r.min_triangle_slack = n > 2 ? std::numeric_limits<double>::infinity() : 0.0;
    const auto& m = d.values;
    for (Eigen::Index i = 0; i < n; ++i) {
        r.max_diagonal = std::max(r.max_diagonal, std::abs(m(i, i)));
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            r.max_asymmetry = std::max(r.max_asymmetry, std::abs(m(i, j) - m(j, i)));
            r.min_off_diagonal = std::min(r.min_off_diagonal, m(i, j));
            for (Eigen::Index k = 0; k < n; ++k)
                if (k != i && k != j) r.min_triangle_slack = std::min(r.min_triangle_slack, m(i, k) + m(k, j) - m(i, j));
        }
    }
    return r;
}

void write_csv(std::ostream& out, const ResistanceMatrix& d, const ConductanceGraph& graph) {
    out.precision(12);
    const std::size_t n = d.size();
    out << "label";
    for (VertexId x = 0; x < n; ++x) out << ',' << graph.label(x).to_string();
    out << '\n';
    for (VertexId x = 0; x < n; ++x) {
        out << graph.label(x).to_string();
        for (VertexId y = 0; y < n; ++y) out << ',' << d(x, y);
        out << '\n';
    }
}

namespace {

// M4 when the dense inverse fits, M2 otherwise.
double pair_distance(const ResistanceSolver& s, VertexId x, VertexId y) {
    if (x == y) return 0.0;
    return s.resistance(x, y, s.truncation().size() <= kDenseLimit ? Method::M4 : Method::M2);
}

}  // namespace

BoundednessReport boundedness_diagnostic(const FamilySpec& family, const std::vector<int>& radii, double tol,
                                         unsigned threads) {
    if (radii.size() < 2) throw InvalidArgument("boundedness diagnostic needs at least two radii");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (radii[i] <= radii[i - 1]) throw InvalidArgument("radii must be strictly increasing");
    if (threads == 0) threads = default_threads();

    BoundednessReport report;
    for (int radius : radii) {
        TruncatedGraph trunc = generate(family, radius);
        ResistanceSolver solver(trunc, tol);
        const auto& g = trunc.g();
        const VertexId o = g.base_point();

        // Every vertex when the dense inverse fits, else the frontier (or all vertices if there is none).
        std::vector<VertexId> candidates;
        if (trunc.size() <= kDenseLimit || trunc.frontier.empty()) {
            for (VertexId x = 0; x < trunc.size(); ++x) candidates.push_back(x);
        } else {
            candidates = trunc.frontier;
        }
        std::vector<double> dist(candidates.size(), 0.0);
        if (trunc.size() <= kDenseLimit) {
            const auto& k = solver.grounded_inverse();
            for (std::size_t i = 0; i < candidates.size(); ++i) {
                const auto c = static_cast<Eigen::Index>(candidates[i]);
                dist[i] = k(c, c);
            }
        } else {
            parallel_for(candidates.size(), threads, [&](std::size_t i) {
                if (candidates[i] != o) dist[i] = solver.resistance(candidates[i], o, Method::M2);
            });
        }
        const auto best = static_cast<std::size_t>(std::max_element(dist.begin(), dist.end()) - dist.begin());

        const auto edges = g.edges();
        const auto tree = bfs_tree(g, incidence(g, edges));
        BoundednessRow row;
        row.radius = radius;
        row.vertices = trunc.size();
        row.max_distance = dist[best];
        row.farthest = g.label(candidates[best]).to_string();
        row.geodesic_resistance = path_resistance(g, tree, edges, candidates[best]);
        report.rows.push_back(row);
    }

    for (std::size_t i = 1; i < report.rows.size(); ++i)
        report.differences.push_back(report.rows[i].max_distance - report.rows[i - 1].max_distance);
    for (std::size_t i = 1; i < report.differences.size(); ++i)
        report.ratios.push_back(report.differences[i - 1] != 0.0 ? report.differences[i] / report.differences[i - 1]
                                                                 : 0.0);

    const double last = report.rows.back().max_distance;
    const double last_diff = report.differences.back();
    if (!report.ratios.empty()) {
        const double q = report.ratios.back();
        report.bounded = std::abs(last_diff) <= 1e-12 * std::max(1.0, last) || (q >= 0.0 && q < 0.95);
    } else {
        report.bounded = std::abs(last_diff) <= 1e-12 * std::max(1.0, last);
    }
    if (report.bounded && report.differences.size() >= 2) {
        const double d1 = report.differences[report.differences.size() - 2];
        const double d2 = last_diff;
        report.limit_estimate = d1 != d2 ? last - d2 * d2 / (d2 - d1) : last;
    } else if (report.bounded) {
        report.limit_estimate = last;
    }
    return report;
}

TypeAReport type_a_diagnostic(const FamilySpec& family, int radius, int sample_pairs, double tol) {
    if (sample_pairs < 1) throw InvalidArgument("sample_pairs must be >= 1");
    if (radius < 2) throw InvalidArgument("type-A diagnostic needs radius >= 2");

    const bool comb = std::holds_alternative<family::Comb>(family);
    const bool tree = std::holds_alternative<family::BinaryTree>(family) || std::holds_alternative<family::NaryTree>(family);
    const bool line = std::holds_alternative<family::HalfLine>(family);
    if (!comb && !tree && !line)
        throw InvalidArgument("type-A diagnostic unsupported for family " + family_name(family) + " (no ray labels)");

    TruncatedGraph trunc = generate(family, radius);
    ResistanceSolver solver(trunc, tol);
    const auto& g = trunc.g();
    auto vertex = [&](VertexLabel label) {
        auto id = g.find(label);
        if (!id) throw InvalidArgument("vertex " + label.to_string() + " not in truncation");
        return *id;
    };

    TypeAReport report;
    if (comb) {
        // Teeth m < n, both at height k, with n + k <= radius.
        report.kind = "cross-teeth";
        report.epsilon = std::numeric_limits<double>::infinity();
        int pairs = 0;
        for (int n = 1; n < radius && pairs < sample_pairs; ++n)
            for (int m = 0; m < n && pairs < sample_pairs; ++m, ++pairs)
                for (int k = 1; n + k <= radius; ++k) {
                    VertexLabel a{LabelKind::comb, {m, k}}, b{LabelKind::comb, {n, k}};
                    const double d = pair_distance(solver, vertex(a), vertex(b));
                    report.rows.push_back({a.to_string(), b.to_string(), k, d});
                    report.epsilon = std::min(report.epsilon, d);
                }
        report.cauchy = false;
        return report;
    }

    // Within-ray steps d(x_n, x_{n+p}) along the leftmost ray, p = sample_pairs.
    report.kind = "within-ray";
    const int p = std::min(sample_pairs, radius - 1);
    auto ray_label = [&](int n) {
        if (line) return VertexLabel{LabelKind::halfline, {n}};
        return VertexLabel{LabelKind::tree_word, std::vector<int>(static_cast<std::size_t>(n), 0)};
    };
    for (int n = 0; n + p <= radius; ++n) {
        VertexLabel a = ray_label(n), b = ray_label(n + p);
        report.rows.push_back({a.to_string(), b.to_string(), n, pair_distance(solver, vertex(a), vertex(b))});
    }
    report.epsilon = report.rows.back().distance;
    bool decreasing = true;
    for (std::size_t i = 1; i < report.rows.size(); ++i)
        decreasing = decreasing && report.rows[i].distance < report.rows[i - 1].distance;
    report.cauchy = decreasing && report.rows.back().distance < 0.5 * report.rows.front().distance;
    return report;
}

ContinuumValue continuum_reference(double x, double y) {
    const double k = std::exp(-std::abs(x - y));
    return {k, 2.0 * (1.0 - k)};
}

}  // namespace resnet
