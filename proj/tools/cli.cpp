#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "resnet/decomposition.hpp"
#include "resnet/error.hpp"
#include "resnet/generators.hpp"
#include "resnet/io.hpp"
#include "resnet/markov.hpp"
#include "resnet/parallel.hpp"
#include "resnet/resistance.hpp"

namespace resnet::cli {

namespace {

struct Common {
    unsigned threads = 0;
    std::uint64_t seed = 1;
    bool deterministic = false;
    std::string output;
    std::string format = "json";
    double tol = 1e-10;
    std::vector<std::string> args;
};

std::string timestamp_utc() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Json config_echo(const Common& c, const std::string& command, Json params) {
    Json cfg;
    cfg["command"] = command;
    cfg["arguments"] = c.args;
    cfg["seed"] = c.seed;
    cfg["threads"] = c.threads == 0 ? default_threads() : c.threads;
    cfg["tolerance"] = report_number(c.tol);
    cfg["format"] = c.format;
    cfg["parameters"] = std::move(params);
    return cfg;
}

Json report_header(const Common& c, const std::string& command, Json params) {
    Json r;
    r["config"] = config_echo(c, command, std::move(params));
    r["seed"] = c.seed;
    if (!c.deterministic) r["timestamp"] = timestamp_utc();
    return r;
}

// Writes text to -o when given (and notes it on out), else to out.
void emit(const Common& c, std::ostream& out, const std::string& text) {
    if (c.output.empty()) {
        out << text;
        return;
    }
    std::ofstream f(c.output);
    if (!f) throw InvalidArgument("cannot write " + c.output);
    f << text;
    out << "wrote " << c.output << '\n';
}

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(12) << v;
    return s.str();
}

std::string label_of(const ConductanceGraph& g, VertexId x) { return g.has_labels() ? g.label(x).to_string() : std::to_string(x); }

VertexId require_vertex(const TruncatedGraph& t, long long x, const char* what) {
    if (x < 0 || static_cast<std::size_t>(x) >= t.size())
        throw InvalidArgument(std::string(what) + " " + std::to_string(x) + " is not a vertex of the graph");
    return static_cast<VertexId>(x);
}

// ---- generate ----

struct GenerateOptions {
    std::string family;
    int radius = 0;
    std::optional<int> arity, dim;
    std::optional<double> b, growth, minus, plus, p_plus, r1, r2, r3, min_weight, max_weight, scale;
    std::optional<std::size_t> vertices, extra;
    std::vector<double> root_weights;
    std::string block;
};

Eigen::MatrixXd parse_block(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::stringstream rs(text);
    std::string row;
    while (std::getline(rs, row, ';')) {
        std::vector<double> vals;
        std::stringstream cs(row);
        std::string cell;
        while (std::getline(cs, cell, ',')) {
            try {
                vals.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw InvalidArgument("--block: cannot parse entry '" + cell + "'");
            }
        }
        rows.push_back(std::move(vals));
    }
    if (rows.empty() || rows[0].empty()) throw InvalidArgument("--block: empty matrix");
    Eigen::MatrixXd m(Eigen::Index(rows.size()), Eigen::Index(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size()) throw InvalidArgument("--block: rows have different lengths");
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(Eigen::Index(i), Eigen::Index(j)) = rows[i][j];
    }
    return m;
}

FamilySpec family_from_options(const GenerateOptions& o, std::uint64_t seed) {
    const auto& f = o.family;
    if (f == "halfline") return family::HalfLine{o.growth.value_or(1.0)};
    if (f == "lattice") return family::Lattice{o.dim.value_or(2)};
    if (f == "binary-tree") return family::BinaryTree{o.minus.value_or(1.0), o.plus.value_or(1.0), o.growth.value_or(2.0)};
    if (f == "nary-tree") return family::NaryTree{o.arity.value_or(2), o.b.value_or(2.0)};
    if (f == "comb") return family::Comb{};
    if (f == "three-resistor") return family::ThreeResistor{o.r1.value_or(1.0), o.r2.value_or(1.0), o.r3.value_or(1.0)};
    if (f == "binomial-chain") return family::BinomialChain{o.p_plus.value_or(2.0 / 3.0)};
    if (f == "random-tree")
        return family::RandomTree{o.vertices.value_or(10), seed, o.min_weight.value_or(0.1), o.max_weight.value_or(10.0)};
    if (f == "random-graph")
        return family::RandomGraph{o.vertices.value_or(10), o.extra.value_or(10), seed, o.min_weight.value_or(0.1),
                                   o.max_weight.value_or(10.0)};
    if (f == "bratteli") {
        family::Bratteli spec;
        if (!o.root_weights.empty()) spec.root_weights = o.root_weights;
        if (!o.block.empty()) spec.block = parse_block(o.block);
        spec.scale = o.scale.value_or(1.0);
        return spec;
    }
    throw InvalidArgument("unknown family '" + f + "'");
}

Json generate_params(const GenerateOptions& o) {
    Json p;
    p["family"] = o.family;
    p["radius"] = o.radius;
    auto put = [&](const char* key, const auto& v) {
        if (v) p[key] = *v;
    };
    put("n", o.arity);
    put("dim", o.dim);
    put("b", o.b);
    put("growth", o.growth);
    put("minus", o.minus);
    put("plus", o.plus);
    put("p_plus", o.p_plus);
    put("r1", o.r1);
    put("r2", o.r2);
    put("r3", o.r3);
    put("vertices", o.vertices);
    put("extra", o.extra);
    put("min_weight", o.min_weight);
    put("max_weight", o.max_weight);
    put("scale", o.scale);
    if (!o.root_weights.empty()) p["root_weights"] = o.root_weights;
    if (!o.block.empty()) p["block"] = o.block;
    return p;
}

int cmd_generate(const Common& c, const GenerateOptions& o, std::ostream& out, std::ostream& err) {
    const auto spec = family_from_options(o, c.seed);
    const auto t = generate(spec, o.radius);
    Json meta = config_echo(c, "generate", generate_params(o));
    if (!c.deterministic) meta["timestamp"] = timestamp_utc();
    std::ostringstream doc;
    save_graph(doc, t, meta);
    emit(c, out, doc.str());
    (c.output.empty() ? err : out) << "vertices " << t.size() << " edges " << t.g().num_edges() << '\n';
    return kOk;
}

// ---- resist ----

struct ResistOptions {
    std::string graph;
    std::optional<long long> from, to;
    std::string method = "all";
    bool matrix = false;
};

std::vector<Method> methods_of(const std::string& name) {
    std::string lower = name;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return char(std::tolower(ch)); });
    if (lower == "all") return {Method::M1, Method::M2, Method::M3, Method::M4, Method::M7};
    return {method_from_string(name)};
}

int cmd_resist(const Common& c, const ResistOptions& o, std::ostream& out) {
    const auto t = load_graph_file(o.graph);
    const auto methods = methods_of(o.method);
    if (o.matrix) {
        const Method m = methods.size() == 1 ? methods[0] : Method::M4;
        const auto d = resistance_matrix(t, m, c.tol, c.threads);
        std::ostringstream csv;
        write_csv(csv, d, t.g());
        emit(c, out, csv.str());
        return kOk;
    }
    if (!o.from || !o.to) throw InvalidArgument("resist needs --from and --to (or --matrix)");
    const VertexId x = require_vertex(t, *o.from, "--from"), y = require_vertex(t, *o.to, "--to");
    if (x == y) throw InvalidArgument("--from and --to must differ");

    ResistanceSolver solver(t, c.tol);
    std::vector<double> values;
    for (Method m : methods) values.push_back(solver.resistance(x, y, m));
    double max_abs = 0.0;
    for (double a : values)
        for (double b : values) max_abs = std::max(max_abs, std::abs(a - b));
    const double max_rel = max_abs / std::max(std::abs(values[0]), 1e-300);

    if (c.format == "csv") {
        std::ostringstream csv;
        csv << "method,value\n";
        for (std::size_t i = 0; i < methods.size(); ++i) csv << to_string(methods[i]) << ',' << fmt(values[i]) << '\n';
        emit(c, out, csv.str());
        return kOk;
    }
    Json params{{"graph", o.graph}, {"from", x}, {"to", y}, {"method", o.method}};
    Json r = report_header(c, "resist", params);
    r["from"] = label_of(t.g(), x);
    r["to"] = label_of(t.g(), y);
    Json vals;
    for (std::size_t i = 0; i < methods.size(); ++i) vals[std::string(to_string(methods[i]))] = report_number(values[i]);
    r["values"] = vals;
    r["max_disagreement"] = report_number(max_abs);
    r["max_relative_disagreement"] = report_number(max_rel);
    emit(c, out, r.dump(2) + "\n");
    return kOk;
}

// ---- check ----

struct CheckRow {
    std::string name;
    bool pass;
    bool skipped;
    double residual;
    double threshold;
    std::string detail;
};

// Frontier for the split check: the given one, else the vertices farthest from o.
TruncatedGraph split_truncation(const TruncatedGraph& t) {
    if (!t.frontier.empty()) return t;
    const auto dist = bfs_distances(t.g(), t.g().base_point());
    const int far = *std::max_element(dist.begin(), dist.end());
    std::vector<VertexId> sphere;
    for (VertexId x = 0; x < dist.size(); ++x)
        if (dist[x] == far && x != t.g().base_point()) sphere.push_back(x);
    return TruncatedGraph::with_frontier(t.graph, sphere, far);
}

Vector random_values(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vector v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = u(rng);
    return v;
}

int cmd_check(const Common& c, const std::string& path, int samples, std::ostream& out) {
    const auto t = load_graph_file(path);
    const auto whole = TruncatedGraph::whole(t.graph);
    const std::size_t n = t.size();
    std::mt19937_64 rng(c.seed);
    std::vector<CheckRow> rows;

    if (n >= 2 && n - 1 <= kDenseGreens) {
        const auto k = greens_gram(whole, c.tol, c.threads);
        const auto r = greens_inversion_check(whole, k);
        rows.push_back({"green-inversion", r.max() <= 1e-8, false, r.max(), 1e-8, "max |Delta K - I|, |K Delta - I|"});
    } else {
        rows.push_back({"green-inversion", true, true, 0.0, 1e-8, "graph too large for the dense check"});
    }

    if (n >= 2 && n <= kDenseLimit) {
        const auto d = resistance_matrix(whole, Method::M4, c.tol, c.threads);
        const auto m = check_metric_axioms(d);
        const double resid = std::max({m.max_diagonal, m.max_asymmetry, std::max(0.0, -m.min_triangle_slack)});
        rows.push_back({"metric-axioms", m.ok(1e-8), false, resid, 1e-8, "diagonal, symmetry, triangle slack"});
    } else {
        rows.push_back({"metric-axioms", true, true, 0.0, 1e-8, "graph too large for the dense check"});
    }

    {
        int violations = 0;
        double worst = 0.0;
        for (int i = 0; i < samples; ++i) {
            EnergyVector u(t.graph, random_values(n, rng)), w(t.graph, random_values(n, rng));
            const auto cert = pointwise_product(u, w);
            if (cert.slack < 0.0) ++violations;
            worst = std::max(worst, -cert.slack / std::max(cert.bound, 1e-300));
        }
        rows.push_back({"algebra-bound", violations == 0, false, std::max(0.0, worst), 0.0,
                        std::to_string(violations) + " violations over " + std::to_string(samples) + " pairs"});
    }

    if (n >= 2) {
        double worst = 0.0;
        std::uniform_int_distribution<VertexId> pick(0, n - 1);
        LaplacianOperator op(t.graph);
        for (int i = 0; i < 5; ++i) {
            VertexId x = pick(rng), y = pick(rng);
            if (x == y) y = (x + 1) % n;
            const auto v = solve_dipole(op, x, y, std::min(c.tol, 1e-12));
            EnergyVector f(t.graph, random_values(n, rng));
            worst = std::max(worst, reproducing_check(v, f) / std::max(1.0, f.values().cwiseAbs().maxCoeff()));
        }
        rows.push_back({"reproducing", worst <= 1e-8, false, worst, 1e-8, "|<v_xy, f>_E - (f(x) - f(y))|"});
    }

    {
        const auto st = split_truncation(t);
        if (st.frontier.empty()) {
            rows.push_back({"royden-pythagoras", true, true, 0.0, 1e-8, "single vertex"});
        } else {
            double worst = 0.0;
            for (int i = 0; i < 5; ++i) {
                const auto e = energy_split(st, EnergyVector(st.graph, random_values(n, rng)));
                worst = std::max({worst, e.pythagoras_residual, e.identity_residual});
            }
            rows.push_back({"royden-pythagoras", worst <= 1e-8, false, worst, 1e-8, "relative, 5 random functions"});
        }
    }

    bool all = true;
    Json checks = Json::array();
    for (const auto& r : rows) {
        all = all && r.pass;
        out << (r.skipped ? "SKIP " : r.pass ? "PASS " : "FAIL ") << r.name << " residual=" << fmt(r.residual)
            << " threshold=" << fmt(r.threshold) << " (" << r.detail << ")\n";
        checks.push_back(Json{{"name", r.name},
                              {"status", r.skipped ? "skip" : r.pass ? "pass" : "fail"},
                              {"residual", report_number(r.residual)},
                              {"threshold", report_number(r.threshold)},
                              {"detail", r.detail}});
    }
    out << (all ? "all checks passed" : "some checks failed") << '\n';
    if (!c.output.empty()) {
        Json rep = report_header(c, "check", Json{{"graph", path}, {"samples", samples}});
        rep["vertices"] = n;
        rep["checks"] = checks;
        rep["passed"] = all;
        std::ofstream f(c.output);
        if (!f) throw InvalidArgument("cannot write " + c.output);
        f << rep.dump(2) << '\n';
    }
    return all ? kOk : kNumerical;
}

// ---- walk ----

struct WalkOptions {
    std::string graph;
    std::optional<long long> start;
    std::size_t samples = 10000;
    std::size_t max_steps = 1000000;
    std::optional<int> radius;
};

int cmd_walk(const Common& c, const WalkOptions& o, std::ostream& out) {
    auto t = load_graph_file(o.graph);
    if (t.frontier.empty()) {
        if (!o.radius) throw InvalidArgument("graph has no frontier; pass --radius to truncate it");
        t = TruncatedGraph::ball(t.g(), *o.radius);
    }
    if (t.frontier.empty()) throw InvalidArgument("truncation has no frontier");
    const VertexId x = o.start ? require_vertex(t, *o.start, "--start") : t.g().base_point();
    if (o.samples < 1) throw InvalidArgument("--samples must be positive");

    const auto mc = estimate_boundary(t, x, o.samples, o.max_steps, c.seed, c.threads);
    const auto exact = harmonic_measure_exact(t, x);
    const double absorbed = double(mc.samples - mc.unabsorbed);
    std::vector<double> z(t.frontier.size(), 0.0);
    double max_z = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double mu = exact.weights[i];
        const double sigma = absorbed > 0 ? std::sqrt(mu * (1.0 - mu) / absorbed) : 0.0;
        const double diff = mc.weights[i] - mu;
        z[i] = sigma > 0 ? diff / sigma : (std::abs(diff) < 1e-12 ? 0.0 : INFINITY);
        max_z = std::max(max_z, std::abs(z[i]));
    }

    if (c.format == "csv") {
        std::ostringstream csv;
        csv << "vertex,label,count,weight,std_error,exact,z\n";
        for (std::size_t i = 0; i < z.size(); ++i)
            csv << t.frontier[i] << ',' << label_of(t.g(), t.frontier[i]) << ',' << mc.counts[i] << ',' << fmt(mc.weights[i])
                << ',' << fmt(mc.std_errors[i]) << ',' << fmt(exact.weights[i]) << ',' << fmt(z[i]) << '\n';
        emit(c, out, csv.str());
        return kOk;
    }
    Json params{{"graph", o.graph}, {"start", x}, {"samples", o.samples}, {"max_steps", o.max_steps}};
    if (o.radius) params["radius"] = *o.radius;
    Json r = report_header(c, "walk", params);
    r["start"] = label_of(t.g(), x);
    r["samples"] = mc.samples;
    r["unabsorbed"] = mc.unabsorbed;
    Json hits = Json::array();
    for (std::size_t i = 0; i < z.size(); ++i)
        hits.push_back(Json{{"vertex", t.frontier[i]},
                            {"label", label_of(t.g(), t.frontier[i])},
                            {"count", mc.counts[i]},
                            {"weight", report_number(mc.weights[i])},
                            {"std_error", report_number(mc.std_errors[i])},
                            {"exact", report_number(exact.weights[i])},
                            {"z", report_number(z[i])}});
    r["hits"] = hits;
    r["max_abs_z"] = report_number(max_z);
    emit(c, out, r.dump(2) + "\n");
    return kOk;
}

// ---- oracle ----

struct OracleOptions {
    std::string model;
    std::optional<double> p_plus, b, x, y;
    std::optional<int> arity;
    int level = 1;
    bool verify = false;
    int width = 40;
    int depth = 8;
};

int cmd_oracle(const Common& c, const OracleOptions& o, std::ostream& out) {
    Json params{{"model", o.model}};
    Json body;
    if (o.model == "binomial") {
        if (!o.p_plus) throw InvalidArgument("binomial oracle needs --p-plus");
        params["p_plus"] = *o.p_plus;
        BinomialClosedForm bf(*o.p_plus);
        body["formula"] = "G_P(i,i) = 1/sqrt(1 - 4 p+ p-)";
        body["value"] = report_number(bf.g_diag());
        const auto series = bf.green_entry(0);
        body["series"] = Json{{"value", report_number(series.value)}, {"tail_bound", report_number(series.tail_bound)},
                              {"terms", series.terms}};
        if (o.verify) {
            if (o.width < 2) throw InvalidArgument("--width must be at least 2");
            params["width"] = o.width;
            const auto t = generate(family::BinomialChain{*o.p_plus}, o.width / 2);
            const auto w = walk_greens_absorbed(t);
            const VertexId center = t.g().base_point();
            const double measured = w(center, center);
            body["verification"] = Json{{"method", "frontier-absorbed walk Green's function, chain center"},
                                        {"vertices", t.size()},
                                        {"measured", report_number(measured)},
                                        {"relative_error", report_number(std::abs(measured - bf.g_diag()) / bf.g_diag())}};
        }
    } else if (o.model == "nary") {
        const int n = o.arity.value_or(2);
        const double b = o.b.value_or(2.0);
        params["n"] = n;
        params["b"] = b;
        params["level"] = o.level;
        const auto cf = nary_tree_closed_forms(n, b, o.level);
        body["formula"] = "g_same_level = (Nb+1)/(Nb-1); d_root = 1/((1+Nb) b^(n-1))";
        body["value"] = Json{{"g_same_level", report_number(cf.g_same_level)}, {"d_root", report_number(cf.d_root)}};
        if (o.verify) {
            params["depth"] = o.depth;
            const auto cmp = nary_tree_comparison(n, b, o.level, o.depth);
            body["verification"] = Json{{"depth", cmp.depth},
                                        {"d_root_measured", report_number(cmp.d_root_measured)},
                                        {"d_root_relative_bias", report_number(cmp.d_root_relative_bias)},
                                        {"g_level_measured", report_number(cmp.g_level_measured)},
                                        {"g_level_relative_bias", report_number(cmp.g_level_relative_bias)}};
        }
    } else if (o.model == "continuum") {
        const double x = o.x.value_or(0.0), y = o.y.value_or(0.0);
        params["x"] = x;
        params["y"] = y;
        const auto v = continuum_reference(x, y);
        body["formula"] = "K(x,y) = exp(-|x-y|); d(x,y) = 2 (1 - exp(-|x-y|))";
        body["value"] = Json{{"kernel", report_number(v.kernel)}, {"distance", report_number(v.distance)}};
    } else {
        throw InvalidArgument("unknown model '" + o.model + "' (binomial, nary, continuum)");
    }
    Json r = report_header(c, "oracle", params);
    r["parameters"] = params;
    for (auto& [k, v] : body.items()) r[k] = v;
    emit(c, out, r.dump(2) + "\n");
    return kOk;
}

void add_common(CLI::App& app, Common& c) {
    app.add_option("--threads", c.threads, "Worker cap (0: RESNET_THREADS or hardware)");
    app.add_option("--seed", c.seed, "Random seed");
    app.add_flag("--deterministic", c.deterministic, "Omit timestamps from outputs");
    app.add_option("-o,--output", c.output, "Output file");
    app.add_option("--format", c.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--tol", c.tol, "Solver tolerance")->check(CLI::PositiveNumber);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Effective resistance, Green's functions and random walks on weighted graphs", "resnet"};
    app.require_subcommand(1);
    Common common;
    if (!args.empty()) common.args.assign(args.begin() + 1, args.end());

    GenerateOptions gen;
    auto* g = app.add_subcommand("generate", "Write a generated graph as JSON");
    add_common(*g, common);
    g->add_option("--family", gen.family, "halfline, lattice, binary-tree, nary-tree, comb, bratteli, three-resistor, "
                                          "binomial-chain, random-tree, random-graph")
        ->required();
    g->add_option("--radius", gen.radius, "Truncation radius (required for infinite families)");
    g->add_option("--n", gen.arity, "Tree arity");
    g->add_option("--b", gen.b, "N-ary tree growth factor");
    g->add_option("--dim", gen.dim, "Lattice dimension");
    g->add_option("--growth", gen.growth, "Half-line exponent or binary-tree growth");
    g->add_option("--minus", gen.minus, "Binary-tree scale of digit-0 edges");
    g->add_option("--plus", gen.plus, "Binary-tree scale of digit-1 edges");
    g->add_option("--p-plus", gen.p_plus, "Binomial-chain forward probability");
    g->add_option("--r1", gen.r1, "Three-resistor r1");
    g->add_option("--r2", gen.r2, "Three-resistor r2");
    g->add_option("--r3", gen.r3, "Three-resistor r3");
    g->add_option("--vertices", gen.vertices, "Random graph size");
    g->add_option("--extra", gen.extra, "Random graph extra edges");
    g->add_option("--min-weight", gen.min_weight, "Random conductance lower bound");
    g->add_option("--max-weight", gen.max_weight, "Random conductance upper bound");
    g->add_option("--root-weights", gen.root_weights, "Bratteli root edge weights");
    g->add_option("--block", gen.block, "Bratteli level block, rows ';'-separated, entries ','-separated");
    g->add_option("--scale", gen.scale, "Bratteli per-level scale");

    ResistOptions res;
    auto* r = app.add_subcommand("resist", "Effective resistance by several methods");
    add_common(*r, common);
    r->add_option("graph", res.graph, "Graph JSON file")->required();
    r->add_option("--from", res.from, "Source vertex index");
    r->add_option("--to", res.to, "Target vertex index");
    r->add_option("--method", res.method, "all, M1, M2, M3, M4 or M7");
    r->add_flag("--matrix", res.matrix, "Write the full resistance matrix as CSV");

    std::string check_graph;
    int check_samples = 100;
    auto* ch = app.add_subcommand("check", "Run the identity suite on a graph");
    add_common(*ch, common);
    ch->add_option("graph", check_graph, "Graph JSON file")->required();
    ch->add_option("--samples", check_samples, "Random pairs for the algebra bound")->check(CLI::PositiveNumber);

    WalkOptions walk;
    auto* w = app.add_subcommand("walk", "Sample random walks to the frontier");
    add_common(*w, common);
    w->add_option("graph", walk.graph, "Graph JSON file")->required();
    w->add_option("--start", walk.start, "Start vertex index (default: base point)");
    w->add_option("--samples", walk.samples, "Number of walks");
    w->add_option("--max-steps", walk.max_steps, "Step cap per walk");
    w->add_option("--radius", walk.radius, "Ball radius when the file has no frontier");

    OracleOptions orc;
    auto* o = app.add_subcommand("oracle", "Closed-form reference values");
    add_common(*o, common);
    o->add_option("--model", orc.model, "binomial, nary or continuum")->required();
    o->add_option("--p-plus", orc.p_plus, "Forward probability");
    o->add_option("--n", orc.arity, "Tree arity");
    o->add_option("--b", orc.b, "Tree growth factor");
    o->add_option("--level", orc.level, "Tree level");
    o->add_option("--x", orc.x, "Continuum point x");
    o->add_option("--y", orc.y, "Continuum point y");
    o->add_flag("--verify", orc.verify, "Add a numerical cross-check");
    o->add_option("--width", orc.width, "Chain width for --verify");
    o->add_option("--depth", orc.depth, "Tree depth for --verify");

    try {
        std::vector<std::string> rev(common.args.rbegin(), common.args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (g->parsed()) return cmd_generate(common, gen, out, err);
        if (r->parsed()) return cmd_resist(common, res, out);
        if (ch->parsed()) return cmd_check(common, check_graph, check_samples, out);
        if (w->parsed()) return cmd_walk(common, walk, out);
        if (o->parsed()) return cmd_oracle(common, orc, out);
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return kValidation;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << " (residual " << fmt(e.residual()) << ")\n";
        return kNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kNumerical;
    }
    return kUsage;
}

}  // namespace resnet::cli
