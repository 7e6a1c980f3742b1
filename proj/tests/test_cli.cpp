#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "resnet/error.hpp"
#include "resnet/generators.hpp"
#include "resnet/io.hpp"

namespace fs = std::filesystem;
using resnet::Json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "resnet");
    std::ostringstream out, err;
    const int code = resnet::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("resnet_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(path(name)) << text;
        return path(name);
    }
    static Json read_json(const std::string& p) {
        std::ifstream in(p);
        return Json::parse(in);
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, GenerateHalfLine) {
    auto r = run({"generate", "--family", "halfline", "--radius", "5", "-o", path("g.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("vertices 6 edges 5"), std::string::npos);
    auto doc = read_json(path("g.json"));
    EXPECT_EQ(doc["vertices"], 6);
    EXPECT_EQ(doc["frontier"], Json::array({5}));
    EXPECT_EQ(doc["meta"]["seed"], 1);
}

TEST_F(Cli, GenerateTreeAndComb) {
    auto r = run({"generate", "--family", "nary-tree", "--n", "2", "--b", "2", "--radius", "3", "-o", path("t.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(read_json(path("t.json"))["vertices"], 15);
    r = run({"generate", "--family", "comb", "--radius", "2", "-o", path("c.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(read_json(path("c.json"))["vertices"], 6);
}

TEST_F(Cli, GenerateErrors) {
    EXPECT_EQ(run({"generate", "--family", "halfline"}).code, 1);
    EXPECT_EQ(run({"generate", "--family", "nope", "--radius", "2"}).code, 1);
    EXPECT_EQ(run({"generate"}).code, 1);
    EXPECT_EQ(run({}).code, 1);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(Cli, ResistThreeResistorAndSingleEdge) {
    ASSERT_EQ(run({"generate", "--family", "three-resistor", "-o", path("f.json")}).code, 0);
    auto r = run({"resist", path("f.json"), "--from", "0", "--to", "4", "--deterministic"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto doc = Json::parse(r.out);
    for (const char* m : {"M1", "M2", "M3", "M4", "M7"}) EXPECT_NEAR(doc["values"][m].get<double>(), 1.5, 1e-9) << m;
    EXPECT_LE(doc["max_disagreement"].get<double>(), 1e-9);
    EXPECT_FALSE(doc.contains("timestamp"));

    auto edge = write("e.json", R"({"vertices": 2, "base_point": 0, "edges": [[0, 1, 4]]})");
    r = run({"resist", edge, "--from", "0", "--to", "1", "--method", "M3", "--format", "csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "method,value\nM3,0.25\n");
    EXPECT_EQ(run({"resist", edge, "--from", "0", "--to", "1", "--method", "M5"}).code, 1);
    EXPECT_EQ(run({"resist", edge, "--from", "0", "--to", "7"}).code, 1);
}

TEST_F(Cli, ResistMatrixCsv) {
    auto p3 = write("p.json", R"({"vertices": 3, "base_point": 0, "edges": [[0, 1, 1], [1, 2, 1]]})");
    auto r = run({"resist", p3, "--matrix"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "label,0,1,2\n0,0,1,2\n1,1,0,1\n2,2,1,0\n");
}

TEST_F(Cli, ResistRejectsDisconnected) {
    auto g = write("d.json", R"({"vertices": 4, "base_point": 0, "edges": [[0, 1, 1], [2, 3, 1]]})");
    auto r = run({"resist", g, "--from", "0", "--to", "1"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("validation"), std::string::npos);
}

TEST_F(Cli, CheckPasses) {
    auto k3 = write("k3.json", R"({"vertices": 3, "base_point": 0, "edges": [[0, 1, 1], [1, 2, 1], [0, 2, 1]]})");
    auto r = run({"check", k3, "-o", path("report.json")});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("all checks passed"), std::string::npos);
    auto rep = read_json(path("report.json"));
    EXPECT_TRUE(rep["passed"].get<bool>());
    EXPECT_EQ(rep["checks"].size(), 5u);

    ASSERT_EQ(run({"generate", "--family", "random-tree", "--vertices", "40", "--seed", "7", "-o", path("rt.json")}).code, 0);
    r = run({"check", path("rt.json"), "--seed", "7"});
    EXPECT_EQ(r.code, 0) << r.out;
}

TEST_F(Cli, CheckRejectsAsymmetricFile) {
    auto bad = write("bad.json", R"({"vertices": 2, "base_point": 0, "edges": [[0, 1, 1], [1, 0, 2]]})");
    EXPECT_EQ(run({"check", bad}).code, 2);
    auto junk = write("junk.json", "{not json");
    EXPECT_EQ(run({"check", junk}).code, 2);
    EXPECT_EQ(run({"check", path("missing.json")}).code, 1);
}

TEST_F(Cli, WalkPathMiddle) {
    auto p3 = write("p.json", R"({"vertices": 3, "base_point": 1, "edges": [[0, 1, 1], [1, 2, 1]], "frontier": [0, 2]})");
    auto r = run({"walk", p3, "--samples", "10000", "--seed", "1", "--deterministic"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto doc = Json::parse(r.out);
    ASSERT_EQ(doc["hits"].size(), 2u);
    for (const auto& h : doc["hits"]) {
        EXPECT_NEAR(h["weight"].get<double>(), 0.5, 0.03);
        EXPECT_EQ(h["exact"].get<double>(), 0.5);
        EXPECT_LE(std::abs(h["z"].get<double>()), 4.0);
    }
    EXPECT_EQ(doc["unabsorbed"], 0);
}

TEST_F(Cli, WalkHalfLineAndTree) {
    ASSERT_EQ(run({"generate", "--family", "halfline", "--radius", "6", "-o", path("h.json")}).code, 0);
    auto doc = Json::parse(run({"walk", path("h.json"), "--samples", "500"}).out);
    ASSERT_EQ(doc["hits"].size(), 1u);
    EXPECT_EQ(doc["hits"][0]["weight"].get<double>(), 1.0);

    ASSERT_EQ(run({"generate", "--family", "binary-tree", "--radius", "5", "-o", path("b.json")}).code, 0);
    doc = Json::parse(run({"walk", path("b.json"), "--samples", "20000", "--threads", "4"}).out);
    ASSERT_EQ(doc["hits"].size(), 32u);
    for (const auto& h : doc["hits"]) EXPECT_NEAR(h["exact"].get<double>(), 1.0 / 32.0, 1e-12);
    EXPECT_LE(doc["max_abs_z"].get<double>(), 4.0);
}

TEST_F(Cli, WalkNeedsFrontier) {
    auto k3 = write("k3.json", R"({"vertices": 3, "base_point": 0, "edges": [[0, 1, 1], [1, 2, 1], [0, 2, 1]]})");
    EXPECT_EQ(run({"walk", k3}).code, 1);
}

TEST_F(Cli, SeededOutputIsReproducible) {
    ASSERT_EQ(run({"generate", "--family", "binary-tree", "--radius", "4", "-o", path("b.json")}).code, 0);
    const std::vector<std::string> cmd{"walk", path("b.json"), "--samples", "3000", "--seed", "9", "--deterministic"};
    auto a = run(cmd), b = run(cmd);
    EXPECT_EQ(a.out, b.out);
    auto c = run({"generate", "--family", "random-graph", "--vertices", "20", "--seed", "4", "--deterministic"});
    auto d = run({"generate", "--family", "random-graph", "--vertices", "20", "--seed", "4", "--deterministic"});
    EXPECT_EQ(c.out, d.out);
}

TEST_F(Cli, OracleModels) {
    auto r = run({"oracle", "--model", "binomial", "--p-plus", "0.6666667", "--verify"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto doc = Json::parse(r.out);
    EXPECT_NEAR(doc["value"].get<double>(), 3.0, 1e-5);
    EXPECT_LE(doc["verification"]["relative_error"].get<double>(), 0.01);

    doc = Json::parse(run({"oracle", "--model", "nary", "--n", "2", "--b", "2"}).out);
    EXPECT_NEAR(doc["value"]["g_same_level"].get<double>(), 5.0 / 3.0, 1e-11);
    EXPECT_NEAR(doc["value"]["d_root"].get<double>(), 0.2, 1e-12);

    doc = Json::parse(run({"oracle", "--model", "continuum", "--x", "0", "--y", "0"}).out);
    EXPECT_EQ(doc["value"]["distance"].get<double>(), 0.0);

    EXPECT_EQ(run({"oracle", "--model", "binomial", "--p-plus", "0.5"}).code, 1);
    EXPECT_EQ(run({"oracle", "--model", "binomial"}).code, 1);
    EXPECT_EQ(run({"oracle", "--model", "other"}).code, 1);
}

TEST_F(Cli, ReportNumbersHaveTwelveDigits) {
    EXPECT_EQ(resnet::round_significant(1.0 / 3.0), 0.333333333333);
    EXPECT_EQ(resnet::report_number(2.0 / 3.0).dump(), "0.666666666667");
    EXPECT_TRUE(resnet::report_number(INFINITY).is_null());
}

TEST(Io, GraphRoundTrip) {
    auto t = resnet::generate(resnet::family::Lattice{2}, 3);
    std::stringstream s;
    resnet::save_graph(s, t);
    auto back = resnet::load_graph(s);
    ASSERT_EQ(back.size(), t.size());
    EXPECT_EQ(back.frontier, t.frontier);
    EXPECT_EQ(back.radius, t.radius);
    EXPECT_EQ(back.g().base_point(), t.g().base_point());
    EXPECT_EQ(back.g().labels(), t.g().labels());
    auto a = t.g().edges(), b = back.g().edges();
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].from, b[i].from);
        EXPECT_EQ(a[i].to, b[i].to);
        EXPECT_EQ(a[i].conductance, b[i].conductance);
    }
}

TEST(Io, MalformedDocuments) {
    for (const char* text : {R"([1, 2])", R"({"vertices": 0, "base_point": 0, "edges": []})",
                             R"({"vertices": 2, "base_point": 5, "edges": [[0, 1, 1]]})",
                             R"({"vertices": 2, "base_point": 0, "edges": [[0, 1]]})",
                             R"({"vertices": 2, "base_point": 0, "edges": [[0, 1, 1], [0, 1, 1]]})",
                             R"({"vertices": 2, "base_point": 0, "edges": [[0, 1, -1]]})",
                             R"({"vertices": 2, "base_point": 0, "edges": [[0, 1, 1]], "frontier": [0]})"}) {
        std::stringstream s(text);
        EXPECT_THROW(resnet::load_graph(s), resnet::ValidationError) << text;
    }
}
