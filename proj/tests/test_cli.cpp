// End-to-end checks of the command-line tool.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <sys/wait.h>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gblab/families.hpp"
#include "gblab/graph_io.hpp"
#include "gblab/operators.hpp"
#include "gblab/parabolicity.hpp"

using namespace gblab;
using nlohmann::json;

namespace {

const std::string cli = GBLAB_CLI_PATH;

struct TempDir {
    std::string path;
    TempDir() {
        char tmpl[] = "/tmp/gblab_cli_XXXXXX";
        path = mkdtemp(tmpl);
    }
    ~TempDir() {
        const int rc = std::system(("rm -rf " + path).c_str());
        (void)rc;
    }
    std::string file(const std::string& name) const { return path + "/" + name; }
};

int run(const std::string& args, const std::string& out_file = "/dev/null") {
    const int rc = std::system((cli + " " + args + " > " + out_file + " 2>&1").c_str());
    return WEXITSTATUS(rc);
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    json j;
    in >> j;
    return j;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("witness export: triadic ratio field") {
    TempDir tmp;
    const std::string out = tmp.file("w.json");
    CHECK(run("witness --kind triadic --m 6 --out " + out) == 0);
    json j = read_json(out);
    CHECK(j["kind"] == "triadic_witness");
    CHECK(std::abs(j["ratio"].get<double>() - 0.125) < 1e-12);
    CHECK(j["u_norm_sq"].get<double>() == 2.0);

    // the exported witness re-evaluates to the same diagnostics
    WeightedGraph g = graph_from_json(j["graph"]);
    Cochain1 phi = cochain1_from_json(g, j["witness"]);
    Cochain0 dphi = delta(phi);
    CHECK(std::abs(inner0(dphi, dphi) - j["delta_norm_sq"].get<double>()) < 1e-14);
}

TEST_CASE("witness on a too-shallow truncation reports the required depth") {
    TempDir tmp;
    const std::string log = tmp.file("err.txt");
    CHECK(run("witness --kind triadic --m 6 --radius 4 --out " + tmp.file("w.json"), log) == 1);
    const std::string msg = read_text(log);
    CHECK(msg.find("depth") != std::string::npos);
}

TEST_CASE("witness export: grid kernel is divergence-free, tree kernel is empty") {
    TempDir tmp;
    const std::string out = tmp.file("k.json");
    CHECK(run("witness --kind kernel --family grid2 --radius 5 --k-radius 1 --out " + out) == 0);
    json j = read_json(out);
    CHECK(j["kind"] == "delta_kernel");
    CHECK(j["dimension"].get<Index>() >= 1);
    CHECK(j["max_delta_residual"].get<double>() < 1e-12);
    CHECK(j["basis"].size() == j["dimension"].get<std::size_t>());

    const std::string out2 = tmp.file("k0.json");
    CHECK(run("witness --kind kernel --family triadic --radius 5 --out " + out2) == 0);
    json j2 = read_json(out2);
    CHECK(j2["dimension"].get<Index>() == 0);
    CHECK(j2["basis"].empty());
}

TEST_CASE("probe: kernel sweep fails on grids, csv rows re-check from the json report") {
    TempDir tmp;
    CHECK(run("probe --probe kernel --family grid2 --radii 4..5 --k-radius 1 --out " +
              tmp.file("kern")) == 0);
    const std::string csv = read_text(tmp.file("kern.csv"));
    CHECK(csv.find("FAIL") != std::string::npos);

    CHECK(run("probe --family triadic --radii 4..6 --out " + tmp.file("tri")) == 0);
    json report = read_json(tmp.file("tri.json"));
    for (const auto& row : report["rows"]) {
        const Index radius = row["radius"].get<Index>();
        FamilySpec spec;
        spec.family = "triadic";
        spec.radius = radius;
        auto [g, o] = make_family(spec);
        Section w{cochain0_from_json(g, row["witness_f"]), cochain1_from_json(g, row["witness_phi"])};
        Section dw = gauss_bonnet(w);
        double trusted = 0.0;
        for (Index x = 0; x < g.vertex_count(); ++x)
            if (!g.is_frontier(x)) trusted += g.vertex_weight(x) * dw.f.values(x) * dw.f.values(x);
        for (Index e = 0; e < g.edge_count(); ++e)
            if (!g.edge_touches_frontier(e))
                trusted += g.edge_weight(e) * dw.phi.values(e) * dw.phi.values(e);
        // the witness is normalized against the U-seminorm, so |D w| itself
        // reproduces the row's constant
        CHECK(std::abs(std::sqrt(trusted) - row["C"].get<double>()) <
              1e-8 * (1.0 + row["C"].get<double>()));
    }
}

TEST_CASE("probe: capacity sweep separates Z from Z^3") {
    TempDir tmp;
    CHECK(run("probe --probe capacity --family path --radii 2,8 --out " + tmp.file("z")) == 0);
    CHECK(read_text(tmp.file("z.csv")).find("FAIL") != std::string::npos);

    CHECK(run("probe --probe capacity --family grid3 --radii 4,6 --out " + tmp.file("z3")) == 0);
    CHECK(read_text(tmp.file("z3.csv")).find("PASS") != std::string::npos);
}

TEST_CASE("identities command and malformed inputs") {
    CHECK(run("identities --family grid2 --radius 3 --trials 10") == 0);

    TempDir tmp;
    // r(-e) != r(e) can only be smuggled in as a reversed duplicate; rejected
    std::ofstream bad(tmp.file("bad.json"));
    bad << R"({"vertices":[{"id":0,"c":1.0},{"id":1,"c":1.0}],)"
        << R"("edges":[{"u":0,"v":1,"r":1.0},{"u":1,"v":0,"r":2.0}]})";
    bad.close();
    CHECK(run("identities --graph-file " + tmp.file("bad.json")) != 0);

    // structurally empty file is a parse error (exit 2)
    std::ofstream empty(tmp.file("empty.json"));
    empty << "{}";
    empty.close();
    CHECK(run("identities --graph-file " + tmp.file("empty.json")) == 2);
}

TEST_CASE("electrical weight scheme reaches the identity suite through a config") {
    TempDir tmp;
    std::ofstream cfg(tmp.file("elec.json"));
    cfg << R"({"family": {"name": "grid2", "radius": 3, "weights": "electrical"}})";
    cfg.close();
    CHECK(run("identities --config " + tmp.file("elec.json") + " --trials 10") == 0);
}

TEST_CASE("config file with flag overrides") {
    TempDir tmp;
    std::ofstream cfg(tmp.file("cfg.json"));
    cfg << R"({"family": {"name": "triadic", "radius": 4},
               "probe": "nonparabolicity", "radii": "4..5", "u_rule": "boundary_edge"})";
    cfg.close();
    const std::string out = tmp.file("cfgrun");
    CHECK(run("probe --config " + tmp.file("cfg.json") + " --out " + out) == 0);
    const std::string csv = read_text(out + ".csv");
    CHECK(csv.find("triadic,4,") != std::string::npos);
    CHECK(csv.find("triadic,5,") != std::string::npos);

    CHECK(run("probe --config " + tmp.file("nonexistent.json")) == 2);
}

TEST_CASE("threads come from the environment when not given") {
    TempDir tmp;
    const int rc = std::system(("GBLAB_THREADS=2 " + cli + " probe --family triadic --radii 4..5 --out " +
                                tmp.file("env") + " > /dev/null 2>&1")
                                   .c_str());
    CHECK(WEXITSTATUS(rc) == 0);
    CHECK(!read_text(tmp.file("env.csv")).empty());
}
