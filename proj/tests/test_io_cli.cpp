// File formats and the command-line front end: round trips, error objects and
// exit codes, and byte-identical report payloads across thread counts.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "selberg/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace selberg;

namespace {

std::string tmp_path(const std::string& name) {
    return std::string("/tmp/selberg_test_") + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args, std::string* out = nullptr) {
    const char* bin = std::getenv("SELBERG_LAB_BIN");
    REQUIRE(bin != nullptr);
    const std::string cmd = std::string(bin) + " " + args + " > " + tmp_path("cli_out.txt") + " 2>&1";
    const int rc = std::system(cmd.c_str());
    if (out) *out = slurp(tmp_path("cli_out.txt"));
    return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("generator file round trip") {
    FuchsianGroup B = FuchsianGroup::bolza();
    GeneratorFile gf;
    gf.genus = 2;
    for (int k = 0; k < 4; ++k) gf.generators.push_back(B.generators()[k]);
    const std::string path = tmp_path("gens.json");
    save_generators(gf, path);
    GeneratorFile back = load_generators(path);
    CHECK(back.genus == 2);
    REQUIRE(back.generators.size() == 4);
    FuchsianGroup G = FuchsianGroup::from_generators(back.generators, back.genus);
    CHECK(G.enumerate_ball(G.base_point(), 3.06).size() == 8);

    // malformed inputs
    std::ofstream(tmp_path("bad.json")) << "{\"genus\": 2}";
    CHECK_THROWS_AS(load_generators(tmp_path("bad.json")), InputError);
    std::ofstream(tmp_path("bad2.json")) << "not json";
    CHECK_THROWS_AS(load_generators(tmp_path("bad2.json")), InputError);
}

TEST_CASE("spectrum file round trip, json and csv") {
    SpectrumFile sf;
    sf.eigenvalues = {0.0, 0.31, 0.31, 2.5, 7.25};
    sf.lambda_cut = 40.0;
    sf.surface_id = "demo";
    sf.source = "synthetic";
    for (const char* name : {"spec.json", "spec.csv"}) {
        const std::string path = tmp_path(name);
        save_spectrum(sf, path);
        SpectrumFile back = load_spectrum(path);
        REQUIRE(back.eigenvalues.size() == sf.eigenvalues.size());
        for (std::size_t i = 0; i < sf.eigenvalues.size(); ++i)
            CHECK(back.eigenvalues[i] == doctest::Approx(sf.eigenvalues[i]).epsilon(1e-15));
        CHECK(back.lambda_cut == doctest::Approx(40.0));
    }
    std::ofstream(tmp_path("unsorted.csv")) << "0.0\n2.0\n1.0\n";
    CHECK_THROWS_AS(load_spectrum(tmp_path("unsorted.csv")), InputError);
}

TEST_CASE("cli: transforms certifies the dual path") {
    std::string out;
    const int rc = run_cli("transforms --family H --window 0.5,5 --t 1 --out " +
                               tmp_path("tr.json"),
                           &out);
    CHECK(rc == 0);
    Json j;
    std::ifstream(tmp_path("tr.json")) >> j;
    const auto& part = j["payload"]["results"]["parts"][0];
    CHECK(part["family"] == "H");
    CHECK(part["dual_path_max_delta"].get<double>() < 1e-7);
    // g(0) = (beta - alpha)/pi
    const double alpha = 0.5, beta = std::sqrt(4.75);
    CHECK(part["g0"].get<double>() == doctest::Approx((beta - alpha) / M_PI).epsilon(1e-12));
}

TEST_CASE("cli: family B with b > 1 is rejected with a machine-readable error") {
    std::string out;
    const int rc = run_cli("transforms --family B --window 0,2 --t 1 --out " +
                               tmp_path("no.json"),
                           &out);
    CHECK(rc == 3);
    Json err = Json::parse(out);
    CHECK(err.contains("error"));
    CHECK(err["error"]["type"] == "input");
}

TEST_CASE("cli: missing seed on Monte-Carlo commands is a parse error") {
    std::string out;
    const int rc = run_cli("trace --surface builtin:bolza --family H --window 0.5,5 --t 0.8",
                           &out);
    CHECK(rc == 3);
}

TEST_CASE("cli: trace payload is byte-identical across thread counts") {
    const std::string out1 = tmp_path("trace1.json");
    const std::string out3 = tmp_path("trace3.json");
    const std::string common =
        "trace --surface builtin:bolza --family H --window 0.5,5 --t 0.8 "
        "--samples 400 --seed 99 --L 1.2 --out ";
    CHECK(run_cli(common + out1 + " --threads 1") == 0);
    CHECK(run_cli(common + out3 + " --threads 3") == 0);
    Json j1, j3;
    std::ifstream(out1) >> j1;
    std::ifstream(out3) >> j3;
    // payloads agree byte for byte (the worker cap is launch configuration
    // and lives outside the payload)
    CHECK(j1["payload"].dump() == j3["payload"].dump());
    // and an identical rerun reproduces the payload exactly, meta aside
    const std::string out1b = tmp_path("trace1b.json");
    CHECK(run_cli(common + out1b + " --threads 1") == 0);
    Json j1b;
    std::ifstream(out1b) >> j1b;
    CHECK(j1["payload"].dump() == j1b["payload"].dump());
}

TEST_CASE("cli: count and bs commands produce reports") {
    // synthetic Weyl spectrum file
    SpectrumFile sf;
    const double g = 64.0;
    for (int j = 0; j < 2000; ++j) sf.eigenvalues.push_back(j / g);
    sf.lambda_cut = sf.eigenvalues.back();
    sf.surface_id = "weyl";
    save_spectrum(sf, tmp_path("weyl.json"));

    CHECK(run_cli("count --spectrum " + tmp_path("weyl.json") + " --g-proxy 64 --out " +
                  tmp_path("count.json")) == 0);
    Json jc;
    std::ifstream(tmp_path("count.json")) >> jc;
    long jth_rows = 0;
    for (const auto& row : jc["payload"]["results"]["rows"])
        if (row["kind"] == "jth") {
            CHECK(row["pass"].get<bool>());
            ++jth_rows;
        }
    CHECK(jth_rows > 0);

    CHECK(run_cli("bs --surface builtin:bolza --L-list 1.0,1.6 --samples 1500 --seed 5 "
                  "--out " + tmp_path("bs.json")) == 0);
    Json jb;
    std::ifstream(tmp_path("bs.json")) >> jb;
    const auto& thin = jb["payload"]["results"]["thin_part"];
    REQUIRE(thin.size() == 2);
    CHECK(thin[0]["volume"].get<double>() == 0.0);
    CHECK(thin[0]["certified_zero"].get<bool>());
    CHECK(thin[1]["volume"].get<double>() > 0.0);
    CHECK(thin[1]["bs_volume_bound"].get<double>() >=
          thin[1]["volume"].get<double>() - 3.0 * thin[1]["sigma"].get<double>());

    // csv projection
    CHECK(run_cli("count --spectrum " + tmp_path("weyl.json") + " --g-proxy 64 "
                  "--format csv --out " + tmp_path("count.csv")) == 0);
    const std::string csv = slurp(tmp_path("count.csv"));
    CHECK(csv.find("kind,p1,p2,observed") == 0);
}

TEST_CASE("cli: auto family splits a straddling window at 3/4") {
    std::string out;
    const int rc = run_cli("transforms --family auto --window 0.2,5 --t 1 --out " +
                               tmp_path("auto.json"),
                           &out);
    CHECK(rc == 0);
    Json j;
    std::ifstream(tmp_path("auto.json")) >> j;
    const auto& parts = j["payload"]["results"]["parts"];
    REQUIRE(parts.size() == 2);
    CHECK(parts[0]["family"] == "B");
    CHECK(parts[0]["window"][1].get<double>() == doctest::Approx(0.75));
    CHECK(parts[1]["family"] == "H");
    CHECK(parts[1]["window"][0].get<double>() == doctest::Approx(0.75));
}

TEST_CASE("cli: surface from a generator file") {
    FuchsianGroup B = FuchsianGroup::bolza();
    GeneratorFile gf;
    gf.genus = 2;
    for (int k = 0; k < 4; ++k) gf.generators.push_back(B.generators()[k]);
    save_generators(gf, tmp_path("surf.json"));
    const int rc = run_cli("bs --surface " + tmp_path("surf.json") +
                           " --L-list 1.0 --samples 400 --seed 9 --out " +
                           tmp_path("bs2.json"));
    CHECK(rc == 0);
    Json j;
    std::ifstream(tmp_path("bs2.json")) >> j;
    CHECK(j["payload"]["results"]["thin_part"][0]["certified_zero"].get<bool>());
}

TEST_CASE("report payload bytes are stable for equal content") {
    Json config{{"command", "demo"}, {"seed", 7}};
    Json results{{"x", 0.1234567890123}, {"flag", true}};
    CHECK(payload_bytes(config, results) == payload_bytes(config, results));
}
