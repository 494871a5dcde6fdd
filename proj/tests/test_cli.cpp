#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "../tools/cli.hpp"
#include "biharm/io.hpp"
#include "biharm/params.hpp"

namespace fs = std::filesystem;
using biharm::cli::run;

namespace {

struct Outcome {
    int code;
    std::string out, err;
};

Outcome call(std::vector<std::string> args) {
    std::ostringstream o, e;
    const int c = run(args, o, e);
    return {c, o.str(), e.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / "biharm_cli_tests";
    fs::create_directories(d);
    return d / name;
}

}  // namespace

TEST_CASE("solve writes profile, summary and manifests") {
    const std::string pre = scratch("solve4").string();
    const auto r = call({"solve", "--n", "8", "--a", "4.0", "--out", pre, "--samples", "100"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("period 3.17033307902", 0) == 0);
    for (const char* ext : {".csv", ".json"}) {
        CHECK(fs::exists(pre + ext));
        CHECK(fs::exists(pre + ext + ".manifest.json"));
    }
    const auto t = biharm::read_csv(pre + ".csv");
    CHECK(t.header == std::vector<std::string>{"t", "v", "v1", "v2", "v3", "energy"});
    CHECK(t.rows.size() == 101);
    CHECK(std::stod(t.rows.front()[1]) == 4.0);
    CHECK(std::stod(t.rows.back()[1]) == doctest::Approx(4.0).epsilon(1e-9));
    const auto j = biharm::read_json(pre + ".json");
    CHECK(j.at("period").get<double>() == doctest::Approx(3.170333079022).epsilon(1e-11));
    const auto m = biharm::read_json(pre + ".csv.manifest.json");
    CHECK(m.at("command") == "solve");
    CHECK(m.at("artifact_version") == biharm::kArtifactVersion);
    CHECK(m.at("parameters").at("a").get<double>() == 4.0);
}

TEST_CASE("usage errors exit 64") {
    CHECK(call({}).code == 64);
    CHECK(call({"bogus"}).code == 64);
    CHECK(call({"solve", "--n", "8"}).code == 64);
    CHECK(call({"solve", "--n", "8", "--a", "9.0"}).code == 64);
    CHECK(call({"solve", "--n", "8", "--a", "0"}).code == 64);
    CHECK(call({"solve", "--n", "4", "--a", "1"}).code == 64);
    CHECK(call({"solve", "--A", "2", "--B", "2", "--p", "3", "--a", "0.5"}).code == 64);
    CHECK(call({"solve", "--n", "8", "--A", "20", "--a", "1"}).code == 64);
    CHECK(call({"solve", "--n", "8", "--a", "4", "--samples", "1"}).code == 64);
    CHECK(call({"sweep", "--n", "8", "--a-min", "1", "--a-max", "2", "--steps", "0"}).code == 64);
    CHECK(call({"sweep", "--n", "8", "--a-min", "1", "--a-max", "2", "--steps", "2", "--grid", "log"}).code == 64);
    CHECK(call({"homoclinic", "--A", "20", "--B", "64", "--p", "3"}).code == 64);
    CHECK(call({"reconstruct", "--n", "8", "--a", "4", "--r-min", "0"}).code == 64);
    CHECK(call({"verify", "--n", "8", "--suite", "nope"}).code == 64);
    CHECK(call({"solve", "--help"}).code == 0);
}

TEST_CASE("sweep table round-trips") {
    const std::string path = scratch("sweep.csv").string();
    const double a0 = 8.0;
    const auto r = call({"sweep", "--n", "8", "--a-min", "2", "--a-max", std::to_string(0.999 * a0), "--steps", "4",
                         "--grid", "geometric", "--threads", "2", "--out", path});
    REQUIRE(r.code == 0);
    const auto t = biharm::read_csv(path);
    CHECK(t.header == std::vector<std::string>{"a", "beta_star", "period", "energy", "v_max", "status"});
    const auto rows = biharm::parse_family_table(t);
    REQUIRE(rows.size() == 4);
    CHECK(rows.front().a == 2.0);
    CHECK(rows.back().period == doctest::Approx(2.7823).epsilon(1e-4));
    for (const auto& row : rows) CHECK(row.ok());
    // Values survive a write/read cycle bit for bit.
    const std::string again = scratch("sweep_again.csv").string();
    biharm::write_csv(again, biharm::family_table(rows));
    CHECK(slurp(again) == slurp(path));
    CHECK(fs::exists(path + ".manifest.json"));
}

TEST_CASE("homoclinic output") {
    const std::string pre = scratch("hom").string();
    const auto r = call({"homoclinic", "--n", "8", "--t-min", "-5", "--t-max", "5", "--samples", "1001", "--out", pre});
    REQUIRE(r.code == 0);
    const auto j = biharm::read_json(pre + ".json");
    CHECK(j.at("max_residual").get<double>() <= 1e-9);
    CHECK(j.at("max_abs_energy").get<double>() <= 1e-10 * 1024);
    const double cn8 = static_cast<double>(*biharm::make_params(8).cn);
    CHECK(j.at("peak").get<double>() == doctest::Approx(cn8 / 4).epsilon(1e-14));
    const auto t = biharm::read_csv(pre + ".csv");
    REQUIRE(t.rows.size() == 1001);
    CHECK(std::stod(t.rows[500][0]) == 0.0);
    CHECK(std::stod(t.rows[500][1]) == doctest::Approx(cn8 / 4).epsilon(1e-14));
    CHECK(std::fabs(std::stod(t.rows[500][2])) <= 1e-15);
}

TEST_CASE("reconstruct output") {
    const std::string pre = scratch("rec").string();
    const auto r = call({"reconstruct", "--n", "8", "--a", "4", "--L", "0.3", "--r-min", "1e-3", "--r-max", "1e3",
                         "--samples", "200", "--out", pre});
    REQUIRE(r.code == 0);
    const auto j = biharm::read_json(pre + ".json");
    CHECK(j.at("max_residual").get<double>() <= 1e-6);
    const double vmax = j.at("v_max").get<double>();
    const auto t = biharm::read_csv(pre + ".csv");
    REQUIRE(t.rows.size() == 200);
    for (const auto& row : t.rows) {
        const double us = std::stod(row[2]);
        CHECK(us >= 4.0 - 1e-9);
        CHECK(us <= vmax + 1e-9);
    }
}

TEST_CASE("verify suites") {
    auto r = call({"verify", "--n", "8", "--suite", "phase"});
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS") != std::string::npos);
    CHECK(r.out.find("FAIL") == std::string::npos);
    r = call({"verify", "--n", "5", "--suite", "oracle"});
    CHECK(r.code == 0);
    r = call({"verify", "--n", "8", "--suite", "all"});
    CHECK_MESSAGE(r.code == 0, r.out);
}

TEST_CASE("replay reproduces outputs byte for byte") {
    const std::string pre = scratch("replayed").string();
    REQUIRE(call({"solve", "--n", "6", "--a", "1.0", "--out", pre}).code == 0);
    const std::string csv = slurp(pre + ".csv"), js = slurp(pre + ".json");
    std::remove((pre + ".csv").c_str());
    std::remove((pre + ".json").c_str());
    REQUIRE(call({"replay", pre + ".csv.manifest.json"}).code == 0);
    CHECK(slurp(pre + ".csv") == csv);
    CHECK(slurp(pre + ".json") == js);
    CHECK(call({"replay", scratch("missing.json").string()}).code != 0);
}
