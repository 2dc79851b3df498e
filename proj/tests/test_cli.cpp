#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "doctest.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = epr::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
        rows.push_back(cells);
    }
    return rows;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("eprsim_test_" + std::to_string(std::rand()) + "_" +
                                            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("correlate reference rows") {
    const Result r = run({"correlate", "--angles-deg", "0,60"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"theta_ab_deg", "E_entangled", "E_disentangled", "P_pp_E", "P_pm_E",
                                              "P_pp_D", "P_pm_D"});
    CHECK(rows[1] == std::vector<std::string>{"0", "-1", "-0.5", "0", "0.5", "0.125", "0.375"});
    CHECK(std::stod(rows[2][1]) == doctest::Approx(-0.5));
    CHECK(std::stod(rows[2][2]) == doctest::Approx(-0.25));
    CHECK(std::stod(rows[2][4]) == doctest::Approx(0.375));
    CHECK(std::stod(rows[2][6]) == doctest::Approx(0.3125));
}

TEST_CASE("correlate json output") {
    const Result r = run({"correlate", "--geometry", "sphere", "--angles-deg", "90", "--format", "json"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 1);
    CHECK(j[0]["theta_ab_deg"].get<double>() == 90.0);
    CHECK(std::abs(j[0]["E_disentangled"].get<double>()) < 1e-12);
}

TEST_CASE("chsh defaults") {
    const Result r = run({"chsh", "--lambda", "0.5"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].back() == "S");
    CHECK(rows[1][0] == "entangled");
    CHECK(std::stod(rows[1].back()) == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-8));
    CHECK(rows[2][0] == "disentangled");
    CHECK(std::stod(rows[2].back()) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
    CHECK(rows[3][0] == "mixture");
    CHECK(std::stod(rows[3].back()) == doctest::Approx(2.121320).epsilon(1e-6));
}

TEST_CASE("predict visibility ratio") {
    const Result r = run({"predict", "--experiment", "gisin", "--angles-deg", "0,180"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 3);
    const double ve = std::stod(rows[2][3]) - std::stod(rows[1][3]);
    const double vd = std::stod(rows[2][4]) - std::stod(rows[1][4]);
    CHECK(ve == doctest::Approx(2.0 * vd));
}

TEST_CASE("simulate is byte-identical across runs and shard counts") {
    const std::vector<std::string> base = {"simulate", "--model", "mixture", "--lambda", "0.3", "--trials", "50000",
                                           "--seed", "11", "--angles-deg", "0,45,90"};
    auto with = [&](std::vector<std::string> extra) {
        auto a = base;
        a.insert(a.end(), extra.begin(), extra.end());
        return run(a);
    };
    const Result a = with({});
    const Result b = with({});
    const Result c = with({"--shards", "4"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
    CHECK(a.out != with({"--seed", "12"}).out);
}

TEST_CASE("synth then fit recovers lambda") {
    TempDir dir;
    const std::string data = (dir.path / "d.csv").string();
    REQUIRE(run({"synth", "--experiment", "gisin", "--model", "mixture", "--lambda", "0.62", "--counts", "100000",
                 "--seed", "3", "-o", data})
                .code == 0);
    const std::string first = slurp(data);
    REQUIRE(run({"synth", "--experiment", "gisin", "--model", "mixture", "--lambda", "0.62", "--counts", "100000",
                 "--seed", "3", "-o", data})
                .code == 0);
    CHECK(first == slurp(data));

    const Result r = run({"fit", "--experiment", "gisin", "--input", data});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(std::abs(j["lambda_hat"].get<double>() - 0.62) < 0.05);
    CHECK(j["background_hat"].get<double>() == 0.0);
    CHECK(j.contains("uncertainties"));
}

TEST_CASE("validation failures exit 2 and name the field") {
    TempDir dir;
    auto expect = [](const Result& r, const std::string& field) {
        CHECK(r.code == 2);
        CHECK(r.err.find(field) != std::string::npos);
    };
    expect(run({"simulate", "--trials", "0"}), "trials");
    expect(run({"simulate", "--trials", "1"}), "trials");
    expect(run({"simulate", "--shards", "0"}), "shards");
    expect(run({"correlate", "--geometry", "cube"}), "geometry");
    expect(run({"chsh", "--model", "mixture"}), "lambda");
    expect(run({"chsh", "--model", "mixture", "--lambda", "1.5"}), "lambda");
    expect(run({"predict", "--experiment", "nope"}), "experiment");
    expect(run({"predict", "--experiment", "kim", "--branch", "x"}), "branch");
    expect(run({"correlate", "--format", "xml"}), "format");
    expect(run({"fit", "--experiment", "gisin", "--input", (dir.path / "missing.csv").string()}), "input");

    const fs::path two = dir.path / "two.csv";
    std::ofstream(two) << "x_rad,rate,std_err\n0,0.1,0.01\n1,0.1,0.01\n";
    expect(run({"fit", "--experiment", "gisin", "--input", two.string()}), "input");

    CHECK(run({"bogus"}).code == 2);
    CHECK(run({}).code == 2);
}

TEST_CASE("non-identifiable fit exits 3") {
    TempDir dir;
    const std::string data = (dir.path / "d.csv").string();
    REQUIRE(run({"synth", "--experiment", "gisin", "--model", "mixture", "--lambda", "0.3", "--seed", "1", "-o", data})
                .code == 0);
    const Result r = run({"fit", "--experiment", "gisin", "--input", data, "--fit-background"});
    CHECK(r.code == 3);
    CHECK(!r.err.empty());
}

TEST_CASE("config file and flag precedence") {
    TempDir dir;
    const fs::path cfg = dir.path / "c.json";
    std::ofstream(cfg) << R"({"command": "correlate", "angles_deg": [60], "geometry": "sphere"})";
    const Result from_file = run({"--config", cfg.string()});
    REQUIRE(from_file.code == 0);
    auto rows = csv_rows(from_file.out);
    REQUIRE(rows.size() == 2);
    CHECK(std::stod(rows[1][2]) == doctest::Approx(-0.5 / 3.0));

    const Result overridden = run({"--config", cfg.string(), "correlate", "--geometry", "plane"});
    REQUIRE(overridden.code == 0);
    rows = csv_rows(overridden.out);
    CHECK(std::stod(rows[1][2]) == doctest::Approx(-0.25));

    const Result clash = run({"--config", cfg.string(), "chsh"});
    CHECK(clash.code == 2);
    CHECK(clash.err.find("command") != std::string::npos);

    const fs::path unknown = dir.path / "u.json";
    std::ofstream(unknown) << R"({"command": "correlate", "colour": "red"})";
    const Result u = run({"--config", unknown.string()});
    CHECK(u.code == 2);
    CHECK(u.err.find("colour") != std::string::npos);

    const fs::path wrong_cmd = dir.path / "w.json";
    std::ofstream(wrong_cmd) << R"({"command": "correlate", "trials": 5, "counts": 10})";
    const Result w = run({"--config", wrong_cmd.string()});
    CHECK(w.code == 2);
    CHECK(w.err.find("counts") != std::string::npos);
}

TEST_CASE("eprsim executable") {
    TempDir dir;
    const fs::path out = dir.path / "o.txt";
    const std::string cmd = std::string(EPRSIM_EXE) + " chsh > " + out.string();
    CHECK(std::system(cmd.c_str()) == 0);
    CHECK(slurp(out).rfind("model,", 0) == 0);
    const std::string bad = std::string(EPRSIM_EXE) + " simulate --trials 0 2> " + out.string();
    const int status = std::system(bad.c_str());
    CHECK(WEXITSTATUS(status) == 2);
    CHECK(slurp(out).find("trials") != std::string::npos);
}
