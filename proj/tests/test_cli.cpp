#include <catch2/catch.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gr24/pointset_io.hpp"

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(GR24_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("cli constants riesz s=2") {
    RunResult r = run_cli("constants --kind riesz --s 2 --json");
    REQUIRE(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["W"].get<double>() == Approx(1.2337005501361698).margin(1e-9));
    CHECK(j["C"].get<double>() == Approx(0.6421).margin(1e-3));
    CHECK(j["C_lower"].get<double>() == Approx(-2.5));
}

TEST_CASE("cli constants log") {
    RunResult r = run_cli("constants --kind log --json");
    REQUIRE(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["W"].get<double>() == Approx(0.0365761346519424).margin(1e-7));
    CHECK(j["C"].get<double>() == Approx(0.747502824).margin(1e-6));
    CHECK(j["C_lower"].get<double>() == Approx(-0.8125));
}

TEST_CASE("cli constants riesz s=4") {
    RunResult r = run_cli("constants --kind riesz --s 4 --tol 1e-4 --json");
    REQUIRE(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["leading"].get<double>() == Approx(0.25));
    CHECK(j["C"].get<double>() == Approx(0.991).margin(0.01));
}

TEST_CASE("cli kernel-check") {
    CHECK(run_cli("kernel-check --k-max 8").exit_code == 0);
    CHECK(run_cli("kernel-check --k-max 1").exit_code == 0);
    // negative control
    CHECK(run_cli("kernel-check --k-max 2 --test-perturb").exit_code == 1);
}

TEST_CASE("cli sample: sizes and byte-identical reruns") {
    RunResult r = run_cli("sample --dpp --k 1 --m 3 --seed 7 --out /tmp/gr24cli_dpp --timestamp 2026-01-01T00:00:00Z");
    REQUIRE(r.exit_code == 0);
    for (int i = 0; i < 3; ++i) {
        const std::string path = "/tmp/gr24cli_dpp_00" + std::to_string(i) + ".json";
        gr24::Configuration c = gr24::read_pointset_json(path);
        CHECK(c.size() == 10);
    }
    const std::string first = slurp("/tmp/gr24cli_dpp_000.json");
    RunResult again = run_cli("sample --dpp --k 1 --m 3 --seed 7 --out /tmp/gr24cli_dpp --timestamp 2026-01-01T00:00:00Z");
    REQUIRE(again.exit_code == 0);
    CHECK(slurp("/tmp/gr24cli_dpp_000.json") == first);

    RunResult u = run_cli("sample --uniform --n 45 --m 1 --seed 3 --out /tmp/gr24cli_unif --timestamp 2026-01-01T00:00:00Z");
    REQUIRE(u.exit_code == 0);
    CHECK(gr24::read_pointset_json("/tmp/gr24cli_unif_000.json").size() == 45);

    // different seed changes the data
    run_cli("sample --uniform --n 45 --m 1 --seed 4 --out /tmp/gr24cli_unif2 --timestamp 2026-01-01T00:00:00Z");
    CHECK(slurp("/tmp/gr24cli_unif2_000.json") != slurp("/tmp/gr24cli_unif_000.json"));

    // CSV output (with sidecar manifest) reads back to the same points
    RunResult c = run_cli("sample --uniform --n 5 --m 1 --seed 3 --out /tmp/gr24cli_csv --csv --timestamp 2026-01-01T00:00:00Z");
    REQUIRE(c.exit_code == 0);
    gr24::Configuration json_cfg = gr24::read_pointset_json("/tmp/gr24cli_unif_000.json");
    gr24::Configuration csv_cfg = gr24::read_pointset_csv("/tmp/gr24cli_csv_000.csv");
    CHECK(csv_cfg.size() == 5);
    auto manifest = nlohmann::json::parse(slurp("/tmp/gr24cli_csv_000.csv.manifest.json"));
    CHECK(manifest["command"] == "sample");
    CHECK(manifest["seed"] == 3);
}

TEST_CASE("cli energy on files and expected mode") {
    // two orthogonal planes: s=2 energy is 1
    gr24::Configuration two;
    gr24::Mat42 m1 = gr24::Mat42::Zero(), m2 = gr24::Mat42::Zero();
    m1(0, 0) = m1(1, 1) = 1.0;
    m2(2, 0) = m2(3, 1) = 1.0;
    two.points.push_back(gr24::Frame::from_orthonormal(m1));
    two.points.push_back(gr24::Frame::from_orthonormal(m2));
    gr24::write_pointset_json("/tmp/gr24cli_two.json", two);

    RunResult r = run_cli("energy --in /tmp/gr24cli_two.json --kind riesz --s 2");
    REQUIRE(r.exit_code == 0);
    CHECK(std::stod(r.out) == Approx(1.0));

    RunResult e = run_cli("energy --expected --k 1 --kind riesz --s 2");
    REQUIRE(e.exit_code == 0);
    CHECK(std::stod(e.out) == Approx(99.0).margin(1e-6));

    // malformed file: nonzero exit
    {
        std::ofstream f("/tmp/gr24cli_bad.json");
        f << R"({"format":"gr24-frames-v1","points":[[[1.0,0.01],[0.01,1.0],[0,0],[0,0]]]})";
    }
    CHECK(run_cli("energy --in /tmp/gr24cli_bad.json --kind riesz --s 2").exit_code == 3);
}

TEST_CASE("cli bounds emits a delta grid with the required columns") {
    RunResult r = run_cli("bounds --n 45 --s 2 --grid 5");
    REQUIRE(r.exit_code == 0);
    std::istringstream lines(r.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "N,s,delta,g00,g11,bound");
    int rows = 0;
    std::string line;
    while (std::getline(lines, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 6); // 5 grid rows + asymptote row

    RunResult h = run_cli("bounds --n 45 --s 4 --grid 3");
    REQUIRE(h.exit_code == 0);
    CHECK(h.out.find(",4,") != std::string::npos);

    RunResult l = run_cli("bounds --n 45 --s 0 --grid 3");
    REQUIRE(l.exit_code == 0);
}

TEST_CASE("cli minimize: two points and reproducibility") {
    RunResult r = run_cli("minimize --n 2 --kind riesz --s 2 --seed 1");
    REQUIRE(r.exit_code == 0);
    const auto pos = r.out.find("energy    = ");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(r.out.substr(pos + 12)) == Approx(1.0).margin(1e-8));

    RunResult a = run_cli("minimize --n 6 --kind riesz --s 2 --seed 9 --max-iters 300 --restarts 2");
    RunResult b = run_cli("minimize --n 6 --kind riesz --s 2 --seed 9 --max-iters 300 --restarts 2");
    CHECK(a.out == b.out);
}

TEST_CASE("cli report structure") {
    RunResult r = run_cli("report --kind riesz --s 2 --k-min 1 --k-max 2");
    REQUIRE(r.exit_code == 0);
    std::istringstream lines(r.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "k,N,expected_exact,asymptote,lower_bound,residual_ratio");
    std::string row1, row2;
    std::getline(lines, row1);
    std::getline(lines, row2);
    CHECK(row1.substr(0, 5) == "1,10,");
    CHECK(row2.substr(0, 5) == "2,45,");
}

TEST_CASE("cli usage errors exit with code 3") {
    CHECK(run_cli("energy --kind riesz --s 2").exit_code == 3);       // no input
    CHECK(run_cli("sample --m 1").exit_code == 3);                     // neither uniform nor dpp
    CHECK(run_cli("bogus-subcommand").exit_code == 3);
}

TEST_CASE("cli numerical failures exit with code 2") {
    // s this close to 4 leaves O(1) unresolved corner mass at the depth cap;
    // the quadrature reports failure instead of returning a wrong value
    CHECK(run_cli("energy --expected --k 1 --kind riesz --s 3.9999 --quad-depth 6").exit_code == 2);
}
