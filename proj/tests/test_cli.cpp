#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#ifndef NINEPOINT_CLI_PATH
#error "NINEPOINT_CLI_PATH must point at the built binary"
#endif

namespace {

using nlohmann::json;

struct CliResult {
    int exit_code = -1;
    std::string out;
};

CliResult run_cli(const std::string& args, bool merge_stderr = false) {
    const std::string cmd =
        std::string(NINEPOINT_CLI_PATH) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    CliResult result;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) result.out.append(buf.data(), got);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("ninepoint_test_" + name);
}

} // namespace

TEST_CASE("cli stencil: isotropic reference values") {
    const CliResult r = run_cli("stencil --H 1 --h 1 --beta2 0.5 --beta3 0.5 --beta4 0.5");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["command"] == "stencil");
    CHECK(j["tool_version"] == "0.1.0");
    CHECK(j["inputs"]["H"] == 1.0);
    const auto& res = j["results"];
    CHECK(res["alpha"] == -3.0);
    CHECK(res["beta"][4] == 0.5);
    CHECK(res["beta"][5] == 0.0);
    CHECK(res["beta"][6] == 0.0);
    CHECK(res["beta"][7] == 0.5);
    CHECK(std::abs(res["beta6_identity_gap"].get<double>()) <= 1e-15);

    const CliResult r2 = run_cli("stencil --H 1 --h 1 --beta2 0 --beta3 0 --beta4 0");
    REQUIRE(r2.exit_code == 0);
    const json j2 = json::parse(r2.out);
    CHECK(j2["results"]["beta"][4] == 0.75);
    CHECK(j2["results"]["beta"][5] == 0.25);
    CHECK(j2["results"]["beta"][6] == 0.25);
    CHECK(j2["results"]["beta"][7] == 0.75);
    CHECK(j2["results"]["alpha"] == -2.0);
}

TEST_CASE("cli stencil: envelope round-trips and runs are deterministic") {
    const std::string args = "stencil --H 2 --h 1 --beta2 0 --beta3 0.25 --beta4 0.25";
    const CliResult a = run_cli(args);
    const CliResult b = run_cli(args);
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    const json parsed = json::parse(a.out);
    CHECK(json::parse(parsed.dump()) == parsed);
}

TEST_CASE("cli stencil: csv format and asymmetric cells") {
    const CliResult r = run_cli("stencil --H 1 --h 1 --beta2 0.5 --beta3 0.5 --beta4 0.5 --format csv");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.rfind("alpha,beta1,", 0) == 0);

    const CliResult r2 = run_cli("stencil --beta2 0.1 --beta3 0.1 --beta4 0.1 --asym 2 1 1 1");
    REQUIRE(r2.exit_code == 0);
    const json j = json::parse(r2.out);
    CHECK(j["results"]["beta6_identity_gap"].is_null());
    CHECK(j["results"]["geometry"]["H_minus"] == 2.0);
}

TEST_CASE("cli: usage errors exit with 2") {
    CHECK(run_cli("stencil --H -1 --h 1 --beta2 0 --beta3 0 --beta4 0", true).exit_code == 2);
    CHECK(run_cli("stencil --H 1 --h 1", true).exit_code == 2); // missing required betas
    CHECK(run_cli("margin --H 1", true).exit_code == 2);
    CHECK(run_cli("nonsense", true).exit_code == 2);
    CHECK(run_cli("sweep --ratios 4:1:0.5", true).exit_code == 2);
}

TEST_CASE("cli margin and threshold") {
    const CliResult r = run_cli("margin --H 1 --h 1");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["results"]["feasible"] == true);
    CHECK(std::abs(j["results"]["margin"].get<double>() - 1.0 / 6.0) <= 1e-9);
    CHECK(j["results"]["method"] == "vertex-enumeration");

    const CliResult inf = run_cli("margin --H 100 --h 1");
    REQUIRE(inf.exit_code == 0); // infeasibility is a finding, not an error
    CHECK(json::parse(inf.out)["results"]["feasible"] == false);

    const CliResult t = run_cli("threshold");
    REQUIRE(t.exit_code == 0);
    CHECK(std::abs(json::parse(t.out)["results"]["r_star"].get<double>() - 2.0) <= 1e-6);
}

TEST_CASE("cli sweep: csv rows with the threshold sign structure") {
    const auto path = temp_file("sweep.csv");
    const CliResult r = run_cli("sweep --ratios 0.25:4:0.25 --out " + path.string());
    REQUIRE(r.exit_code == 0);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "ratio,normalized_margin,feasible");
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++rows;
        const double ratio = std::stod(line.substr(0, line.find(',')));
        const bool feasible = line.find("true") != std::string::npos;
        CHECK(feasible == (ratio >= 0.5 - 1e-12 && ratio <= 2.0 + 1e-12));
    }
    CHECK(rows == 16);
    std::filesystem::remove(path);
}

TEST_CASE("cli mesh gen + classify") {
    const auto path = temp_file("uniform.json");
    const CliResult gen = run_cli("mesh gen uniform --n 4 --out " + path.string());
    REQUIRE(gen.exit_code == 0);
    const json mesh = json::parse(std::ifstream(path));
    CHECK(mesh["x"].size() == 5);
    CHECK(mesh["y"].size() == 5);

    const CliResult cls = run_cli("classify --mesh " + path.string());
    REQUIRE(cls.exit_code == 0);
    const json cj = json::parse(cls.out);
    CHECK(cj["results"]["n_infeasible"] == 0);
    CHECK(cj["results"]["n_interior"] == 9);
    std::filesystem::remove(path);
}

TEST_CASE("cli mesh gen: shishkin x uniform finds infeasible nodes") {
    const auto path = temp_file("mixed.json");
    const CliResult gen = run_cli(
        "mesh gen shishkin --n 16 --eps 1e-3 --sigma 2 --y-kind uniform --y-n 16 --out " + path.string());
    REQUIRE(gen.exit_code == 0);

    const CliResult cls = run_cli("classify --mesh " + path.string());
    REQUIRE(cls.exit_code == 0);
    const json cj = json::parse(cls.out);
    CHECK(cj["results"]["n_infeasible"].get<int>() >= 1);
    CHECK(cj["results"]["n_infeasible"].get<int>() == 105);
    CHECK(cj["results"]["infeasible_nodes"].size() == 100); // capped without --all
    CHECK(cj["results"]["truncated"] == true);

    const CliResult all = run_cli("classify --mesh " + path.string() + " --all");
    CHECK(json::parse(all.out)["results"]["infeasible_nodes"].size() == 105);
    std::filesystem::remove(path);
}

TEST_CASE("cli classify: schema and content errors") {
    const auto bad_schema = temp_file("bad_schema.json");
    std::ofstream(bad_schema) << "{\"x\": \"oops\", \"y\": [0, 0.5, 1]}";
    CHECK(run_cli("classify --mesh " + bad_schema.string(), true).exit_code == 2);
    std::filesystem::remove(bad_schema);

    const auto bad_content = temp_file("bad_content.json");
    std::ofstream(bad_content) << "{\"x\": [0, 0.7, 0.5, 1], \"y\": [0, 0.5, 1]}";
    CHECK(run_cli("classify --mesh " + bad_content.string(), true).exit_code == 1);
    std::filesystem::remove(bad_content);

    CHECK(run_cli("classify --mesh /nonexistent/mesh.json", true).exit_code == 2);
}

TEST_CASE("cli check: uniform positive control and layer-mesh findings") {
    const auto uniform_path = temp_file("check_uniform.json");
    REQUIRE(run_cli("mesh gen uniform --n 8 --out " + uniform_path.string()).exit_code == 0);
    const CliResult ok = run_cli("check --mesh " + uniform_path.string() +
                                 " --scheme maxmargin --dmp-trials 20 --seed 7");
    REQUIRE(ok.exit_code == 0);
    const json oj = json::parse(ok.out);
    CHECK(oj["results"]["m_matrix"]["sign_pattern_ok"] == true);
    CHECK(oj["results"]["m_matrix"]["inverse_nonneg"] == true);
    CHECK(oj["results"]["dmp"]["passed"] == true);
    CHECK(oj["results"]["dmp"]["seed"] == 7);
    std::filesystem::remove(uniform_path);

    const auto layer_path = temp_file("check_layer.json");
    REQUIRE(run_cli("mesh gen shishkin --n 16 --eps 1e-3 --sigma 2 --out " + layer_path.string())
                .exit_code == 0);
    const CliResult bad = run_cli("check --mesh " + layer_path.string() +
                                  " --scheme maxmargin --dmp-trials 0");
    REQUIRE(bad.exit_code == 0); // findings are data, not errors
    const json bj = json::parse(bad.out);
    CHECK(bj["results"]["m_matrix"]["sign_pattern_ok"] == false);
    CHECK(bj["results"]["m_matrix"]["violation_count"].get<int>() >= 1);

    const auto mtx_path = temp_file("hybrid.mtx");
    const CliResult hybrid = run_cli("check --mesh " + layer_path.string() +
                                     " --scheme hybrid --threshold 2 --dmp-trials 100 --seed 11 "
                                     "--export-matrix " + mtx_path.string());
    REQUIRE(hybrid.exit_code == 0);
    const json hj = json::parse(hybrid.out);
    CHECK(hj["results"]["m_matrix"]["sign_pattern_ok"] == true);
    CHECK(hj["results"]["dmp"]["trials_passed"] == 100);
    CHECK(hj["results"]["branch_counts"]["five-point-dropped"].get<int>() >= 1);

    std::ifstream mtx(mtx_path);
    REQUIRE(mtx.good());
    std::string banner;
    std::getline(mtx, banner);
    CHECK(banner == "%%MatrixMarket matrix coordinate real general");
    std::filesystem::remove(mtx_path);
    std::filesystem::remove(layer_path);
}

TEST_CASE("cli check: capacity errors exit with 1") {
    const auto path = temp_file("too_big.json");
    REQUIRE(run_cli("mesh gen uniform --n 70 --out " + path.string()).exit_code == 0);
    const CliResult r = run_cli("check --mesh " + path.string() + " --scheme maxmargin", true);
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("error") != std::string::npos);
    std::filesystem::remove(path);
}
