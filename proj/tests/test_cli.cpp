#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "blockade/config_io.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(BLOCKADE_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch() {
    const fs::path d = fs::temp_directory_path() / ("blockade_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("every shipped config parses and validates") {
    int n = 0;
    for (const auto& e : fs::directory_iterator(BLOCKADE_CONFIG_DIR)) {
        if (e.path().extension() != ".cfg") continue;
        CAPTURE(e.path().string());
        const auto cfg = blockade::load_config(e.path().string());
        CHECK_NOTHROW(cfg.validate());
        ++n;
    }
    CHECK(n >= 7);
}

TEST_CASE("exit codes") {
    CHECK(run("") == 1);
    CHECK(run("no-such-command") == 1);
    CHECK(run("sweep") == 1);
    CHECK(run("sweep --config /nonexistent/file.cfg") == 1);
    CHECK(run("sweep --method quantum --config x") == 1);
    CHECK(run("spectrum --kmax 2") == 0);
    CHECK(run("validate --only 1") == 0);
    CHECK(run("validate --only 10") == 3);
}

TEST_CASE("sweep, extrema and compare end to end") {
    const fs::path dir = scratch();
    const fs::path cfg = dir / "small.cfg";
    std::ofstream(cfg) << "axis = delta\nstart = -0.03\nstop = 0.01\npoints = 41\ng = 0.2\nJ = 0.05\nkappa = 0.01\n"
                          "Omega_over_kappa_L = 0.2\nn_max_L = 2\nn_max_R = 2\nn_max_b = 6\n";
    const fs::path csv = dir / "out.csv";
    CHECK(run("sweep --quiet --method both --config " + cfg.string() + " --output " + csv.string()) == 0);
    const auto rows = blockade::read_csv_file(csv.string());
    CHECK(rows.size() == 82u);
    CHECK(slurp(csv).find("methods = analytic, lindblad") != std::string::npos);

    const fs::path ex = dir / "ex.json";
    CHECK(run("extrema " + csv.string() + " --field g2_L --output " + ex.string()) == 0);
    const auto j = nlohmann::json::parse(slurp(ex));
    REQUIRE(j.contains("analytic"));
    bool dip = false;
    for (const auto& e : j["analytic"])
        if (e["kind"] == "dip" && std::abs(e["refined_location"].get<double>() + 0.01) < 0.003) dip = true;
    CHECK(dip);

    const fs::path cj = dir / "cmp.json";
    const int rc = run("compare " + csv.string() + " --tolerance 10 --json " + cj.string());
    CHECK(rc == 0);
    CHECK(nlohmann::json::parse(slurp(cj))["compared"] == 41);
    CHECK(run("compare " + csv.string() + " --tolerance 1e-9") == 3);

    // Identical config, identical bytes.
    const std::string first = slurp(csv);
    CHECK(run("sweep --quiet --method both --threads 2 --config " + cfg.string() + " --output " + csv.string()) == 0);
    CHECK(slurp(csv) == first);
    fs::remove_all(dir);
}
