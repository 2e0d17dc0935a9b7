#include <doctest.h>

#include <cmath>
#include <sstream>

#include "blockade/config_io.hpp"
#include "blockade/errors.hpp"

using namespace blockade;

namespace {

const char* kFig2Small = R"(# reduced Fig. 2 sweep
axis = delta
start = -0.05
stop = 0.05
points = 21
refine = -0.01:0.002:0.0005
J = 0.05
g = 0.2
kappa = 0.01
kappa_b = 0.001
Omega_over_kappa_L = 0.2
methods = analytic, lindblad
n_max_L = 2
n_max_R = 2
n_max_b = 6
)";

std::string csv_of(const SweepConfig& cfg) {
    std::ostringstream os;
    write_csv(os, cfg, run_sweep(cfg));
    return os.str();
}

}  // namespace

TEST_CASE("config parse and write round trip") {
    const SweepConfig a = parse_config(kFig2Small);
    CHECK(a.base.g_L == 0.2);
    CHECK(a.base.g_R == 0.2);
    CHECK(a.base.kappa_R == 0.01);
    CHECK(a.analytic);
    CHECK(a.lindblad);
    CHECK(a.truncation.n_max_b == 6);
    REQUIRE(a.refine.size() == 1u);
    CHECK(a.refine[0] == RefineWindow{-0.01, 0.002, 0.0005});
    const SweepConfig b = parse_config(write_config(a));
    CHECK(b.base == a.base);
    CHECK(b.refine == a.refine);
    CHECK(sweep_grid(b) == sweep_grid(a));
    CHECK(b.omega_over_kappa_L == a.omega_over_kappa_L);

    SweepConfig odd;
    odd.base.delta_L = 0.1 / 3.0;
    odd.base.g_R = std::nextafter(0.2, 1.0);
    CHECK(parse_config(write_config(odd)).base == odd.base);
}

TEST_CASE("malformed config lines name the line and key") {
    try {
        parse_config("axis = delta\nkappa_X = 0.1\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 2);
        CHECK(e.key() == "kappa_X");
        CHECK(std::string(e.what()).find("kappa_X") != std::string::npos);
    }
    try {
        parse_config("J = 0.05\npoints = many\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 2);
        CHECK(e.key() == "points");
    }
    CHECK_THROWS_AS(parse_config("axis = omega\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("no equals sign here\n"), ConfigError);
}

TEST_CASE("config validation") {
    SweepConfig c = parse_config("points = 1\n");
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = parse_config("values = 0.1, 0.05\n");
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = parse_config("axis = delta\nlock_resonance = +\n");
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("grid with refinement windows") {
    SweepConfig c;
    c.start = 0.0;
    c.stop = 1.0;
    c.points = 11;
    c.refine = {{0.5, 0.1, 0.05}};
    const auto g = sweep_grid(c);
    CHECK(g.size() == 11u + 2u);  // 0.45 and 0.55 added; 0.4, 0.5, 0.6 already present
    CHECK(std::is_sorted(g.begin(), g.end()));
    CHECK(std::adjacent_find(g.begin(), g.end()) == g.end());
}

TEST_CASE("params_at rules") {
    SweepConfig c;
    c.base.delta_R = c.base.delta_L + 0.02;
    c.axis = SweepAxis::delta;
    auto p = params_at(c, -0.3);
    CHECK(p.delta_L == -0.3);
    CHECK(p.delta_R == doctest::Approx(-0.28));

    c.axis = SweepAxis::g;
    c.base.g_R = -0.2;
    c.lock = LockResonance::plus;
    c.omega_over_kappa_L = 0.2;
    p = params_at(c, 0.5);
    CHECK(p.g_L == 0.5);
    CHECK(p.g_R == -0.5);
    CHECK(p.delta_L == doctest::Approx(0.25 - 0.05));
    CHECK(p.Omega == doctest::Approx(0.002));
    c.lock = LockResonance::minus;
    CHECK(params_at(c, 0.5).delta_L == doctest::Approx(0.25 + 0.05));

    c = SweepConfig{};
    c.axis = SweepAxis::kappa;
    c.omega_over_kappa_L = 0.2;
    p = params_at(c, 0.1);
    CHECK(p.kappa_R == 0.1);
    CHECK(p.Omega == doctest::Approx(0.02));
}

TEST_CASE("sweep output is deterministic and independent of thread count") {
    SweepConfig c = parse_config(kFig2Small);
    c.threads = 1;
    const std::string serial = csv_of(c);
    c.threads = 3;
    const std::string parallel = csv_of(c);
    CHECK(serial == parallel);
    c.threads = 1;
    CHECK(csv_of(c) == serial);
    CHECK(serial.rfind("# ", 0) == 0);
    CHECK(serial.find("threads") == std::string::npos);
}

TEST_CASE("CSV round trip and per-method rows") {
    SweepConfig c = parse_config(kFig2Small);
    const auto rows = run_sweep(c);
    const auto grid = sweep_grid(c);
    CHECK(rows.size() == 2 * grid.size());
    CHECK(select_method(rows, "analytic").size() == grid.size());
    std::ostringstream os;
    write_csv(os, c, rows);
    std::istringstream is(os.str());
    const auto back = read_csv(is);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(back[i].axis_value == rows[i].axis_value);
        CHECK(back[i].g2_L == rows[i].g2_L);
        CHECK(back[i].P_R2 == rows[i].P_R2);
        CHECK(back[i].method == rows[i].method);
        CHECK(back[i].status == rows[i].status);
    }
    for (const auto& r : rows) {
        CHECK(r.P_L1 >= 0.0);
        CHECK(r.P_L1 <= 1.0);
        CHECK(*r.g2_L >= 0.0);
    }
    // Header row follows the documented column order.
    std::string header;
    for (std::size_t i = 0; i < csv_columns().size(); ++i) header += (i ? "," : "") + csv_columns()[i];
    CHECK(os.str().find("\n" + header + "\n") != std::string::npos);
}

TEST_CASE("per-point failures are recorded and the sweep continues") {
    SweepConfig c;
    c.axis = SweepAxis::g;
    c.values = {0.1, 0.2};
    c.truncation.k_max_analytic = 15;
    c.base.J = 0.0;
    c.base.delta_L = c.base.delta_R = 0.01;  // exactly on the bare one-photon resonance at g = 0.1
    c.base.kappa_L = c.base.kappa_R = 0.0;
    const auto rows = run_sweep(c);
    REQUIRE(rows.size() == 2u);
    CHECK(rows[0].status.rfind("error", 0) == 0);
    CHECK(rows[1].status == "ok");
}

TEST_CASE("extremum detection") {
    std::vector<double> x, y, mono;
    for (int i = 0; i <= 200; ++i) {
        const double v = -1.0 + 0.01 * i;
        x.push_back(v);
        // Lorentzian dip at 0.123 and peak at -0.5 on a flat background.
        y.push_back(1.0 - 0.9 / (1.0 + std::pow((v - 0.123) / 0.05, 2)) + 2.0 / (1.0 + std::pow((v + 0.5) / 0.04, 2)));
        mono.push_back(std::exp(v));
    }
    const auto ex = detect_extrema(x, y);
    REQUIRE(ex.size() == 2u);
    CHECK(ex[0].kind == ExtremumKind::peak);
    CHECK(ex[0].refined_location == doctest::Approx(-0.5).epsilon(1e-3));
    CHECK(ex[1].kind == ExtremumKind::dip);
    CHECK(std::abs(ex[1].refined_location - 0.123) < 0.003);
    CHECK(detect_extrema(x, mono).empty());

    // Extrema inside the 3-step boundary guard are dropped.
    std::vector<double> edge = {1.0, 0.5, 0.7, 0.9, 1.0, 1.1, 1.2, 1.3};
    std::vector<double> ex8 = {0, 1, 2, 3, 4, 5, 6, 7};
    CHECK(detect_extrema(ex8, edge).empty());
}

TEST_CASE("comparison report") {
    std::vector<CurvePoint> a(5), l(5);
    for (int i = 0; i < 5; ++i) {
        a[i].axis_value = l[i].axis_value = 0.1 * i;
        a[i].method = "analytic";
        l[i].method = "lindblad";
        a[i].g2_L = l[i].g2_L = 0.5 + i;
    }
    auto r = compare_report(a, l);
    CHECK(r.max_deviation == 0.0);
    CHECK(r.passed);
    l[3].g2_L = *a[3].g2_L * 1.5;
    l[4].g2_L.reset();
    r = compare_report(a, l, "g2_L", 0.25);
    CHECK(r.max_deviation == doctest::Approx(1.0 / 3.0));
    CHECK(r.max_location == doctest::Approx(0.3));
    CHECK(r.skipped == 1u);
    CHECK_FALSE(r.passed);
    const auto j = compare_json(r);
    CHECK(j["passed"] == false);
    CHECK(j["compared"] == 4);
    CHECK(format_report(r).find("0.3") != std::string::npos);
}
