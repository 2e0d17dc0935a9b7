#include <doctest.h>

#include <cmath>

#include "blockade/errors.hpp"
#include "blockade/model.hpp"

using namespace blockade;

namespace {

const Diagnostic* find(const std::vector<Diagnostic>& d, const std::string& code) {
    for (const auto& x : d)
        if (x.code == code) return &x;
    return nullptr;
}

}  // namespace

TEST_CASE("default parameters are valid and flag the regime checks") {
    const auto d = validate_params(ModelParams{});
    for (const auto& x : d) CHECK(x.severity != Severity::error);
    REQUIRE(find(d, "resolved_sideband"));
    CHECK(find(d, "resolved_sideband")->passed);
    CHECK(find(d, "normal_mode_resolvable")->passed);
    CHECK(find(d, "weak_driving")->passed);
    CHECK_NOTHROW(require_valid(ModelParams{}));
}

TEST_CASE("regime warnings do not block") {
    ModelParams p;
    p.kappa_L = p.kappa_R = 0.1;  // kappa > J, omega/kappa = 10
    const auto d = validate_params(p);
    CHECK_FALSE(find(d, "normal_mode_resolvable")->passed);
    CHECK(find(d, "normal_mode_resolvable")->severity == Severity::warning);
    CHECK_NOTHROW(require_valid(p));
}

TEST_CASE("invalid parameters are rejected") {
    ModelParams p;
    p.J = -0.05;
    CHECK_THROWS_AS(require_valid(p), PreconditionError);
    try {
        require_valid(p);
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()).find("a_R") != std::string::npos);
    }
    p = ModelParams{};
    p.omega_M = 0;
    CHECK_THROWS_AS(require_valid(p), PreconditionError);
    p = ModelParams{};
    p.n_bar_b = -1;
    CHECK_THROWS_AS(require_valid(p), PreconditionError);
    p = ModelParams{};
    p.kappa_b = NAN;
    CHECK_THROWS_AS(require_valid(p), PreconditionError);
}

TEST_CASE("Hamiltonian is Hermitian and matches its defining matrix elements") {
    ModelParams p;
    p.delta_L = 0.03;
    p.delta_R = -0.02;
    p.g_R = 0.15;
    TruncationSpec t{2, 2, 5, 15};
    const DenseMatrix h = build_h_sys(p, t).dense();
    CHECK((h - h.adjoint()).norm() < 1e-15);
    auto idx = [&](int mL, int mR, int k) { return (mL * 3 + mR) * 6 + k; };
    CHECK(std::abs(h(idx(1, 1, 2), idx(1, 1, 2)) - (0.03 - 0.02 + 2.0)) < 1e-15);
    CHECK(std::abs(h(idx(1, 0, 0), idx(0, 1, 0)) - 0.05) < 1e-15);
    CHECK(std::abs(h(idx(2, 0, 0), idx(1, 1, 0)) - 0.05 * std::sqrt(2.0)) < 1e-15);
    // -(g_L n_L + g_R n_R)(b + b^dag) between k = 2 and k = 3.
    CHECK(std::abs(h(idx(2, 1, 3), idx(2, 1, 2)) + (2 * 0.2 + 0.15) * std::sqrt(3.0)) < 1e-14);

    const DenseMatrix hi = build_h_I(p, t).dense();
    CHECK(std::abs(hi(idx(1, 0, 0), idx(0, 0, 0)) - p.Omega) < 1e-15);
    CHECK(std::abs(hi(idx(0, 1, 0), idx(0, 0, 0))) == 0.0);

    const DenseMatrix he = build_h_eff(p, t).dense();
    CHECK(std::abs(he(idx(2, 1, 0), idx(2, 1, 0)).imag() + 0.5 * (2 * p.kappa_L + p.kappa_R)) < 1e-15);
    CHECK((he - hi).diagonal().real().norm() < 1e-15);
}

TEST_CASE("total photon number and mode operators") {
    TruncationSpec t{3, 2, 4, 15};
    const auto ops = mode_operators(t);
    CHECK(((ops.n_L + ops.n_R).dense() - total_photon_number(t).dense()).norm() == 0.0);
    CHECK(((ops.a_L.adjoint() * ops.a_L).dense() - ops.n_L.dense()).norm() < 1e-14);
    CHECK(ops.identity.dim() == t.dim());
}
