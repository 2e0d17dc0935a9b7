#include <doctest.h>

#include <cmath>

#include "blockade/errors.hpp"
#include "blockade/lindblad.hpp"

using namespace blockade;

namespace {

ModelParams fig2(double delta) {
    ModelParams p;
    p.delta_L = p.delta_R = delta;
    return p;
}

DenseMatrix random_density(std::size_t d, unsigned seed) {
    std::srand(seed);
    const DenseMatrix a = DenseMatrix::Random(d, d);
    DenseMatrix r = a * a.adjoint();
    return r / r.trace();
}

// Dense Lindblad generator written out term by term.
DenseMatrix lindblad_rhs(const ModelParams& p, const TruncationSpec& t, const DenseMatrix& rho) {
    const DenseMatrix h = build_h_I(p, t).dense();
    const auto ops = mode_operators(t);
    DenseMatrix out = Complex(0, -1) * (h * rho - rho * h);
    auto dissipate = [&](const DenseMatrix& c, double rate) {
        const DenseMatrix cdc = c.adjoint() * c;
        out += rate * (c * rho * c.adjoint() - 0.5 * (cdc * rho + rho * cdc));
    };
    dissipate(ops.a_L.dense(), p.kappa_L);
    dissipate(ops.a_R.dense(), p.kappa_R);
    dissipate(ops.b.dense(), p.kappa_b * (p.n_bar_b + 1));
    dissipate(ops.b.adjoint().dense(), p.kappa_b * p.n_bar_b);
    return out;
}

}  // namespace

TEST_CASE("vectorization is row-major and invertible") {
    DenseMatrix m(2, 2);
    m << 1, 2, 3, 4;
    const DenseVector v = vectorize(m);
    CHECK(v(1) == Complex(2, 0));
    CHECK(v(2) == Complex(3, 0));
    CHECK((unvectorize(v, 2) - m).norm() == 0.0);
}

TEST_CASE("superoperator matches the term-by-term generator") {
    ModelParams p = fig2(0.03);
    p.n_bar_b = 0.4;
    p.g_R = 0.15;
    TruncationSpec t{2, 2, 4, 15};
    const auto L = build_liouvillian(p, t);
    CHECK(L.jumps().size() == 4u);
    const DenseMatrix rho = random_density(t.dim(), 7);
    const DenseMatrix expected = lindblad_rhs(p, t, rho);
    CHECK((L.apply(rho) - expected).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(L.trace_preservation_error() < 1e-14);

    ModelParams cold = p;
    cold.n_bar_b = 0.0;
    CHECK(build_liouvillian(cold, t).jumps().size() == 3u);  // zero-rate b^dag channel dropped
}

TEST_CASE("direct and iterative steady states agree") {
    const ModelParams p = fig2(-0.01);
    TruncationSpec t{2, 2, 8, 15};
    const auto L = build_liouvillian(p, t);
    SteadyStateOptions it, dir;
    it.method = SteadyMethod::iterative;
    dir.method = SteadyMethod::direct;
    const auto a = steady_state(L, it);
    const auto b = steady_state(L, dir);
    CHECK(a.method_used == SteadyMethod::iterative);
    CHECK(b.method_used == SteadyMethod::direct);
    CHECK_FALSE(a.fell_back);
    CHECK(a.residual < 1e-12);
    CHECK(b.residual < 1e-12);
    CHECK(trace_distance(a.rho, b.rho) < 1e-10);
    CHECK(std::abs(a.rho.trace() - 1.0) < 1e-12);
    CHECK(a.rho.hermiticity_error() < 1e-13);
    CHECK(a.rho.min_eigenvalue() > -1e-10);
    const auto o = observables(a.rho, t);
    REQUIRE(o.g2_L);
    CHECK(*o.g2_L == doctest::Approx(0.03652356722).epsilon(1e-6));
}

TEST_CASE("driven damped cavity relaxes to a coherent state") {
    ModelParams p = fig2(0.004);
    p.g_L = p.g_R = p.J = 0.0;
    TruncationSpec t{10, 1, 1, 15};
    const auto s = steady_state(build_liouvillian(p, t));
    const auto o = observables(s.rho, t);
    const double n = std::norm(Complex(p.Omega, 0) / Complex(p.delta_L, -0.5 * p.kappa_L));
    CHECK(o.n_L == doctest::Approx(n).epsilon(1e-9));
    CHECK(*o.g2_L == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(s.rho.purity() == doctest::Approx(1.0).epsilon(1e-8));
    for (int m = 0; m <= 4; ++m)
        CHECK(o.P_L[m] == doctest::Approx(std::exp(-n) * std::pow(n, m) / std::tgamma(m + 1.0)).epsilon(1e-8));
}

TEST_CASE("mechanical mode thermalizes to n_bar_b") {
    ModelParams p = fig2(0.0);
    p.Omega = 0.0;
    p.n_bar_b = 0.5;
    TruncationSpec t{1, 1, 30, 15};
    const auto s = steady_state(build_liouvillian(p, t));
    const auto o = observables(s.rho, t);
    CHECK(o.n_b == doctest::Approx(0.5).epsilon(1e-8));
    CHECK_FALSE(o.g2_L.has_value());
}

TEST_CASE("time evolution") {
    SUBCASE("zero duration returns the initial state") {
        const TruncationSpec t{2, 2, 3, 15};
        const auto L = build_liouvillian(fig2(0.0), t);
        const auto rho0 = DensityMatrix{random_density(t.dim(), 3)};
        CHECK((evolve(L, rho0, 0.0, 1.0).rho.data - rho0.data).norm() == 0.0);
    }
    SUBCASE("photon decay follows exp(-kappa t)") {
        ModelParams p = fig2(0.0);
        p.Omega = p.J = p.g_L = p.g_R = 0.0;
        p.kappa_L = 0.05;
        const TruncationSpec t{1, 1, 1, 15};
        const auto L = build_liouvillian(p, t);
        // |1_L, 0_R, 0_b> has index (1 * 2 + 0) * 2 + 0.
        const auto r = evolve(L, DensityMatrix::basis_state(4, t.dim()), 40.0, 0.5);
        CHECK(observables(r.rho, t).n_L == doctest::Approx(std::exp(-0.05 * 40.0)).epsilon(1e-9));
        CHECK(r.steps == 80);
        CHECK(r.max_trace_drift < 1e-12);
    }
    SUBCASE("purity is conserved under Hamiltonian dynamics") {
        ModelParams p = fig2(0.02);
        p.kappa_L = p.kappa_R = p.kappa_b = 0.0;
        p.Omega = 0.05;
        const TruncationSpec t{2, 2, 6, 15};
        const auto L = build_liouvillian(p, t);
        CHECK(L.jumps().empty());
        const auto r = evolve(L, DensityMatrix::basis_state(0, t.dim()), 20.0, 0.02);
        CHECK(r.rho.purity() == doctest::Approx(1.0).epsilon(1e-8));
    }
    SUBCASE("long-time limit reaches the steady state") {
        const TruncationSpec t{2, 2, 6, 15};
        const auto L = build_liouvillian(fig2(-0.01), t);
        const auto s = steady_state(L);
        const auto r = evolve(L, DensityMatrix::basis_state(0, t.dim()), 2000.0 / 0.01, 1000.0);
        CHECK(trace_distance(r.rho, s.rho) < 1e-8);
    }
}

TEST_CASE("dimension checks") {
    const TruncationSpec t{2, 2, 3, 15};
    const TruncationSpec u{2, 2, 4, 15};
    const auto L = build_liouvillian(fig2(0.0), t);
    CHECK_THROWS_AS(observables(DensityMatrix::basis_state(0, u.dim()), t), DimensionError);
    CHECK_THROWS_AS(evolve(L, DensityMatrix::basis_state(0, u.dim()), 1.0, 0.1), DimensionError);
    CHECK_THROWS_AS(evolve(L, DensityMatrix::basis_state(0, t.dim()), 1.0, 0.0), PreconditionError);
}
