#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "blockade/errors.hpp"
#include "blockade/spectrum.hpp"

using namespace blockade;

namespace {

// Sector blocks written directly in the displaced bare basis, ordered by descending m.
Eigen::Matrix2d block1(int k, const ModelParams& p) {
    Eigen::Matrix2d m;
    m << bare_eigenvalue(1, 0, k, p), p.J, p.J, bare_eigenvalue(0, 1, k, p);
    return m;
}

Eigen::Matrix3d block2(int k, const ModelParams& p) {
    const double s = std::sqrt(2.0) * p.J;
    Eigen::Matrix3d m;
    m << bare_eigenvalue(2, 0, k, p), s, 0, s, bare_eigenvalue(1, 1, k, p), s, 0, s, bare_eigenvalue(0, 2, k, p);
    return m;
}

ModelParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ModelParams p;
    p.delta_L = -0.5 + u(rng);
    p.delta_R = p.delta_L + (u(rng) < 0.5 ? 0.0 : 0.2 * (u(rng) - 0.5));
    p.J = 0.2 * u(rng);
    p.g_L = 0.6 * (u(rng) - 0.5);
    p.g_R = u(rng) < 0.5 ? p.g_L : 0.6 * (u(rng) - 0.5);
    return p;
}

}  // namespace

TEST_CASE("degenerate Fig. 2 spectrum") {
    ModelParams p;
    const auto one = single_photon_eigs(0, p);
    const auto two = two_photon_eigs(0, p);
    CHECK(one[0].value == doctest::Approx(-0.09).epsilon(1e-13));
    CHECK(one[1].value == doctest::Approx(0.01).epsilon(1e-13));
    CHECK(std::abs(one[1].value - one[0].value - 0.1) < 1e-12);
    CHECK(std::abs(two[2].value - two[1].value - 0.1) < 1e-12);
    CHECK(std::abs(two[1].value - two[0].value - 0.1) < 1e-12);
    CHECK(two[1].value == doctest::Approx(-0.16).epsilon(1e-13));
    CHECK(one[1].branch == Branch::plus);
    CHECK(two[0].branch == Branch::minus);
    CHECK(branch_label(2, Branch::zero) == "20");
    CHECK(branch_label(1, Branch::plus) == "1+");
}

TEST_CASE("eigenpairs agree with dense diagonalization on random parameters") {
    std::mt19937_64 rng(20240611);
    for (int trial = 0; trial < 50; ++trial) {
        const ModelParams p = random_params(rng);
        for (int k = 0; k <= 4; ++k) {
            const auto one = single_photon_eigs(k, p);
            const auto two = two_photon_eigs(k, p);
            const Eigen::Matrix2d b1 = block1(k, p);
            const Eigen::Matrix3d b2 = block2(k, p);
            const Eigen::Vector2d e1 = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(b1).eigenvalues();
            const Eigen::Vector3d e2 = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(b2).eigenvalues();
            for (int i = 0; i < 2; ++i) {
                CHECK(std::abs(one[i].value - e1(i)) < 1e-9);
                const Eigen::Vector2d c(one[i].coeffs[0], one[i].coeffs[1]);
                CHECK(c.norm() == doctest::Approx(1.0));
                CHECK((b1 * c - one[i].value * c).norm() < 1e-9);
            }
            for (int i = 0; i < 3; ++i) {
                CHECK(std::abs(two[i].value - e2(i)) < 1e-9);
                const Eigen::Vector3d c(two[i].coeffs[0], two[i].coeffs[1], two[i].coeffs[2]);
                CHECK(c.norm() == doctest::Approx(1.0));
                CHECK((b2 * c - two[i].value * c).norm() < 1e-8);
                CHECK(two[i].franck_condon_approx == (p.g_L != p.g_R));
            }
        }
    }
}

TEST_CASE("J = 0 levels reduce to bare states") {
    ModelParams p;
    p.J = 0.0;
    p.delta_R = 0.03;
    const auto two = two_photon_eigs(1, p);
    for (const auto& l : two) {
        int nonzero = 0;
        for (double c : l.coeffs) nonzero += std::abs(c) > 1e-12;
        CHECK(nonzero == 1);
    }
}

TEST_CASE("full Hamiltonian sectors reproduce the equal-coupling levels") {
    ModelParams p;
    p.g_L = p.g_R = 0.3;
    p.J = 0.07;
    p.delta_L = p.delta_R = 0.02;
    TruncationSpec t{2, 2, 40, 15};
    const DenseMatrix h = build_h_sys(p, t).dense();
    std::vector<Eigen::Index> idx;
    for (int mL = 0; mL <= 1; ++mL)
        for (int k = 0; k <= 40; ++k) idx.push_back(((mL) * 3 + (1 - mL)) * 41 + k);
    DenseMatrix block(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) block(i, j) = h(idx[i], idx[j]);
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<DenseMatrix>(block).eigenvalues();
    std::vector<double> expected;
    for (int k = 0; k <= 3; ++k)
        for (const auto& l : single_photon_eigs(k, p)) expected.push_back(l.value);
    std::sort(expected.begin(), expected.end());
    for (std::size_t i = 0; i < expected.size(); ++i) CHECK(std::abs(ev(i) - expected[i]) < 1e-9);
}

TEST_CASE("resonance detunings put the level at zero") {
    ModelParams p;
    p.delta_R = 0.01;  // offset kept by the common shift
    for (int k = 0; k <= 2; ++k)
        for (const auto& r : resonance_detunings(k, p)) {
            ModelParams q = p;
            q.delta_L = r.detuning;
            q.delta_R = r.detuning + 0.01;
            double value = 0;
            if (r.photons == 1) {
                for (const auto& l : single_photon_eigs(k, q))
                    if (l.branch == r.branch) value = l.value;
            } else {
                for (const auto& l : two_photon_eigs(k, q))
                    if (l.branch == r.branch) value = l.value;
            }
            CHECK(std::abs(value) < 1e-12);
        }
}

TEST_CASE("opposite couplings: two-photon resonances of the Fig. 6 configuration") {
    ModelParams p;
    p.g_L = -0.2;
    std::vector<double> two;
    for (const auto& r : resonance_detunings(0, p))
        if (r.photons == 2) two.push_back(r.detuning);
    std::sort(two.begin(), two.end());
    REQUIRE(two.size() == 3);
    CHECK(two[0] == doctest::Approx(-0.02403).epsilon(1e-4));
    CHECK(two[1] == doctest::Approx(0.08).epsilon(1e-9));
    CHECK(two[2] == doctest::Approx(0.10403).epsilon(1e-4));
}

TEST_CASE("resonant couplings") {
    ModelParams p;
    const auto g1 = resonant_couplings(1, Branch::plus, p);
    REQUIRE(g1.size() == 3);
    CHECK(g1[0] == doctest::Approx(0.6325).epsilon(1e-4));
    CHECK(g1[1] == doctest::Approx(0.6708).epsilon(1e-4));
    CHECK(g1[2] == doctest::Approx(0.7071).epsilon(1e-4));
    CHECK(resonant_couplings(0, Branch::plus, p).size() == 1);
    ModelParams asym = p;
    asym.g_R = 0.1;
    CHECK_THROWS_AS(resonant_couplings(1, Branch::plus, asym), PreconditionError);
}

TEST_CASE("level table layout") {
    const auto t = level_table(2, ModelParams{});
    CHECK(t.size() == 3u * 6u);
    CHECK(t[0].sector == 0);
    CHECK(t[1].sector == 1);
    CHECK(t[3].sector == 2);
}
