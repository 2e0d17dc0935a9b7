#include "blockade/analytic_blockade.hpp"

#include <algorithm>
#include <cmath>

#include "blockade/errors.hpp"
#include "blockade/spectrum.hpp"

namespace blockade {

namespace {

constexpr Complex I(0.0, 1.0);
const double kSqrt2 = std::sqrt(2.0);

AmplitudeSet empty_set(int k_max, AmplitudeMethod m) {
    AmplitudeSet a;
    a.k_max = k_max;
    a.method = m;
    for (auto& v : a.amplitudes) v.assign(static_cast<std::size_t>(k_max + 1), Complex(0.0, 0.0));
    a.at(Photons::p00, 0) = 1.0;
    return a;
}

Complex checked_div(Complex num, Complex den, const char* what) {
    if (std::abs(den) < 1e-300) throw NumericalError(std::string("steady_amplitudes_closed: vanishing denominator in ") + what);
    return num / den;
}

Eigen::VectorXcd solve_checked(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b, const char* what) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    if (!(lu.rcond() > 1e-15)) throw NumericalError(std::string("steady_amplitudes_linear: singular ") + what + " system");
    return lu.solve(b);
}

}  // namespace

std::string to_string(AmplitudeMethod m) {
    return m == AmplitudeMethod::closed_form ? "closed_form" : "linear_solve";
}

double AmplitudeSet::weight(Photons c) const {
    double s = 0.0;
    for (const auto& v : amplitudes[static_cast<int>(c)]) s += std::norm(v);
    return s;
}

double AmplitudeSet::norm() const {
    double s = 0.0;
    for (int c = 0; c < kPhotonConfigs; ++c) s += weight(static_cast<Photons>(c));
    return s;
}

double AmplitudeSet::tail_fraction(Photons c) const {
    const auto& v = amplitudes[static_cast<int>(c)];
    double total = 0.0, tail = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        total += std::norm(v[k]);
        if (static_cast<int>(k) > k_max - 3) tail += std::norm(v[k]);
    }
    return total > 0.0 ? tail / total : 0.0;
}

Eigen::MatrixXd pi_matrix(const ModelParams& p, int k_max) {
    if (k_max < 1) throw PreconditionError("pi_matrix: k_max must be >= 1");
    return displacement_dense(Complex(-p.g_L / p.omega_M, 0.0), k_max).real();
}

Eigen::MatrixXd overlap_matrix(const ModelParams& p, int m1, int n1, int m2, int n2, int k_max) {
    if (k_max < 1) throw PreconditionError("overlap_matrix: k_max must be >= 1");
    const double eta1 = conditional_displacement(m1, n1, p);
    const double eta2 = conditional_displacement(m2, n2, p);
    return displacement_dense(Complex(eta2 - eta1, 0.0), k_max).real();
}

AmplitudeSet steady_amplitudes_closed(const ModelParams& p, int k_max) {
    require_valid(p);
    if (p.g_L != p.g_R || p.kappa_L != p.kappa_R)
        throw PreconditionError(
            "steady_amplitudes_closed: requires g_L == g_R and kappa_L == kappa_R; use steady_amplitudes_linear");
    if (k_max < 1) throw PreconditionError("steady_amplitudes_closed: k_max must be >= 1");

    const double J = p.J, W = p.Omega, kap = p.kappa_L;
    const Eigen::MatrixXd Pi = pi_matrix(p, k_max);
    auto E = [&](int m, int n, int k) { return bare_eigenvalue(m, n, k, p); };
    AmplitudeSet a = empty_set(k_max, AmplitudeMethod::closed_form);

    for (int k = 0; k <= k_max; ++k) {
        const double e01 = E(0, 1, k), e10 = E(1, 0, k);
        const Complex den = 4.0 * J * J - 4.0 * e01 * e10 + 2.0 * I * (e01 + e10) * kap + kap * kap;
        a.at(Photons::p01, k) = checked_div(-4.0 * J * W * Pi(k, 0), den, "C01");
        a.at(Photons::p10, k) = checked_div(2.0 * W * (2.0 * e01 - I * kap) * Pi(k, 0), den, "C10");
    }
    for (int k = 0; k <= k_max; ++k) {
        Complex s10 = 0.0, s01 = 0.0;
        for (int l = 0; l <= k_max; ++l) {
            s10 += Pi(k, l) * a.at(Photons::p10, l);
            s01 += Pi(k, l) * a.at(Photons::p01, l);
        }
        const double e20 = E(2, 0, k), e11 = E(1, 1, k), e02 = E(0, 2, k);
        const Complex den02 =
            2.0 * J * J * (e20 - I * kap) + (e02 - I * kap) * (2.0 * J * J + (I * e11 + kap) * (I * e20 + kap));
        a.at(Photons::p02, k) = checked_div(kSqrt2 * J * W * (2.0 * J * s10 + (I * kap - e20) * s01), den02, "C02");

        const double M = e11 * e20 + e02 * e11 + e02 * e20;
        const Complex den = 2.0 * J * J * (e02 + e20) - e02 * e11 * e20 + I * (M - 4.0 * J * J) * kap +
                            (e02 + e11 + e20) * kap * kap - I * kap * kap * kap;
        a.at(Photons::p20, k) = checked_div(
            -kSqrt2 * W * (J * (e02 - I * kap) * s01 + (2.0 * J * J + (I * e11 + kap) * (I * e02 + kap)) * s10), den,
            "C20");
        a.at(Photons::p11, k) = checked_div(W * (e02 - I * kap) * ((e20 - I * kap) * s01 - 2.0 * J * s10), den, "C11");
    }
    return a;
}

AmplitudeSet steady_amplitudes_linear(const ModelParams& p, int k_max) {
    require_valid(p);
    if (k_max < 1) throw PreconditionError("steady_amplitudes_linear: k_max must be >= 1");
    const int n = k_max + 1;
    const double J = p.J, W = p.Omega, kL = p.kappa_L, kR = p.kappa_R;
    auto E = [&](int m, int nn, int k) { return bare_eigenvalue(m, nn, k, p); };
    const Eigen::MatrixXd F10_00 = overlap_matrix(p, 1, 0, 0, 0, k_max);
    const Eigen::MatrixXd F20_10 = overlap_matrix(p, 2, 0, 1, 0, k_max);
    const Eigen::MatrixXd F11_01 = overlap_matrix(p, 1, 1, 0, 1, k_max);

    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    Eigen::VectorXcd s = Eigen::VectorXcd::Zero(2 * n);
    for (int k = 0; k < n; ++k) {
        A(k, k) = E(1, 0, k) - 0.5 * I * kL;
        A(k, n + k) = J;
        s(k) = -W * F10_00(k, 0);
        A(n + k, n + k) = E(0, 1, k) - 0.5 * I * kR;
        A(n + k, k) = J;
    }
    const Eigen::VectorXcd c1 = solve_checked(A, s, "one-photon");
    const Eigen::VectorXcd c10 = c1.head(n), c01 = c1.tail(n);

    Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(3 * n, 3 * n);
    Eigen::VectorXcd t = Eigen::VectorXcd::Zero(3 * n);
    const Eigen::VectorXcd drive20 = F20_10.cast<Complex>() * c10;
    const Eigen::VectorXcd drive11 = F11_01.cast<Complex>() * c01;
    for (int k = 0; k < n; ++k) {
        B(k, k) = E(2, 0, k) - I * kL;
        B(k, n + k) = kSqrt2 * J;
        t(k) = -kSqrt2 * W * drive20(k);
        B(n + k, n + k) = E(1, 1, k) - 0.5 * I * (kL + kR);
        B(n + k, k) = kSqrt2 * J;
        B(n + k, 2 * n + k) = kSqrt2 * J;
        t(n + k) = -W * drive11(k);
        B(2 * n + k, 2 * n + k) = E(0, 2, k) - I * kR;
        B(2 * n + k, n + k) = kSqrt2 * J;
    }
    const Eigen::VectorXcd c2 = solve_checked(B, t, "two-photon");

    AmplitudeSet a = empty_set(k_max, AmplitudeMethod::linear_solve);
    for (int k = 0; k < n; ++k) {
        a.at(Photons::p10, k) = c10(k);
        a.at(Photons::p01, k) = c01(k);
        a.at(Photons::p20, k) = c2(k);
        a.at(Photons::p11, k) = c2(n + k);
        a.at(Photons::p02, k) = c2(2 * n + k);
    }
    return a;
}

AnalyticResult steady_amplitudes(const ModelParams& p, const AnalyticOptions& opt) {
    const bool closed = opt.prefer_closed_form && p.g_L == p.g_R && p.kappa_L == p.kappa_R;
    auto solve = [&](int k_max) {
        return closed ? steady_amplitudes_closed(p, k_max) : steady_amplitudes_linear(p, k_max);
    };
    auto tail = [](const AmplitudeSet& a) {
        double t = 0.0;
        for (int c = 1; c < kPhotonConfigs; ++c) t = std::max(t, a.tail_fraction(static_cast<Photons>(c)));
        return t;
    };
    AnalyticResult r;
    r.amplitudes = solve(opt.k_max);
    r.tail_fraction = tail(r.amplitudes);
    if (r.tail_fraction > opt.tail_tolerance) {
        r.amplitudes = solve(2 * opt.k_max);
        r.tail_fraction = tail(r.amplitudes);
        r.extended = true;
    }
    return r;
}

Occupations occupations(const AmplitudeSet& a) {
    Occupations o;
    o.norm = a.norm();
    o.P_L1_shortcut = a.weight(Photons::p10);
    o.P_R1_shortcut = a.weight(Photons::p01);
    o.P_L2_shortcut = a.weight(Photons::p20);
    o.P_R2_shortcut = a.weight(Photons::p02);
    o.P_L1 = o.P_L1_shortcut / o.norm;
    o.P_R1 = o.P_R1_shortcut / o.norm;
    o.P_L2 = o.P_L2_shortcut / o.norm;
    o.P_R2 = o.P_R2_shortcut / o.norm;
    return o;
}

G2Value g2_analytic(const AmplitudeSet& a, Mode mode) {
    if (mode == Mode::b) throw PreconditionError("g2_analytic: mode must be L or R");
    const Occupations o = occupations(a);
    const double P1 = mode == Mode::L ? o.P_L1 : o.P_R1;
    const double P2 = mode == Mode::L ? o.P_L2 : o.P_R2;
    const double P1s = mode == Mode::L ? o.P_L1_shortcut : o.P_R1_shortcut;
    const double P2s = mode == Mode::L ? o.P_L2_shortcut : o.P_R2_shortcut;
    G2Value g;
    if (!(P1 > 0.0)) return g;
    g.defined = true;
    g.unsimplified = 2.0 * P2 / ((P1 + 2.0 * P2) * (P1 + 2.0 * P2));
    g.simplified = 2.0 * P2s / (P1s * P1s);
    return g;
}

}  // namespace blockade
