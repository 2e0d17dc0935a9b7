#include "blockade/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "blockade/errors.hpp"

namespace blockade {

namespace {

constexpr double kClampWindow = 1e-12;

void normalize_with_sign(std::vector<double>& c) {
    double n = 0.0;
    for (double v : c) n += v * v;
    n = std::sqrt(n);
    for (double& v : c) v /= n;
    for (double v : c) {
        if (std::abs(v) > 1e-12) {
            if (v < 0) for (double& w : c) w = -w;
            break;
        }
    }
}

bool displaced_frames_differ(const ModelParams& p) { return p.g_L != p.g_R; }

// Null vector of the symmetric tridiagonal 3x3 block minus eps, from the cross product
// of its two most independent rows.
std::vector<double> null_vector(const std::array<std::array<double, 3>, 3>& m) {
    auto cross = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
        return std::array<double, 3>{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
    };
    std::array<double, 3> best{0, 0, 0};
    double best_norm = -1.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            const auto c = cross(m[i], m[j]);
            const double nn = c[0] * c[0] + c[1] * c[1] + c[2] * c[2];
            if (nn > best_norm) {
                best_norm = nn;
                best = c;
            }
        }
    if (best_norm <= 0.0) return {1.0, 0.0, 0.0};
    return {best[0], best[1], best[2]};
}

}  // namespace

std::string branch_label(int sector, Branch b) {
    const std::string n = std::to_string(sector);
    switch (b) {
        case Branch::minus: return n + "-";
        case Branch::plus: return n + "+";
        case Branch::zero: return sector == 0 ? "0" : n + "0";
    }
    return n;
}

double bare_eigenvalue(int m, int n, int k, const ModelParams& p) {
    if (m < 0 || n < 0 || k < 0) throw PreconditionError("bare_eigenvalue: negative occupation");
    const double s = p.g_L * m + p.g_R * n;
    return m * p.delta_L + n * p.delta_R + k * p.omega_M - s * s / p.omega_M;
}

double conditional_displacement(int m, int n, const ModelParams& p) {
    return (p.g_L * m + p.g_R * n) / p.omega_M;
}

EigenLevel zero_photon_level(int k, const ModelParams& p) {
    return EigenLevel{0, Branch::zero, k, bare_eigenvalue(0, 0, k, p), {1.0}, false};
}

std::array<EigenLevel, 2> single_photon_eigs(int k, const ModelParams& p) {
    const double e10 = bare_eigenvalue(1, 0, k, p);
    const double e01 = bare_eigenvalue(0, 1, k, p);
    const double J = p.J;
    const double mean = 0.5 * (e10 + e01);
    const double half = 0.5 * std::sqrt((e10 - e01) * (e10 - e01) + 4.0 * J * J);
    const bool approx = displaced_frames_differ(p);

    std::array<EigenLevel, 2> out;
    const double values[2] = {mean - half, mean + half};
    const Branch branches[2] = {Branch::minus, Branch::plus};
    for (int i = 0; i < 2; ++i) {
        const double eps = values[i];
        std::vector<double> c;
        if (J == 0.0) {
            // Decoupled: the level is whichever bare state it equals.
            const bool is_L = (e10 <= e01) == (i == 0);
            c = is_L ? std::vector<double>{1.0, 0.0} : std::vector<double>{0.0, 1.0};
        } else {
            const double d = eps - e10;
            const double n = std::sqrt(J * J + d * d);
            c = {J / n, d / n};
        }
        normalize_with_sign(c);
        out[i] = EigenLevel{1, branches[i], k, eps, std::move(c), approx};
    }
    return out;
}

std::array<EigenLevel, 3> two_photon_eigs(int k, const ModelParams& p) {
    const double e20 = bare_eigenvalue(2, 0, k, p);
    const double e11 = bare_eigenvalue(1, 1, k, p);
    const double e02 = bare_eigenvalue(0, 2, k, p);
    const double J = p.J;
    const double J2 = J * J;

    // The cubic is solved about the mean diagonal so large sideband offsets k*omega_M
    // do not swamp the O(J) splittings.
    const double shift = (e20 + e11 + e02) / 3.0;
    const double f20 = e20 - shift, f11 = e11 - shift, f02 = e02 - shift;
    const double pk = -(f02 + f11 + f20);
    const double qk = f11 * f02 + f11 * f20 + f20 * f02 - 4.0 * J2;
    const double rk = 2.0 * J2 * (f02 + f20) - f11 * f02 * f20;
    const double ak = qk - pk * pk / 3.0;
    const double bk = rk + 2.0 * pk * pk * pk / 27.0 - pk * qk / 3.0;

    double values[3];
    const double scale = std::max({J, std::abs(f20), std::abs(f11), std::abs(f02), 1e-300});
    if (std::abs(ak) <= 1e-26 * scale * scale) {
        values[0] = values[1] = values[2] = -pk / 3.0;
    } else {
        double arg = -3.0 * bk * std::sqrt(-3.0 * ak) / (2.0 * ak * ak);
        if (std::abs(arg) > 1.0) {
            if (std::abs(arg) - 1.0 > kClampWindow)
                throw NumericalError("two_photon_eigs: arccos argument " + std::to_string(arg) + " outside [-1, 1]");
            arg = std::clamp(arg, -1.0, 1.0);
        }
        const double phi = std::acos(arg);
        const double s = std::sqrt(-3.0 * ak);
        const double c3 = std::cos(phi / 3.0);
        const double s3 = std::sin(phi / 3.0);
        values[0] = -pk / 3.0 - s / 3.0 * (c3 + std::sqrt(3.0) * s3);
        values[1] = -pk / 3.0 - s / 3.0 * (c3 - std::sqrt(3.0) * s3);
        values[2] = -pk / 3.0 + 2.0 * s / 3.0 * c3;
    }
    // One Newton step on the characteristic polynomial removes the arccos rounding.
    for (double& v : values) {
        const double f = ((v + pk) * v + qk) * v + rk;
        const double df = (3.0 * v + 2.0 * pk) * v + qk;
        if (std::abs(df) > 1e-8 * scale * scale) v -= f / df;
        v += shift;
    }
    std::sort(values, values + 3);

    const bool approx = displaced_frames_differ(p);
    const Branch branches[3] = {Branch::minus, Branch::zero, Branch::plus};
    const double r2J = std::sqrt(2.0) * J;
    std::array<EigenLevel, 3> out;
    for (int i = 0; i < 3; ++i) {
        const double eps = values[i];
        const double d20 = e20 - eps;
        const double d02 = e02 - eps;
        // Sign of the hopping entries chosen so the vector solves the block with +sqrt(2) J couplings.
        std::vector<double> c = {-r2J * d02, d20 * d02, -r2J * d20};
        const double norm2 = c[0] * c[0] + c[1] * c[1] + c[2] * c[2];
        const double ref = std::max({J2, d20 * d20, d02 * d02, 1e-300});
        if (!(norm2 > 1e-16 * ref * ref)) {
            const std::array<std::array<double, 3>, 3> m = {{{d20, r2J, 0.0}, {r2J, e11 - eps, r2J}, {0.0, r2J, d02}}};
            c = null_vector(m);
        }
        normalize_with_sign(c);
        out[i] = EigenLevel{2, branches[i], k, eps, std::move(c), approx};
    }
    // With J = 0 the levels are bare states; pick the matching basis vector for each.
    if (J == 0.0) {
        const double bare[3] = {e20, e11, e02};
        std::vector<int> used;
        for (auto& lvl : out) {
            int best = -1;
            for (int j = 0; j < 3; ++j) {
                if (std::find(used.begin(), used.end(), j) != used.end()) continue;
                if (best < 0 || std::abs(bare[j] - lvl.value) < std::abs(bare[best] - lvl.value)) best = j;
            }
            used.push_back(best);
            lvl.coeffs = {0.0, 0.0, 0.0};
            lvl.coeffs[static_cast<std::size_t>(best)] = 1.0;
        }
    }
    return out;
}

std::vector<Resonance> resonance_detunings(int k, const ModelParams& p) {
    ModelParams p0 = p;
    p0.delta_R = p.delta_R - p.delta_L;
    p0.delta_L = 0.0;
    std::vector<Resonance> out;
    for (const auto& lvl : single_photon_eigs(k, p0)) out.push_back({1, lvl.branch, k, -lvl.value});
    for (const auto& lvl : two_photon_eigs(k, p0)) out.push_back({2, lvl.branch, k, -0.5 * lvl.value});
    return out;
}

std::vector<double> resonant_couplings(int k, Branch branch, const ModelParams& p) {
    if (p.g_L != p.g_R) throw PreconditionError("resonant_couplings: requires g_L == g_R");
    if (k < 0) throw PreconditionError("resonant_couplings: negative sideband index");
    if (branch == Branch::zero) throw PreconditionError("resonant_couplings: branch must be + or -");
    const double w = p.omega_M;
    const double kw2 = k * w * w;
    const double sgn = branch == Branch::plus ? -1.0 : 1.0;
    const double radicands[3] = {
        branch == Branch::plus ? kw2 + 4.0 * sgn * p.J * w : kw2,
        kw2 + 2.0 * sgn * p.J * w,
        branch == Branch::plus ? kw2 : kw2 + 4.0 * sgn * p.J * w,
    };
    std::vector<double> out;
    for (double r : radicands)
        if (r >= 0.0) out.push_back(std::sqrt(r / 2.0));
    return out;
}

std::vector<EigenLevel> level_table(int k_max, const ModelParams& p) {
    std::vector<EigenLevel> out;
    for (int k = 0; k <= k_max; ++k) {
        out.push_back(zero_photon_level(k, p));
        for (auto& l : single_photon_eigs(k, p)) out.push_back(l);
        for (auto& l : two_photon_eigs(k, p)) out.push_back(l);
    }
    return out;
}

}  // namespace blockade
