#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "blockade/model.hpp"

namespace blockade {

enum class AmplitudeMethod { closed_form, linear_solve };

std::string to_string(AmplitudeMethod m);

// Photon configurations (m, n) with m + n <= 2.
enum class Photons { p00 = 0, p10, p01, p20, p11, p02 };
inline constexpr int kPhotonConfigs = 6;

struct AmplitudeSet {
    int k_max = 0;
    AmplitudeMethod method = AmplitudeMethod::closed_form;
    // amplitudes[config][k]
    std::array<std::vector<Complex>, kPhotonConfigs> amplitudes;

    Complex& at(Photons c, int k) { return amplitudes[static_cast<int>(c)][static_cast<std::size_t>(k)]; }
    Complex at(Photons c, int k) const { return amplitudes[static_cast<int>(c)][static_cast<std::size_t>(k)]; }
    double weight(Photons c) const;
    // Sum of |C|^2 over everything, including C_{0,0,0} = 1.
    double norm() const;
    // Fraction of a sector's weight carried by the top three phonon indices.
    double tail_fraction(Photons c) const;
};

// Pi_{k,l} = <k|D(-g/omega_M)|l> (real).
Eigen::MatrixXd pi_matrix(const ModelParams& p, int k_max);
// F_{k,l} = <k~(m1,n1)|l~(m2,n2)>.
Eigen::MatrixXd overlap_matrix(const ModelParams& p, int m1, int n1, int m2, int n2, int k_max);

AmplitudeSet steady_amplitudes_closed(const ModelParams& p, int k_max);
AmplitudeSet steady_amplitudes_linear(const ModelParams& p, int k_max);

struct AnalyticOptions {
    int k_max = 15;
    double tail_tolerance = 1e-8;
    // Use the closed form whenever its preconditions hold.
    bool prefer_closed_form = true;
};

struct AnalyticResult {
    AmplitudeSet amplitudes;
    double tail_fraction = 0.0;
    bool extended = false;
};

// Picks the closed form when g_L == g_R and kappa_L == kappa_R, otherwise the linear solve;
// doubles k_max once when the tail monitor trips.
AnalyticResult steady_amplitudes(const ModelParams& p, const AnalyticOptions& opt = {});

struct Occupations {
    double P_L1 = 0, P_R1 = 0, P_L2 = 0, P_R2 = 0;
    double norm = 1.0;
    // Same occupations with the norm taken as 1.
    double P_L1_shortcut = 0, P_R1_shortcut = 0, P_L2_shortcut = 0, P_R2_shortcut = 0;
};

Occupations occupations(const AmplitudeSet& a);

struct G2Value {
    double unsimplified = 0.0;
    double simplified = 0.0;
    bool defined = false;
};

G2Value g2_analytic(const AmplitudeSet& a, Mode mode);

}  // namespace blockade
