#pragma once

#include <string>
#include <vector>

#include "blockade/fock_algebra.hpp"

namespace blockade {

// All frequencies and rates in units of omega_M unless unit_scale != 1.
struct ModelParams {
    double omega_M = 1.0;
    double delta_L = 0.0;
    double delta_R = 0.0;
    double J = 0.05;
    double g_L = 0.2;
    double g_R = 0.2;
    double Omega = 0.002;
    double kappa_L = 0.01;
    double kappa_R = 0.01;
    double kappa_b = 0.001;
    double n_bar_b = 0.0;
    // Multiplier applied when reporting frequencies in physical units.
    double unit_scale = 1.0;

    bool operator==(const ModelParams&) const = default;
};

enum class Severity { info, warning, error };

struct Diagnostic {
    std::string code;
    Severity severity = Severity::info;
    bool passed = true;
    std::string message;
};

// Resolved sideband needs omega_M >= 10 kappa; resolvable normal modes need J >= 3 kappa.
inline constexpr double kResolvedSidebandRatio = 10.0;
inline constexpr double kNormalModeRatio = 3.0;
inline constexpr double kWeakDrivingRatio = 0.5;

std::vector<Diagnostic> validate_params(const ModelParams& p);
// Throws PreconditionError naming the first error-level diagnostic.
void require_valid(const ModelParams& p);

// Bare-mode operators on the full (L, R, b) space.
struct ModeOperators {
    SparseOperator a_L, a_R, b;
    SparseOperator n_L, n_R, n_b;
    SparseOperator identity;
};

ModeOperators mode_operators(const TruncationSpec& t);

SparseOperator build_h_sys(const ModelParams& p, const TruncationSpec& t);
SparseOperator build_h_I(const ModelParams& p, const TruncationSpec& t);
SparseOperator build_h_eff(const ModelParams& p, const TruncationSpec& t);
SparseOperator total_photon_number(const TruncationSpec& t);

}  // namespace blockade
