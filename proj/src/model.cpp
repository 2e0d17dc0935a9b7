#include "blockade/model.hpp"

#include <cmath>
#include <sstream>

#include "blockade/errors.hpp"

namespace blockade {

namespace {

Diagnostic make(std::string code, Severity s, bool passed, std::string msg) {
    return Diagnostic{std::move(code), s, passed, std::move(msg)};
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

std::vector<Diagnostic> validate_params(const ModelParams& p) {
    std::vector<Diagnostic> out;
    auto error_if = [&](bool bad, const char* code, const std::string& msg) {
        if (bad) out.push_back(make(code, Severity::error, false, msg));
    };
    error_if(!(p.omega_M > 0.0), "omega_M", "omega_M must be positive, got " + fmt(p.omega_M));
    error_if(p.kappa_L < 0.0 || p.kappa_R < 0.0 || p.kappa_b < 0.0, "kappa",
             "decay rates must be non-negative");
    error_if(p.n_bar_b < 0.0, "n_bar_b", "n_bar_b must be non-negative, got " + fmt(p.n_bar_b));
    error_if(p.J < 0.0, "J",
             "J must be non-negative; flip the sign of a_R (a_R -> -a_R) to map J -> -J and pass |J|");
    error_if(!std::isfinite(p.delta_L) || !std::isfinite(p.delta_R) || !std::isfinite(p.g_L) ||
                 !std::isfinite(p.g_R) || !std::isfinite(p.Omega) || !std::isfinite(p.J) || !std::isfinite(p.kappa_L) ||
                 !std::isfinite(p.kappa_R) || !std::isfinite(p.kappa_b) || !std::isfinite(p.n_bar_b) ||
                 !std::isfinite(p.omega_M),
             "finite", "all parameters must be finite");
    error_if(!(p.unit_scale > 0.0), "unit_scale", "unit_scale must be positive");

    const double kappa = std::max(p.kappa_L, p.kappa_R);
    const bool sideband = p.omega_M >= kResolvedSidebandRatio * kappa;
    out.push_back(make("resolved_sideband", sideband ? Severity::info : Severity::warning, sideband,
                       "omega_M / kappa = " + fmt(kappa > 0 ? p.omega_M / kappa : INFINITY)));
    const bool normal = p.J >= kNormalModeRatio * kappa;
    out.push_back(make("normal_mode_resolvable", normal ? Severity::info : Severity::warning, normal,
                       "J / kappa = " + fmt(kappa > 0 ? p.J / kappa : INFINITY)));
    const bool weak = p.Omega <= kWeakDrivingRatio * p.kappa_L;
    out.push_back(make("weak_driving", weak ? Severity::info : Severity::warning, weak,
                       "Omega / kappa_L = " + fmt(p.kappa_L > 0 ? p.Omega / p.kappa_L : INFINITY)));
    return out;
}

void require_valid(const ModelParams& p) {
    for (const auto& d : validate_params(p))
        if (d.severity == Severity::error) throw PreconditionError("invalid parameters: " + d.message);
}

ModeOperators mode_operators(const TruncationSpec& t) {
    ModeOperators m;
    m.a_L = kron_embed(annihilation(t.n_max_L), Mode::L, t);
    m.a_R = kron_embed(annihilation(t.n_max_R), Mode::R, t);
    m.b = kron_embed(annihilation(t.n_max_b), Mode::b, t);
    m.n_L = kron_embed(number_operator(t.n_max_L), Mode::L, t);
    m.n_R = kron_embed(number_operator(t.n_max_R), Mode::R, t);
    m.n_b = kron_embed(number_operator(t.n_max_b), Mode::b, t);
    m.identity = SparseOperator::identity(t.dim());
    return m;
}

SparseOperator build_h_sys(const ModelParams& p, const TruncationSpec& t) {
    require_valid(p);
    t.validate();
    const auto m = mode_operators(t);
    const auto x = m.b + m.b.adjoint();
    const auto hop = m.a_L.adjoint() * m.a_R + m.a_R.adjoint() * m.a_L;
    return m.n_L * p.delta_L + m.n_R * p.delta_R + m.n_b * p.omega_M + hop * p.J -
           (m.n_L * p.g_L + m.n_R * p.g_R) * x;
}

SparseOperator build_h_I(const ModelParams& p, const TruncationSpec& t) {
    const auto a_L = kron_embed(annihilation(t.n_max_L), Mode::L, t);
    return build_h_sys(p, t) + (a_L + a_L.adjoint()) * p.Omega;
}

SparseOperator build_h_eff(const ModelParams& p, const TruncationSpec& t) {
    const auto n_L = kron_embed(number_operator(t.n_max_L), Mode::L, t);
    const auto n_R = kron_embed(number_operator(t.n_max_R), Mode::R, t);
    return build_h_I(p, t) - (n_L * p.kappa_L + n_R * p.kappa_R) * Complex(0.0, 0.5);
}

SparseOperator total_photon_number(const TruncationSpec& t) {
    return kron_embed(number_operator(t.n_max_L), Mode::L, t) + kron_embed(number_operator(t.n_max_R), Mode::R, t);
}

}  // namespace blockade
