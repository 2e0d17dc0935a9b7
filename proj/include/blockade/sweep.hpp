#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "blockade/lindblad.hpp"
#include "blockade/model.hpp"

namespace blockade {

enum class SweepAxis { delta, g, kappa, n_bar_b };
enum class LockResonance { none, plus, minus };

std::string to_string(SweepAxis a);
std::string to_string(LockResonance l);

// Extra grid points on [center - halfwidth, center + halfwidth] with the given step.
struct RefineWindow {
    double center = 0.0;
    double halfwidth = 0.0;
    double step = 0.0;
    bool operator==(const RefineWindow&) const = default;
};

struct SweepConfig {
    ModelParams base;
    SweepAxis axis = SweepAxis::delta;
    double start = -1.15;
    double stop = 0.35;
    int points = 1501;
    // When non-empty, replaces the (start, stop, points) grid.
    std::vector<double> values;
    std::vector<RefineWindow> refine;
    bool analytic = true;
    bool lindblad = false;
    TruncationSpec truncation;
    // Ties Delta to the swept coupling: plus -> Delta = g^2/omega_M - J, minus -> + J.
    LockResonance lock = LockResonance::none;
    // Sets Omega = ratio * kappa_L after the axis value is applied.
    std::optional<double> omega_over_kappa_L;
    std::string output;
    int threads = 1;

    void validate() const;
};

std::vector<double> sweep_grid(const SweepConfig& cfg);
ModelParams params_at(const SweepConfig& cfg, double x);

struct CurvePoint {
    double axis_value = 0.0;
    double P_L1 = 0.0;
    double P_R1 = 0.0;
    double P_L2 = 0.0;
    double P_R2 = 0.0;
    std::optional<double> g2_L;
    std::optional<double> g2_R;
    std::string method;
    double residual = 0.0;
    std::optional<double> g2_L_simplified;
    std::optional<double> g2_R_simplified;
    std::string status = "ok";
};

CurvePoint analytic_point(const ModelParams& p, double axis_value, int k_max);
CurvePoint lindblad_point(const ModelParams& p, const TruncationSpec& t, double axis_value,
                          const SteadyStateOptions& opt = {});

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

// Rows: every analytic point in grid order, then every lindblad point.
std::vector<CurvePoint> run_sweep(const SweepConfig& cfg, const ProgressFn& progress = {});

std::vector<CurvePoint> select_method(const std::vector<CurvePoint>& rows, const std::string& method);
std::optional<double> curve_field(const CurvePoint& p, const std::string& field);

enum class ExtremumKind { dip, peak };
std::string to_string(ExtremumKind k);

struct Extremum {
    ExtremumKind kind = ExtremumKind::dip;
    double location = 0.0;
    double refined_location = 0.0;
    double value = 0.0;
};

// Strict local extrema of log(y); positive samples only; 3-step boundary guard.
std::vector<Extremum> detect_extrema(const std::vector<double>& x, const std::vector<double>& y);
std::vector<Extremum> detect_extrema(const std::vector<CurvePoint>& curve, const std::string& field);

struct ComparisonRow {
    double axis_value = 0.0;
    double analytic = 0.0;
    double lindblad = 0.0;
    double relative_deviation = 0.0;
};

struct CompareReport {
    std::string field;
    double tolerance = 0.25;
    std::vector<ComparisonRow> rows;
    std::size_t skipped = 0;
    double max_deviation = 0.0;
    double max_location = 0.0;
    double median_deviation = 0.0;
    bool passed = true;
};

CompareReport compare_report(const std::vector<CurvePoint>& analytic, const std::vector<CurvePoint>& lindblad,
                             const std::string& field = "g2_L", double tolerance = 0.25);
std::string format_report(const CompareReport& r);

}  // namespace blockade
