#include "blockade/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <thread>

#include "blockade/analytic_blockade.hpp"
#include "blockade/errors.hpp"

namespace blockade {

std::string to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::delta: return "delta";
        case SweepAxis::g: return "g";
        case SweepAxis::kappa: return "kappa";
        case SweepAxis::n_bar_b: return "n_bar_b";
    }
    return "?";
}

std::string to_string(LockResonance l) {
    switch (l) {
        case LockResonance::none: return "none";
        case LockResonance::plus: return "plus";
        case LockResonance::minus: return "minus";
    }
    return "?";
}

std::string to_string(ExtremumKind k) { return k == ExtremumKind::dip ? "dip" : "peak"; }

void SweepConfig::validate() const {
    require_valid(base);
    truncation.validate();
    if (values.empty()) {
        if (points < 2) throw ConfigError("grid needs points >= 2", 0, "points");
        if (!(stop > start)) throw ConfigError("grid needs stop > start", 0, "stop");
    } else {
        for (std::size_t i = 1; i < values.size(); ++i)
            if (!(values[i] > values[i - 1])) throw ConfigError("explicit values must be strictly increasing", 0, "values");
    }
    for (const auto& w : refine)
        if (!(w.step > 0.0) || !(w.halfwidth >= 0.0)) throw ConfigError("refine window needs step > 0", 0, "refine");
    if (!analytic && !lindblad) throw ConfigError("no method selected", 0, "methods");
    if (lock != LockResonance::none && axis == SweepAxis::delta)
        throw ConfigError("lock_resonance cannot be combined with a delta sweep", 0, "lock_resonance");
    if (threads < 1) throw ConfigError("threads must be >= 1", 0, "threads");
}

std::vector<double> sweep_grid(const SweepConfig& cfg) {
    std::vector<double> g = cfg.values;
    if (g.empty()) {
        const double h = (cfg.stop - cfg.start) / (cfg.points - 1);
        for (int i = 0; i < cfg.points; ++i) g.push_back(i + 1 == cfg.points ? cfg.stop : cfg.start + i * h);
    }
    for (const auto& w : cfg.refine) {
        const int n = static_cast<int>(std::floor(2.0 * w.halfwidth / w.step + 1e-9));
        for (int i = 0; i <= n; ++i) g.push_back(w.center - w.halfwidth + i * w.step);
    }
    std::sort(g.begin(), g.end());
    std::vector<double> out;
    for (double v : g) {
        const double r = std::round(v * 1e12) / 1e12;
        if (out.empty() || std::abs(r - out.back()) > 1e-11) out.push_back(r);
    }
    return out;
}

ModelParams params_at(const SweepConfig& cfg, double x) {
    ModelParams p = cfg.base;
    const double offset = cfg.base.delta_R - cfg.base.delta_L;
    switch (cfg.axis) {
        case SweepAxis::delta:
            p.delta_L = x;
            p.delta_R = x + offset;
            break;
        case SweepAxis::g:
            p.g_R = cfg.base.g_L != 0.0 ? x * cfg.base.g_R / cfg.base.g_L : x;
            p.g_L = x;
            break;
        case SweepAxis::kappa:
            p.kappa_L = x;
            p.kappa_R = x;
            break;
        case SweepAxis::n_bar_b: p.n_bar_b = x; break;
    }
    if (cfg.lock != LockResonance::none) {
        const double d = p.g_L * p.g_L / p.omega_M + (cfg.lock == LockResonance::plus ? -p.J : p.J);
        p.delta_L = d;
        p.delta_R = d + offset;
    }
    if (cfg.omega_over_kappa_L) p.Omega = *cfg.omega_over_kappa_L * p.kappa_L;
    return p;
}

CurvePoint analytic_point(const ModelParams& p, double axis_value, int k_max) {
    CurvePoint c;
    c.axis_value = axis_value;
    c.method = "analytic";
    AnalyticOptions opt;
    opt.k_max = k_max;
    const auto r = steady_amplitudes(p, opt);
    const auto o = occupations(r.amplitudes);
    c.P_L1 = o.P_L1;
    c.P_R1 = o.P_R1;
    c.P_L2 = o.P_L2;
    c.P_R2 = o.P_R2;
    const auto gl = g2_analytic(r.amplitudes, Mode::L);
    const auto gr = g2_analytic(r.amplitudes, Mode::R);
    if (gl.defined) {
        c.g2_L = gl.unsimplified;
        c.g2_L_simplified = gl.simplified;
    }
    if (gr.defined) {
        c.g2_R = gr.unsimplified;
        c.g2_R_simplified = gr.simplified;
    }
    c.residual = r.tail_fraction;
    if (r.tail_fraction > opt.tail_tolerance) c.status = "tail_warning";
    return c;
}

CurvePoint lindblad_point(const ModelParams& p, const TruncationSpec& t, double axis_value,
                          const SteadyStateOptions& opt) {
    CurvePoint c;
    c.axis_value = axis_value;
    c.method = "lindblad";
    const auto L = build_liouvillian(p, t);
    const auto s = steady_state(L, opt);
    const auto o = observables(s.rho, t);
    auto at = [](const std::vector<double>& v, std::size_t i) { return i < v.size() ? v[i] : 0.0; };
    c.P_L1 = at(o.P_L, 1);
    c.P_R1 = at(o.P_R, 1);
    c.P_L2 = at(o.P_L, 2);
    c.P_R2 = at(o.P_R, 2);
    c.g2_L = o.g2_L;
    c.g2_R = o.g2_R;
    c.residual = s.residual;
    if (s.fell_back) c.status = "fallback_" + to_string(s.method_used);
    if (s.residual > opt.residual_tolerance) c.status = "residual_high";
    return c;
}

std::vector<CurvePoint> run_sweep(const SweepConfig& cfg, const ProgressFn& progress) {
    cfg.validate();
    const auto grid = sweep_grid(cfg);
    struct Task {
        bool lindblad;
        std::size_t index;
    };
    std::vector<Task> tasks;
    if (cfg.analytic)
        for (std::size_t i = 0; i < grid.size(); ++i) tasks.push_back({false, i});
    if (cfg.lindblad)
        for (std::size_t i = 0; i < grid.size(); ++i) tasks.push_back({true, i});

    std::vector<CurvePoint> rows(tasks.size());
    std::atomic<std::size_t> next{0}, done{0};
    std::mutex progress_mutex;
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const auto& task = tasks[i];
            const double x = grid[task.index];
            CurvePoint c;
            try {
                const ModelParams p = params_at(cfg, x);
                c = task.lindblad ? lindblad_point(p, cfg.truncation, x)
                                  : analytic_point(p, x, cfg.truncation.k_max_analytic);
            } catch (const std::exception& e) {
                c = CurvePoint{};
                c.axis_value = x;
                c.method = task.lindblad ? "lindblad" : "analytic";
                c.status = std::string("error: ") + e.what();
                std::replace(c.status.begin(), c.status.end(), ',', ';');
                std::replace(c.status.begin(), c.status.end(), '\n', ' ');
            }
            rows[i] = std::move(c);
            const std::size_t d = done.fetch_add(1) + 1;
            if (progress) {
                std::lock_guard<std::mutex> lock(progress_mutex);
                progress(d, tasks.size());
            }
        }
    };
    const int nthreads = std::max(1, std::min<int>(cfg.threads, static_cast<int>(tasks.size())));
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return rows;
}

std::vector<CurvePoint> select_method(const std::vector<CurvePoint>& rows, const std::string& method) {
    std::vector<CurvePoint> out;
    for (const auto& r : rows)
        if (r.method == method) out.push_back(r);
    return out;
}

std::optional<double> curve_field(const CurvePoint& p, const std::string& field) {
    if (field == "P_L1") return p.P_L1;
    if (field == "P_R1") return p.P_R1;
    if (field == "P_L2") return p.P_L2;
    if (field == "P_R2") return p.P_R2;
    if (field == "g2_L") return p.g2_L;
    if (field == "g2_R") return p.g2_R;
    if (field == "g2_L_simplified") return p.g2_L_simplified;
    if (field == "g2_R_simplified") return p.g2_R_simplified;
    if (field == "residual") return p.residual;
    throw PreconditionError("unknown curve field '" + field + "'");
}

std::vector<Extremum> detect_extrema(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DimensionError("detect_extrema: x and y differ in length");
    std::vector<double> xs, ly;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (std::isfinite(y[i]) && y[i] > 0.0) {
            xs.push_back(x[i]);
            ly.push_back(std::log(y[i]));
        }
    std::vector<Extremum> out;
    const std::size_t n = xs.size();
    if (n < 7) return out;
    for (std::size_t i = 3; i + 3 < n; ++i) {
        const bool dip = ly[i] < ly[i - 1] && ly[i] < ly[i + 1];
        const bool peak = ly[i] > ly[i - 1] && ly[i] > ly[i + 1];
        if (!dip && !peak) continue;
        // Vertex of the parabola through three nonuniformly spaced samples.
        const double x0 = xs[i - 1], x1 = xs[i], x2 = xs[i + 1];
        const double y0 = ly[i - 1], y1 = ly[i], y2 = ly[i + 1];
        const double d01 = (y1 - y0) / (x1 - x0);
        const double d12 = (y2 - y1) / (x2 - x1);
        const double a = (d12 - d01) / (x2 - x0);
        double xr = x1;
        if (a != 0.0) {
            const double b = d01 - a * (x0 + x1);
            xr = std::clamp(-b / (2.0 * a), x0, x2);
        }
        out.push_back({dip ? ExtremumKind::dip : ExtremumKind::peak, x1, xr, std::exp(ly[i])});
    }
    return out;
}

std::vector<Extremum> detect_extrema(const std::vector<CurvePoint>& curve, const std::string& field) {
    std::vector<double> x, y;
    for (const auto& c : curve) {
        const auto v = curve_field(c, field);
        x.push_back(c.axis_value);
        y.push_back(v ? *v : NAN);
    }
    return detect_extrema(x, y);
}

CompareReport compare_report(const std::vector<CurvePoint>& analytic, const std::vector<CurvePoint>& lindblad,
                             const std::string& field, double tolerance) {
    CompareReport r;
    r.field = field;
    r.tolerance = tolerance;
    std::size_t j = 0;
    for (const auto& a : analytic) {
        while (j < lindblad.size() && lindblad[j].axis_value < a.axis_value - 1e-11) ++j;
        if (j >= lindblad.size() || std::abs(lindblad[j].axis_value - a.axis_value) > 1e-11) {
            ++r.skipped;
            continue;
        }
        const auto va = curve_field(a, field);
        const auto vl = curve_field(lindblad[j], field);
        if (!va || !vl || !std::isfinite(*va) || !std::isfinite(*vl) || *vl == 0.0) {
            ++r.skipped;
            continue;
        }
        const double dev = *va == *vl ? 0.0 : std::abs(*va - *vl) / std::abs(*vl);
        r.rows.push_back({a.axis_value, *va, *vl, dev});
    }
    std::vector<double> devs;
    for (const auto& row : r.rows) {
        devs.push_back(row.relative_deviation);
        if (row.relative_deviation > r.max_deviation || devs.size() == 1) {
            r.max_deviation = row.relative_deviation;
            r.max_location = row.axis_value;
        }
    }
    if (!devs.empty()) {
        std::sort(devs.begin(), devs.end());
        const std::size_t m = devs.size() / 2;
        r.median_deviation = devs.size() % 2 ? devs[m] : 0.5 * (devs[m - 1] + devs[m]);
    }
    r.passed = !r.rows.empty() && r.max_deviation < tolerance;
    return r;
}

std::string format_report(const CompareReport& r) {
    std::ostringstream os;
    char buf[160];
    os << "field " << r.field << ", tolerance " << r.tolerance << "\n";
    std::snprintf(buf, sizeof buf, "%14s %16s %16s %12s\n", "axis", "analytic", "lindblad", "rel_dev");
    os << buf;
    for (const auto& row : r.rows) {
        std::snprintf(buf, sizeof buf, "%14.6f %16.8g %16.8g %12.4e%s\n", row.axis_value, row.analytic, row.lindblad,
                      row.relative_deviation, row.relative_deviation >= r.tolerance ? "  *" : "");
        os << buf;
    }
    std::snprintf(buf, sizeof buf, "max %.4e at %.6f, median %.4e, compared %zu, skipped %zu: %s\n", r.max_deviation,
                  r.max_location, r.median_deviation, r.rows.size(), r.skipped, r.passed ? "PASS" : "FAIL");
    os << buf;
    return os.str();
}

}  // namespace blockade
