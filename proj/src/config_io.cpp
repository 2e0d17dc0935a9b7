#include "blockade/config_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "blockade/errors.hpp"

namespace blockade {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    return out;
}

double to_double(const std::string& v, int line, const std::string& key) {
    double x = 0.0;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    if (!v.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, x);
    if (ec != std::errc() || ptr != last || v.empty())
        throw ConfigError("line " + std::to_string(line) + ": key '" + key + "' expects a number, got '" + v + "'", line,
                          key);
    return x;
}

int to_int(const std::string& v, int line, const std::string& key) {
    const double x = to_double(v, line, key);
    if (x != std::floor(x) || std::abs(x) > 1e9)
        throw ConfigError("line " + std::to_string(line) + ": key '" + key + "' expects an integer, got '" + v + "'",
                          line, key);
    return static_cast<int>(x);
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : "nan"; }

using Setter = std::function<void(SweepConfig&, const std::string&, int, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> m = [] {
        std::map<std::string, Setter> s;
        auto real = [&](const char* key, double ModelParams::*field) {
            s[key] = [field](SweepConfig& c, const std::string& v, int l, const std::string& k) {
                c.base.*field = to_double(v, l, k);
            };
        };
        real("omega_M", &ModelParams::omega_M);
        real("delta_L", &ModelParams::delta_L);
        real("delta_R", &ModelParams::delta_R);
        real("J", &ModelParams::J);
        real("g_L", &ModelParams::g_L);
        real("g_R", &ModelParams::g_R);
        real("Omega", &ModelParams::Omega);
        real("kappa_L", &ModelParams::kappa_L);
        real("kappa_R", &ModelParams::kappa_R);
        real("kappa_b", &ModelParams::kappa_b);
        real("n_bar_b", &ModelParams::n_bar_b);
        real("unit_scale", &ModelParams::unit_scale);
        s["delta"] = [](SweepConfig& c, const std::string& v, int l, const std::string& k) {
            c.base.delta_L = c.base.delta_R = to_double(v, l, k);
        };
        s["g"] = [](SweepConfig& c, const std::string& v, int l, const std::string& k) {
            c.base.g_L = c.base.g_R = to_double(v, l, k);
        };
        s["kappa"] = [](SweepConfig& c, const std::string& v, int l, const std::string& k) {
            c.base.kappa_L = c.base.kappa_R = to_double(v, l, k);
        };
        s["Omega_over_kappa_L"] = [](SweepConfig& c, const std::string& v, int l, const std::string& k) {
            c.omega_over_kappa_L = to_double(v, l, k);
        };
        s["axis"] = [](SweepConfig& c, const std::string& v, int l, const std::string& k) {
            if (v == "delta") c.axis = SweepAxis::delta;
            else if (v == "g") c.axis = SweepAxis::g;
            else if (v == "kappa") c.axis = SweepAxis::kappa;
            else if (v == "n_bar_b") c.axis = SweepAxis::n_bar_b;
            else throw ConfigError("line " + std::to_string(l) + ": key '" + k + "' must be one of delta, g, kappa, n_bar_b", l, k);
        };
        s["start"] = [](SweepConfig& c, const std::string& v, int l, const std::string& k) { c.start = to_double(v, l, k); };
        s["stop"] = [](SweepConfig& c, const std::string& v, int l, const std::string& k) { c.stop = to_double(v, l, k); };
        s["points"] = [](SweepConfig& c, const std::string& v, int l, const std::string& k) { c.points = to_int(v, l, k); };
        s["values"] = [](SweepConfig& c, const std::string& v, int l, const std::string& k) {
            c.values.clear();
            for (const auto& x : split(v, ',')) c.values.push_back(to_double(x, l, k));
        };
        s["refine"] = [](SweepConfig& c, const std::string& v, int l, const std::string& k) {
            c.refine.clear();
            for (const auto& w : split(v, ',')) {
                const auto parts = split(w, ':');
                if (parts.size() != 3)
                    throw ConfigError("line " + std::to_string(l) + ": key '" + k + "' expects center:halfwidth:step", l, k);
                c.refine.push_back({to_double(parts[0], l, k), to_double(parts[1], l, k), to_double(parts[2], l, k)});
            }
        };
        s["methods"] = [](SweepConfig& c, const std::string& v, int l, const std::string& k) {
            c.analytic = c.lindblad = false;
            for (const auto& m : split(v, ',')) {
                if (m == "analytic") c.analytic = true;
                else if (m == "lindblad") c.lindblad = true;
                else if (m == "both") c.analytic = c.lindblad = true;
                else throw ConfigError("line " + std::to_string(l) + ": key '" + k + "' has unknown method '" + m + "'", l, k);
            }
        };
        auto count = [&](const char* key, int TruncationSpec::*field) {
            s[key] = [field](SweepConfig& c, const std::string& v, int l, const std::string& k) {
                c.truncation.*field = to_int(v, l, k);
            };
        };
        count("n_max_L", &TruncationSpec::n_max_L);
        count("n_max_R", &TruncationSpec::n_max_R);
        count("n_max_b", &TruncationSpec::n_max_b);
        count("k_max_analytic", &TruncationSpec::k_max_analytic);
        s["memory_budget_bytes"] = [](SweepConfig& c, const std::string& v, int l, const std::string& k) {
            c.truncation.memory_budget_bytes = to_double(v, l, k);
        };
        s["lock_resonance"] = [](SweepConfig& c, const std::string& v, int l, const std::string& k) {
            if (v == "none") c.lock = LockResonance::none;
            else if (v == "+" || v == "plus") c.lock = LockResonance::plus;
            else if (v == "-" || v == "minus") c.lock = LockResonance::minus;
            else throw ConfigError("line " + std::to_string(l) + ": key '" + k + "' must be none, + or -", l, k);
        };
        s["output"] = [](SweepConfig& c, const std::string& v, int, const std::string&) { c.output = v; };
        s["threads"] = [](SweepConfig& c, const std::string& v, int l, const std::string& k) { c.threads = to_int(v, l, k); };
        return s;
    }();
    return m;
}

}  // namespace

SweepConfig parse_config(const std::string& text) {
    SweepConfig cfg;
    std::istringstream is(text);
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line) + ": expected 'key = value', got '" + s + "'", line, s);
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end())
            throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'", line, key);
        if (value.empty())
            throw ConfigError("line " + std::to_string(line) + ": key '" + key + "' has no value", line, key);
        it->second(cfg, value, line, key);
    }
    return cfg;
}

SweepConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string write_config(const SweepConfig& c) {
    std::ostringstream os;
    const auto& p = c.base;
    os << "omega_M = " << num(p.omega_M) << "\n"
       << "delta_L = " << num(p.delta_L) << "\n"
       << "delta_R = " << num(p.delta_R) << "\n"
       << "J = " << num(p.J) << "\n"
       << "g_L = " << num(p.g_L) << "\n"
       << "g_R = " << num(p.g_R) << "\n"
       << "Omega = " << num(p.Omega) << "\n"
       << "kappa_L = " << num(p.kappa_L) << "\n"
       << "kappa_R = " << num(p.kappa_R) << "\n"
       << "kappa_b = " << num(p.kappa_b) << "\n"
       << "n_bar_b = " << num(p.n_bar_b) << "\n"
       << "unit_scale = " << num(p.unit_scale) << "\n";
    if (c.omega_over_kappa_L) os << "Omega_over_kappa_L = " << num(*c.omega_over_kappa_L) << "\n";
    os << "axis = " << to_string(c.axis) << "\n"
       << "start = " << num(c.start) << "\n"
       << "stop = " << num(c.stop) << "\n"
       << "points = " << c.points << "\n";
    if (!c.values.empty()) {
        os << "values = ";
        for (std::size_t i = 0; i < c.values.size(); ++i) os << (i ? ", " : "") << num(c.values[i]);
        os << "\n";
    }
    if (!c.refine.empty()) {
        os << "refine = ";
        for (std::size_t i = 0; i < c.refine.size(); ++i)
            os << (i ? ", " : "") << num(c.refine[i].center) << ":" << num(c.refine[i].halfwidth) << ":"
               << num(c.refine[i].step);
        os << "\n";
    }
    os << "methods = " << (c.analytic && c.lindblad ? "analytic, lindblad" : c.analytic ? "analytic" : "lindblad")
       << "\n"
       << "n_max_L = " << c.truncation.n_max_L << "\n"
       << "n_max_R = " << c.truncation.n_max_R << "\n"
       << "n_max_b = " << c.truncation.n_max_b << "\n"
       << "k_max_analytic = " << c.truncation.k_max_analytic << "\n"
       << "memory_budget_bytes = " << num(c.truncation.memory_budget_bytes) << "\n"
       << "lock_resonance = " << to_string(c.lock) << "\n";
    if (!c.output.empty()) os << "output = " << c.output << "\n";
    os << "threads = " << c.threads << "\n";
    return os.str();
}

void write_csv(std::ostream& os, const SweepConfig& cfg, const std::vector<CurvePoint>& rows) {
    std::istringstream conf(write_config(cfg));
    std::string line;
    os << "# resolved configuration\n";
    while (std::getline(conf, line))
        if (line.rfind("threads", 0) != 0) os << "# " << line << "\n";
    const auto& cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << "\n";
    for (const auto& r : rows) {
        os << num(r.axis_value) << "," << num(r.P_L1) << "," << num(r.P_R1) << "," << num(r.P_L2) << ","
           << num(r.P_R2) << "," << opt_num(r.g2_L) << "," << opt_num(r.g2_R) << "," << r.method << ","
           << num(r.residual) << "," << opt_num(r.g2_L_simplified) << "," << opt_num(r.g2_R_simplified) << ","
           << r.status << "\n";
    }
}

std::vector<CurvePoint> read_csv(std::istream& is) {
    std::vector<CurvePoint> rows;
    std::string line;
    bool header = false;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto f = split(line, ',');
        if (!header) {
            if (f != csv_columns()) throw ConfigError("csv: unexpected header on line " + std::to_string(lineno), lineno);
            header = true;
            continue;
        }
        if (f.size() != csv_columns().size())
            throw ConfigError("csv: wrong field count on line " + std::to_string(lineno), lineno);
        auto d = [&](std::size_t i) { return f[i] == "nan" ? NAN : to_double(f[i], lineno, csv_columns()[i]); };
        auto o = [&](std::size_t i) -> std::optional<double> {
            if (f[i] == "nan") return std::nullopt;
            return d(i);
        };
        CurvePoint c;
        c.axis_value = d(0);
        c.P_L1 = d(1);
        c.P_R1 = d(2);
        c.P_L2 = d(3);
        c.P_R2 = d(4);
        c.g2_L = o(5);
        c.g2_R = o(6);
        c.method = f[7];
        c.residual = d(8);
        c.g2_L_simplified = o(9);
        c.g2_R_simplified = o(10);
        c.status = f[11];
        rows.push_back(std::move(c));
    }
    if (!header) throw ConfigError("csv: missing header");
    return rows;
}

std::vector<CurvePoint> read_csv_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open csv file '" + path + "'");
    return read_csv(f);
}

nlohmann::json extrema_json(const std::vector<Extremum>& ex) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& e : ex)
        a.push_back({{"kind", to_string(e.kind)},
                     {"location", e.location},
                     {"refined_location", e.refined_location},
                     {"value", e.value}});
    return a;
}

nlohmann::json compare_json(const CompareReport& r) {
    return {{"field", r.field},
            {"tolerance", r.tolerance},
            {"compared", r.rows.size()},
            {"skipped", r.skipped},
            {"max_deviation", r.max_deviation},
            {"max_location", r.max_location},
            {"median_deviation", r.median_deviation},
            {"passed", r.passed}};
}

nlohmann::json params_json(const ModelParams& p) {
    return {{"omega_M", p.omega_M}, {"delta_L", p.delta_L}, {"delta_R", p.delta_R}, {"J", p.J},
            {"g_L", p.g_L},         {"g_R", p.g_R},         {"Omega", p.Omega},     {"kappa_L", p.kappa_L},
            {"kappa_R", p.kappa_R}, {"kappa_b", p.kappa_b}, {"n_bar_b", p.n_bar_b}, {"unit_scale", p.unit_scale}};
}

}  // namespace blockade
