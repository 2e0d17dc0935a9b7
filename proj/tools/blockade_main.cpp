// Command-line front end: spectrum, sweep, compare, validate, extrema.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "blockade/acceptance.hpp"
#include "blockade/config_io.hpp"
#include "blockade/errors.hpp"
#include "blockade/spectrum.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;
constexpr int kExitAcceptance = 3;

struct Common {
    std::string config;
    std::string output;
    std::string method;
    int threads = 0;
};

void apply_method(blockade::SweepConfig& cfg, const std::string& method) {
    if (method.empty()) return;
    cfg.analytic = method == "analytic" || method == "both";
    cfg.lindblad = method == "lindblad" || method == "both";
}

// Writes to --output when given, otherwise stdout.
template <class Fn>
void emit(const std::string& path, Fn&& fn) {
    if (path.empty() || path == "-") {
        fn(std::cout);
        return;
    }
    std::ofstream os(path);
    if (!os) throw blockade::ConfigError("cannot open output file '" + path + "'");
    fn(os);
}

blockade::SweepConfig config_or_default(const Common& c) {
    blockade::SweepConfig cfg = c.config.empty() ? blockade::SweepConfig{} : blockade::load_config(c.config);
    apply_method(cfg, c.method);
    if (c.threads > 0) cfg.threads = c.threads;
    if (!c.output.empty()) cfg.output = c.output;
    return cfg;
}

// Warnings (tail_warning, fallback_*) still carry usable values.
int failed_rows(const std::vector<blockade::CurvePoint>& rows) {
    int n = 0;
    for (const auto& r : rows)
        if (r.status.rfind("error", 0) == 0 || r.status == "residual_high") ++n;
    return n;
}

void progress_bar(std::size_t done, std::size_t total) {
    if (done == total || done % 50 == 0) std::fprintf(stderr, "\r%zu/%zu points", done, total);
    if (done == total) std::fprintf(stderr, "\n");
}

int cmd_spectrum(const Common& c, int k_max) {
    const auto cfg = config_or_default(c);
    const auto levels = blockade::level_table(k_max, cfg.base);
    emit(c.output, [&](std::ostream& os) {
        os << "sector,branch,k,value\n";
        char buf[96];
        for (const auto& l : levels) {
            std::snprintf(buf, sizeof buf, "%d,%s,%d,%.15g\n", l.sector,
                          blockade::branch_label(l.sector, l.branch).c_str(), l.k, l.value);
            os << buf;
        }
    });
    return kExitOk;
}

int cmd_sweep(const Common& c, bool quiet) {
    if (c.config.empty()) throw CLI::RequiredError("--config");
    const auto cfg = config_or_default(c);
    const auto rows = blockade::run_sweep(cfg, quiet ? blockade::ProgressFn{} : blockade::ProgressFn(progress_bar));
    emit(cfg.output, [&](std::ostream& os) { blockade::write_csv(os, cfg, rows); });
    const int bad = failed_rows(rows);
    if (bad) std::cerr << bad << " point(s) failed; see the status column\n";
    return bad ? kExitSolver : kExitOk;
}

int cmd_compare(const Common& c, const std::vector<std::string>& inputs, const std::string& field, double tol,
                const std::string& json_path) {
    std::vector<blockade::CurvePoint> a, l;
    if (inputs.size() == 2) {
        a = blockade::select_method(blockade::read_csv_file(inputs[0]), "analytic");
        l = blockade::select_method(blockade::read_csv_file(inputs[1]), "lindblad");
    } else if (inputs.size() == 1) {
        const auto rows = blockade::read_csv_file(inputs[0]);
        a = blockade::select_method(rows, "analytic");
        l = blockade::select_method(rows, "lindblad");
    } else if (!c.config.empty()) {
        auto cfg = config_or_default(c);
        cfg.analytic = cfg.lindblad = true;
        const auto rows = blockade::run_sweep(cfg, progress_bar);
        if (!cfg.output.empty()) {
            std::ofstream os(cfg.output);
            blockade::write_csv(os, cfg, rows);
        }
        a = blockade::select_method(rows, "analytic");
        l = blockade::select_method(rows, "lindblad");
    } else {
        throw CLI::ValidationError("compare", "needs one or two CSV inputs or --config");
    }
    const auto rep = blockade::compare_report(a, l, field, tol);
    std::cout << blockade::format_report(rep);
    if (!json_path.empty()) emit(json_path, [&](std::ostream& os) { os << blockade::compare_json(rep).dump(2) << "\n"; });
    return rep.passed ? kExitOk : kExitAcceptance;
}

int cmd_extrema(const Common& c, const std::string& input, const std::string& field) {
    auto rows = blockade::read_csv_file(input);
    nlohmann::json out = nlohmann::json::object();
    for (const char* m : {"analytic", "lindblad"}) {
        const auto sel = blockade::select_method(rows, m);
        if (!c.method.empty() && c.method != "both" && c.method != m) continue;
        if (!sel.empty()) out[m] = blockade::extrema_json(blockade::detect_extrema(sel, field));
    }
    out["field"] = field;
    emit(c.output, [&](std::ostream& os) { os << out.dump(2) << "\n"; });
    return kExitOk;
}

int cmd_validate(const Common& c, const std::vector<int>& only, const std::string& config_dir) {
    blockade::AcceptanceOptions opt;
    opt.only = only;
    opt.threads = c.threads > 0 ? c.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    opt.log = &std::cout;
    bool ok = true;
    if (!config_dir.empty()) {
        std::vector<std::filesystem::path> files;
        for (const auto& e : std::filesystem::directory_iterator(config_dir))
            if (e.path().extension() == ".cfg") files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            auto cfg = blockade::load_config(f.string());
            cfg.threads = opt.threads;
            const auto rows = blockade::run_sweep(cfg);
            const int bad = failed_rows(rows);
            std::cout << (bad ? "FAIL" : "PASS") << " config " << f.filename().string() << ": " << rows.size()
                      << " rows, " << bad << " failed" << std::endl;
            ok = ok && bad == 0;
        }
    }
    const auto results = blockade::run_acceptance(opt);
    for (const auto& r : results) ok = ok && r.passed;
    return ok ? kExitOk : kExitAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Photon-blockade simulator for a loop-coupled optomechanical system"};
    app.require_subcommand(1);
    Common c;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", c.config, "config file (key = value)");
        sub->add_option("--output", c.output, "output path (default stdout)");
        sub->add_option("--method", c.method, "analytic | lindblad | both")
            ->check(CLI::IsMember({"analytic", "lindblad", "both"}));
        sub->add_option("--threads", c.threads, "worker threads")->check(CLI::NonNegativeNumber);
    };

    int k_max = 3;
    auto* spectrum = app.add_subcommand("spectrum", "print the level table of the base parameters");
    add_common(spectrum);
    spectrum->add_option("--kmax", k_max, "highest phonon index")->check(CLI::Range(0, 1000));

    bool quiet = false;
    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep and write CSV");
    add_common(sweep);
    sweep->add_flag("--quiet", quiet, "no progress on stderr");

    std::vector<std::string> inputs;
    std::string field = "g2_L", json_path;
    double tol = 0.25;
    auto* compare = app.add_subcommand("compare", "analytic vs lindblad deviation report");
    add_common(compare);
    compare->add_option("inputs", inputs, "CSV with both methods, or analytic CSV then lindblad CSV")->expected(0, 2);
    compare->add_option("--field", field, "g2_L | g2_R | P_L1 | ...");
    compare->add_option("--tolerance", tol, "relative deviation threshold");
    compare->add_option("--json", json_path, "machine-readable summary path");

    std::vector<int> only;
    std::string config_dir;
    auto* validate = app.add_subcommand("validate", "run the acceptance suite");
    add_common(validate);
    validate->add_option("--only", only, "criterion ids")->check(CLI::Range(1, blockade::kCriterionCount));
    validate->add_option("--configs", config_dir, "also run every *.cfg in this directory end to end")
        ->check(CLI::ExistingDirectory);

    std::string input;
    auto* extrema = app.add_subcommand("extrema", "detect dips and peaks in a sweep CSV");
    add_common(extrema);
    extrema->add_option("input", input, "sweep CSV")->required()->check(CLI::ExistingFile);
    extrema->add_option("--field", field, "column to analyse");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*spectrum) return cmd_spectrum(c, k_max);
        if (*sweep) return cmd_sweep(c, quiet);
        if (*compare) return cmd_compare(c, inputs, field, tol, json_path);
        if (*validate) return cmd_validate(c, only, config_dir);
        if (*extrema) return cmd_extrema(c, input, field);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const blockade::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const blockade::PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitUsage;
}
