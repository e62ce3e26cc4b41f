// Command-line front end: simulate functional ARFIMA panels, estimate the
// Hurst / memory parameter from curve panels or scalar series, and run
// Monte-Carlo benchmark campaigns.
//
// Exit codes: 0 success, 1 runtime estimation failure, 2 usage/config error.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "lrd/bench.hpp"
#include "lrd/csv.hpp"
#include "lrd/errors.hpp"
#include "lrd/estimators.hpp"
#include "lrd/fts.hpp"
#include "lrd/sim.hpp"

using json = nlohmann::json;

namespace {

json farima_spec_json(const lrd::sim::FarimaSpec& spec, int n) {
    return json{{"case", spec.case_id},
                {"strength", lrd::sim::strength_name(spec.strength)},
                {"p", spec.p},
                {"q", spec.q},
                {"d", spec.d},
                {"n", n},
                {"grid_points", spec.grid.size()},
                {"burn_in", spec.burn_in},
                {"ma_truncation", spec.ma_truncation},
                {"seed", spec.seed},
                {"innovations", "standard Brownian motion"},
                {"rng", "mt19937_64 + Box-Muller"}};
}

json estimate_json(const lrd::hurst::HurstEstimate& est) {
    json diag{{"method", est.method},
              {"H", est.H},
              {"d", est.d},
              {"tuning", est.tuning},
              {"boundary_hit", est.boundary_hit},
              {"dropped_points", est.dropped_points}};
    if (!est.regression.empty()) {
        diag["regression"] = {{"xs", est.regression.xs},
                              {"ys", est.regression.ys},
                              {"slope", est.regression.slope},
                              {"intercept", est.regression.intercept},
                              {"robust", est.regression.robust}};
    }
    if (!est.notes.empty()) diag["notes"] = est.notes;
    return diag;
}

int cmd_simulate(int case_id, const std::string& strength, double d, int n, int W,
                 std::uint64_t seed, const std::string& out) {
    if (!(std::abs(d) < 0.5)) {
        std::cerr << "error: --d must lie in (-1/2, 1/2)\n";
        return 2;
    }
    lrd::sim::FarimaSpec spec;
    try {
        spec = lrd::sim::make_case_spec(case_id, lrd::sim::parse_strength(strength), d, W, n,
                                        seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    bool unstable = false;
    const lrd::FunctionalSeries fs = lrd::sim::simulate_farima(spec, n, &unstable);
    if (unstable) std::cerr << "warning: AR kernel norm >= 1 (non-stationary recursion)\n";
    lrd::write_curve_csv(fs, out);
    std::ofstream sidecar(out + ".json");
    sidecar << farima_spec_json(spec, n).dump(2) << "\n";
    if (!sidecar) {
        std::cerr << "error: cannot write " << out << ".json\n";
        return 1;
    }
    std::cout << "wrote " << n << "x" << W << " curve panel to " << out << " (spec in " << out
              << ".json)\n";
    return 0;
}

std::vector<std::string> split_ids(const std::string& arg) {
    if (arg == "all") return lrd::hurst::estimator_ids();
    std::vector<std::string> ids;
    std::size_t start = 0;
    while (start <= arg.size()) {
        const std::size_t comma = arg.find(',', start);
        const std::string id =
            arg.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!id.empty()) ids.push_back(id);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return ids;
}

int cmd_estimate(const std::string& input, const std::string& estimators,
                 const std::string& lrc, const std::string& out, const std::string& format) {
    const auto& known = lrd::hurst::estimator_ids();
    const std::vector<std::string> ids = split_ids(estimators);
    if (ids.empty()) {
        std::cerr << "error: no estimators requested\n";
        return 2;
    }
    for (const auto& id : ids) {
        if (std::find(known.begin(), known.end(), id) == known.end()) {
            std::cerr << "error: unknown estimator '" << id << "'; valid ids:";
            for (const auto& k : known) std::cerr << " " << k;
            std::cerr << "\n";
            return 2;
        }
    }
    lrd::LrcMethod method;
    if (lrc == "lag_weighted")
        method = lrd::LrcMethod::lag_weighted;
    else if (lrc == "kernel_plugin")
        method = lrd::LrcMethod::kernel_plugin;
    else {
        std::cerr << "error: --lrc must be lag_weighted or kernel_plugin\n";
        return 2;
    }

    std::vector<double> scores;
    json pipeline_diag;
    try {
        const int width = lrd::csv_first_row_width(input);
        if (width == 0) {
            std::cerr << "error: " << input << " is empty\n";
            return 2;
        }
        if (width == 1) {
            scores = lrd::read_scalar_csv(input);
            pipeline_diag = {{"input", "scalar"}, {"n", scores.size()}};
        } else {
            const lrd::FunctionalSeries fs = lrd::read_curve_csv(input);
            lrd::PipelineDiagnostics diag;
            const lrd::ScoreSeries s = lrd::dynamic_fpc_scores(fs, method, &diag);
            scores = s.values;
            pipeline_diag = {{"input", "functional"},
                             {"n", fs.n()},
                             {"grid_points", fs.W()},
                             {"lrc_method", lrc},
                             {"leading_eigenvalue", diag.leading_eigenvalue}};
            if (method == lrd::LrcMethod::kernel_plugin) {
                pipeline_diag["h_opt"] = diag.plugin.h_opt;
                pipeline_diag["h1"] = diag.plugin.h1;
                pipeline_diag["c0"] = diag.plugin.c0;
            }
        }
    } catch (const lrd::EstimationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    json results = json::array();
    int ok = 0;
    std::printf("%-8s %12s %12s  %s\n", "method", "H", "d", "notes");
    for (const auto& id : ids) {
        try {
            const lrd::hurst::HurstEstimate est = lrd::hurst::estimate(scores, id);
            std::printf("%-8s %12.6f %12.6f  %s\n", est.method.c_str(), est.H, est.d,
                        est.boundary_hit ? "boundary" : "");
            results.push_back(estimate_json(est));
            ++ok;
        } catch (const std::exception& e) {
            std::printf("%-8s %12s %12s  %s\n", id.c_str(), "-", "-", e.what());
            results.push_back(json{{"method", id}, {"error", e.what()}});
        }
    }
    const json doc{{"pipeline", pipeline_diag}, {"estimates", results}};
    if (!out.empty()) {
        std::ofstream f(out);
        f << doc.dump(2) << "\n";
        if (!f) {
            std::cerr << "error: cannot write " << out << "\n";
            return 1;
        }
    }
    if (format == "json") std::cout << doc.dump(2) << "\n";
    return ok > 0 ? 0 : 1;
}

int cmd_bench(const std::string& config_path, const std::string& out_dir, int parallelism) {
    json cfg_json;
    try {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "error: cannot open config " << config_path << "\n";
            return 2;
        }
        cfg_json = json::parse(in);
    } catch (const json::parse_error& e) {
        std::cerr << "error: config parse failure: " << e.what() << "\n";
        return 2;
    }
    lrd::bench::BenchConfig cfg;
    try {
        cfg = lrd::bench::config_from_json(cfg_json);
    } catch (const lrd::bench::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    if (parallelism >= 0) cfg.parallelism = parallelism;

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        std::cerr << "error: cannot create " << out_dir << ": " << ec.message() << "\n";
        return 2;
    }
    lrd::bench::BenchReport report;
    try {
        report = lrd::bench::run_campaign(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    const auto write_file = [&](const std::string& name, const std::string& body) {
        std::ofstream f(out_dir + "/" + name, std::ios::binary);
        f << body;
        if (!f) throw std::runtime_error("cannot write " + out_dir + "/" + name);
    };
    try {
        write_file("report.csv", lrd::bench::report_to_csv(report));
        write_file("report.json", lrd::bench::write_report(report, "json"));
        write_file("report_long.csv", lrd::bench::report_to_long_csv(report));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cout << "wrote " << report.cells.size() << " cells to " << out_dir
              << "/report.{csv,json} and report_long.csv\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hurst exponent estimation for long-range dependent curve time series"};
    app.require_subcommand(1);

    auto* sim_cmd = app.add_subcommand("simulate", "simulate a functional ARFIMA curve panel");
    int case_id = 1, n = 250, W = 101;
    double d = 0.2;
    std::uint64_t seed = 1;
    std::string strength = "moderate", out = "panel.csv";
    sim_cmd->add_option("--case", case_id, "kernel case (1: ARFIMA(1,d,0), 2: ARFIMA(1,d,1))")
        ->check(CLI::IsMember({1, 2}));
    sim_cmd->add_option("--strength", strength, "dependence strength (weak|moderate|strong)");
    sim_cmd->add_option("--d", d, "fractional integration parameter");
    sim_cmd->add_option("--n", n, "number of curves")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--grid-points", W, "grid points per curve")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--seed", seed, "RNG seed");
    sim_cmd->add_option("--out", out, "output CSV path (spec sidecar gets .json appended)");

    auto* est_cmd = app.add_subcommand("estimate", "estimate H and d from a CSV input");
    std::string input, estimators = "all", lrc = "lag_weighted", est_out, format = "table";
    est_cmd->add_option("input", input, "curve panel CSV or single-column scalar CSV")
        ->required();
    est_cmd->add_option("--estimators", estimators, "comma-separated ids or 'all'");
    est_cmd->add_option("--lrc", lrc, "long-run covariance (lag_weighted|kernel_plugin)");
    est_cmd->add_option("--out", est_out, "write JSON diagnostics to this path");
    est_cmd->add_option("--format", format, "stdout format (table|json)")
        ->check(CLI::IsMember({"table", "json"}));

    auto* bench_cmd = app.add_subcommand("bench", "run a Monte-Carlo benchmark campaign");
    std::string config_path, bench_out = "bench_out";
    int parallelism = -1;
    bench_cmd->add_option("--config", config_path, "benchmark config JSON")->required();
    bench_cmd->add_option("--out", bench_out, "output directory");
    bench_cmd->add_option("--parallelism", parallelism, "worker threads (0 = hardware)");

    auto* list_cmd = app.add_subcommand("list-estimators", "print the estimator catalog");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sim_cmd->parsed())
            return cmd_simulate(case_id, strength, d, n, W, seed, out);
        if (est_cmd->parsed()) return cmd_estimate(input, estimators, lrc, est_out, format);
        if (bench_cmd->parsed()) return cmd_bench(config_path, bench_out, parallelism);
        if (list_cmd->parsed()) {
            for (const auto& id : lrd::hurst::estimator_ids()) std::cout << id << "\n";
            return 0;
        }
    } catch (const lrd::EstimationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
