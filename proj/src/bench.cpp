#include "lrd/bench.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include "lrd/errors.hpp"
#include "lrd/estimators.hpp"

namespace lrd::bench {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

void parallel_for(int n_tasks, int threads, const std::function<void(int)>& fn) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, n_tasks));
    if (threads == 1) {
        for (int i = 0; i < n_tasks; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n_tasks; i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

int strength_key(sim::Strength s) {
    switch (s) {
        case sim::Strength::weak: return 1;
        case sim::Strength::moderate: return 2;
        case sim::Strength::strong: return 3;
    }
    return 0;
}

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string lrc_name(LrcMethod m) {
    return m == LrcMethod::lag_weighted ? "lag_weighted" : "kernel_plugin";
}

}  // namespace

std::string ModelTemplate::id() const {
    return "case" + std::to_string(case_id) + "-" + sim::strength_name(strength);
}

std::uint64_t replication_seed(std::uint64_t seed, const ModelTemplate& model, double d, int n,
                               int b) {
    std::uint64_t h = seed;
    h = seed_chain(h, static_cast<std::uint64_t>(model.case_id * 4 + strength_key(model.strength)));
    h = seed_chain(h, static_cast<std::uint64_t>(std::llround(d * 1000.0)));
    h = seed_chain(h, static_cast<std::uint64_t>(n));
    h = seed_chain(h, static_cast<std::uint64_t>(b));
    return h;
}

CellStats aggregate_estimates(std::span<const double> d_hats, double d_true, int failures) {
    CellStats s;
    s.failures = failures;
    s.b_effective = static_cast<int>(d_hats.size());
    if (d_hats.empty()) {
        s.bias = s.variance = s.mse = kNaN;
        return s;
    }
    const int B = s.b_effective;
    double mean = 0.0;
    for (double v : d_hats) mean += v;
    mean /= B;
    double bias = 0.0, mse = 0.0, varsum = 0.0;
    for (double v : d_hats) {
        bias += d_true - v;
        mse += (v - d_true) * (v - d_true);
        varsum += (v - mean) * (v - mean);
    }
    s.bias = bias / B;
    s.mse = mse / B;
    s.variance = B > 1 ? varsum / (B - 1) : 0.0;
    return s;
}

BenchConfig config_from_json(const json& j) {
    BenchConfig cfg;
    if (!j.is_object()) throw ConfigError("$", "config must be a JSON object");
    if (!j.contains("models") || !j["models"].is_array() || j["models"].empty())
        throw ConfigError("models", "need a non-empty array");
    cfg.models.clear();
    for (std::size_t i = 0; i < j["models"].size(); ++i) {
        const auto& m = j["models"][i];
        const std::string path = "models[" + std::to_string(i) + "]";
        if (!m.is_object()) throw ConfigError(path, "must be an object");
        ModelTemplate tmpl;
        if (!m.contains("case") || !m["case"].is_number_integer())
            throw ConfigError(path + ".case", "must be an integer");
        tmpl.case_id = m["case"].get<int>();
        if (tmpl.case_id != 1 && tmpl.case_id != 2)
            throw ConfigError(path + ".case", "must be 1 or 2");
        if (!m.contains("strength") || !m["strength"].is_string())
            throw ConfigError(path + ".strength", "must be a string");
        try {
            tmpl.strength = sim::parse_strength(m["strength"].get<std::string>());
        } catch (const std::exception& e) {
            throw ConfigError(path + ".strength", e.what());
        }
        cfg.models.push_back(tmpl);
    }
    if (j.contains("d_values")) {
        if (!j["d_values"].is_array() || j["d_values"].empty())
            throw ConfigError("d_values", "need a non-empty array");
        cfg.d_values = j["d_values"].get<std::vector<double>>();
        for (std::size_t i = 0; i < cfg.d_values.size(); ++i)
            if (!(std::abs(cfg.d_values[i]) < 0.5))
                throw ConfigError("d_values[" + std::to_string(i) + "]",
                                  "must lie in (-1/2, 1/2)");
    }
    if (j.contains("n_values")) {
        if (!j["n_values"].is_array() || j["n_values"].empty())
            throw ConfigError("n_values", "need a non-empty array");
        cfg.n_values = j["n_values"].get<std::vector<int>>();
        for (std::size_t i = 0; i < cfg.n_values.size(); ++i)
            if (cfg.n_values[i] < 10)
                throw ConfigError("n_values[" + std::to_string(i) + "]", "must be >= 10");
    }
    if (j.contains("replications")) {
        if (!j["replications"].is_number_integer() || j["replications"].get<int>() < 2)
            throw ConfigError("replications", "must be an integer >= 2");
        cfg.replications = j["replications"].get<int>();
    }
    if (!j.contains("estimators") || !j["estimators"].is_array() || j["estimators"].empty())
        throw ConfigError("estimators", "need a non-empty array of estimator ids");
    cfg.estimators = j["estimators"].get<std::vector<std::string>>();
    const auto& known = hurst::estimator_ids();
    for (std::size_t i = 0; i < cfg.estimators.size(); ++i)
        if (std::find(known.begin(), known.end(), cfg.estimators[i]) == known.end())
            throw ConfigError("estimators[" + std::to_string(i) + "]",
                              "unknown id '" + cfg.estimators[i] + "'");
    if (j.contains("lrc_method")) {
        const std::string name = j["lrc_method"].get<std::string>();
        if (name == "lag_weighted")
            cfg.lrc = LrcMethod::lag_weighted;
        else if (name == "kernel_plugin")
            cfg.lrc = LrcMethod::kernel_plugin;
        else
            throw ConfigError("lrc_method", "must be lag_weighted or kernel_plugin");
    }
    if (j.contains("grid_points")) {
        cfg.grid_points = j["grid_points"].get<int>();
        if (cfg.grid_points < 2) throw ConfigError("grid_points", "must be >= 2");
    }
    if (j.contains("parallelism")) {
        cfg.parallelism = j["parallelism"].get<int>();
        if (cfg.parallelism < 0) throw ConfigError("parallelism", "must be >= 0");
    }
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("progress")) cfg.progress = j["progress"].get<bool>();
    return cfg;
}

json config_to_json(const BenchConfig& cfg) {
    json models = json::array();
    for (const auto& m : cfg.models)
        models.push_back({{"case", m.case_id}, {"strength", sim::strength_name(m.strength)}});
    return json{{"models", models},
                {"d_values", cfg.d_values},
                {"n_values", cfg.n_values},
                {"replications", cfg.replications},
                {"estimators", cfg.estimators},
                {"lrc_method", lrc_name(cfg.lrc)},
                {"grid_points", cfg.grid_points},
                {"parallelism", cfg.parallelism},
                {"seed", cfg.seed}};
}

namespace {

/// All estimators for one (model, d, n) cell; replications run in parallel,
/// aggregation is a sequential reduce over the replication-indexed buffer.
std::vector<CellStats> run_cell_block(const BenchConfig& cfg, const ModelTemplate& model,
                                      double d, int n,
                                      const std::vector<std::string>& estimators) {
    const int B = cfg.replications;
    const int E = static_cast<int>(estimators.size());
    std::vector<std::vector<double>> d_hat(B, std::vector<double>(E, kNaN));

    parallel_for(B, cfg.parallelism, [&](int b) {
        const std::uint64_t rep_seed = replication_seed(cfg.seed, model, d, n, b);
        sim::FarimaSpec spec =
            sim::make_case_spec(model.case_id, model.strength, d, cfg.grid_points, n, rep_seed);
        try {
            const FunctionalSeries fs = sim::simulate_farima(spec, n);
            const ScoreSeries scores = dynamic_fpc_scores(fs, cfg.lrc);
            for (int e = 0; e < E; ++e) {
                try {
                    d_hat[b][e] = hurst::estimate(scores.values, estimators[e]).d;
                } catch (const std::exception&) {
                    // estimator failure: excluded from this estimator's aggregate
                }
            }
        } catch (const std::exception&) {
            // simulation/pipeline failure: counts against every estimator
        }
    });

    std::vector<CellStats> stats(E);
    for (int e = 0; e < E; ++e) {
        std::vector<double> ok;
        ok.reserve(B);
        for (int b = 0; b < B; ++b)
            if (std::isfinite(d_hat[b][e])) ok.push_back(d_hat[b][e]);
        stats[e] = aggregate_estimates(ok, d, B - static_cast<int>(ok.size()));
    }
    return stats;
}

}  // namespace

CellResult run_cell(const BenchConfig& cfg, int model_idx, int n_idx, int d_idx,
                    const std::string& estimator) {
    const ModelTemplate& model = cfg.models.at(model_idx);
    const double d = cfg.d_values.at(d_idx);
    const int n = cfg.n_values.at(n_idx);
    const std::vector<CellStats> stats = run_cell_block(cfg, model, d, n, {estimator});
    CellResult cell{model.id(), estimator, d, n, stats[0], stats[0].b_effective == 0};
    if (cell.failed) throw EstimationError("run_cell: every replication failed");
    return cell;
}

BenchReport run_campaign(const BenchConfig& cfg) {
    if (cfg.models.empty() || cfg.estimators.empty())
        throw ConfigError("models", "empty campaign");
    const auto t0 = std::chrono::steady_clock::now();
    BenchReport report;
    report.config_copy = cfg;
    report.config = &report.config_copy;

    const int E = static_cast<int>(cfg.estimators.size());
    for (std::size_t mi = 0; mi < cfg.models.size(); ++mi) {
        for (std::size_t ni = 0; ni < cfg.n_values.size(); ++ni) {
            // accumulators for the per-(model, estimator, n) overall rows
            std::vector<double> bias_acc(E, 0.0), var_acc(E, 0.0), mse_acc(E, 0.0);
            std::vector<int> beff_acc(E, 0), fail_acc(E, 0);
            for (std::size_t di = 0; di < cfg.d_values.size(); ++di) {
                const double d = cfg.d_values[di];
                const int n = cfg.n_values[ni];
                const std::vector<CellStats> stats =
                    run_cell_block(cfg, cfg.models[mi], d, n, cfg.estimators);
                for (int e = 0; e < E; ++e) {
                    CellResult cell{cfg.models[mi].id(), cfg.estimators[e], d, n, stats[e],
                                    stats[e].b_effective == 0};
                    bias_acc[e] += stats[e].bias;
                    var_acc[e] += stats[e].variance;
                    mse_acc[e] += stats[e].mse;
                    beff_acc[e] += stats[e].b_effective;
                    fail_acc[e] += stats[e].failures;
                    report.cells.push_back(std::move(cell));
                }
                if (cfg.progress)
                    std::fprintf(stderr, "[bench] %s n=%d d=%.2f done (B=%d)\n",
                                 cfg.models[mi].id().c_str(), n, d, cfg.replications);
            }
            const double nd = static_cast<double>(cfg.d_values.size());
            for (int e = 0; e < E; ++e)
                report.overall.push_back(OverallResult{cfg.models[mi].id(), cfg.estimators[e],
                                                       cfg.n_values[ni], bias_acc[e] / nd,
                                                       var_acc[e] / nd, mse_acc[e] / nd,
                                                       beff_acc[e], fail_acc[e]});
        }
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (cfg.progress)
        std::fprintf(stderr, "[bench] campaign finished in %.1f s\n", report.wall_seconds);
    return report;
}

json BenchReport::metadata() const {
    const BenchConfig& cfg = config ? *config : config_copy;
    return json{
        {"config", config_to_json(cfg)},
        {"rng",
         "mt19937_64 + Box-Muller; replication stream = splitmix64 chain over "
         "(seed, model, round(d*1000), n, b)"},
        {"simulation", {{"burn_in", "n"}, {"ma_truncation", "n+100"}, {"innovations",
                        "standard Brownian motion on the grid"}}},
        {"estimator_defaults",
         {{"whittle_bandwidth", "floor(n^0.65)"},
          {"gph_bandwidth", "floor(sqrt(n))"},
          {"sgph_lag_window", "floor(n^0.9)"},
          {"block_grid", "30 log-equispaced sizes, 4..n/4 (peng 8..n/4)"},
          {"taper_order", 2}}}};
}

std::string report_to_csv(const BenchReport& report) {
    std::string out = "model,estimator,d,n,bias,variance,mse,mse_x100,B_eff,failures\n";
    for (const auto& c : report.cells) {
        out += c.model + "," + c.estimator + "," + format17(c.d) + "," + std::to_string(c.n) +
               "," + format17(c.stats.bias) + "," + format17(c.stats.variance) + "," +
               format17(c.stats.mse) + "," + format17(100.0 * c.stats.mse) + "," +
               std::to_string(c.stats.b_effective) + "," + std::to_string(c.stats.failures) +
               "\n";
    }
    for (const auto& o : report.overall) {
        out += o.model + "," + o.estimator + ",overall," + std::to_string(o.n) + "," +
               format17(o.bias) + "," + format17(o.variance) + "," + format17(o.mse) + "," +
               format17(100.0 * o.mse) + "," + std::to_string(o.b_effective) + "," +
               std::to_string(o.failures) + "\n";
    }
    return out;
}

json report_to_json(const BenchReport& report) {
    json cells = json::array();
    for (const auto& c : report.cells)
        cells.push_back({{"model", c.model},
                         {"estimator", c.estimator},
                         {"d", c.d},
                         {"n", c.n},
                         {"bias", c.stats.bias},
                         {"variance", c.stats.variance},
                         {"mse", c.stats.mse},
                         {"mse_x100", 100.0 * c.stats.mse},
                         {"B_eff", c.stats.b_effective},
                         {"failures", c.stats.failures},
                         {"failed", c.failed}});
    json overall = json::array();
    for (const auto& o : report.overall)
        overall.push_back({{"model", o.model},
                           {"estimator", o.estimator},
                           {"n", o.n},
                           {"bias", o.bias},
                           {"variance", o.variance},
                           {"mse", o.mse},
                           {"mse_x100", 100.0 * o.mse},
                           {"B_eff", o.b_effective},
                           {"failures", o.failures}});
    return json{{"metadata", report.metadata()}, {"cells", cells}, {"overall", overall}};
}

std::string report_to_long_csv(const BenchReport& report) {
    std::string out = "model,estimator,n,d,mse_x100\n";
    for (const auto& c : report.cells)
        out += c.model + "," + c.estimator + "," + std::to_string(c.n) + "," + format17(c.d) +
               "," + format17(100.0 * c.stats.mse) + "\n";
    return out;
}

std::string write_report(const BenchReport& report, const std::string& format) {
    if (format == "csv") return report_to_csv(report);
    if (format == "json") return report_to_json(report).dump(2) + "\n";
    throw std::invalid_argument("write_report: format must be csv or json");
}

}  // namespace lrd::bench
