#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lrd/fts.hpp"
#include "lrd/sim.hpp"

namespace lrd::bench {

using json = nlohmann::json;

/// Raised by config parsing/validation; `path` names the offending field.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& what)
        : std::runtime_error("config error at " + path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

struct ModelTemplate {
    int case_id = 1;
    sim::Strength strength = sim::Strength::moderate;

    std::string id() const;
};

struct BenchConfig {
    std::vector<ModelTemplate> models;
    std::vector<double> d_values = {0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40};
    std::vector<int> n_values = {250, 500, 1000};
    int replications = 1000;
    std::vector<std::string> estimators;
    LrcMethod lrc = LrcMethod::lag_weighted;
    int grid_points = 101;
    int parallelism = 0;  // 0 -> hardware concurrency
    std::uint64_t seed = 1;
    bool progress = true;
};

BenchConfig config_from_json(const json& j);
json config_to_json(const BenchConfig& cfg);

struct CellStats {
    double bias = 0.0;
    double variance = 0.0;
    double mse = 0.0;
    int b_effective = 0;
    int failures = 0;
};

/// Bias (1/B) sum(d - dhat), variance with divisor B-1, MSE (1/B) sum((dhat-d)^2)
/// over the successful replications.
CellStats aggregate_estimates(std::span<const double> d_hats, double d_true, int failures);

struct CellResult {
    std::string model;
    std::string estimator;
    double d = 0.0;
    int n = 0;
    CellStats stats;
    bool failed = false;  // every replication failed
};

struct OverallResult {
    std::string model;
    std::string estimator;
    int n = 0;
    double bias = 0.0;
    double variance = 0.0;
    double mse = 0.0;
    int b_effective = 0;
    int failures = 0;
};

struct BenchReport {
    std::vector<CellResult> cells;
    std::vector<OverallResult> overall;
    json metadata() const;  // stable: no wall time
    const BenchConfig* config = nullptr;
    BenchConfig config_copy;
    double wall_seconds = 0.0;  // reported on stderr, not serialized
};

/// Replication seed for a (model, d, n, b) coordinate; independent of the
/// estimator list and of scheduling, so estimators share simulations and any
/// cell can be recomputed in isolation.
std::uint64_t replication_seed(std::uint64_t seed, const ModelTemplate& model, double d,
                               int n, int b);

/// One (model, estimator, d, n) cell at the configured B.
CellResult run_cell(const BenchConfig& cfg, int model_idx, int n_idx, int d_idx,
                    const std::string& estimator);

/// All cells plus per-(model, estimator, n) overall rows (means across d).
BenchReport run_campaign(const BenchConfig& cfg);

std::string report_to_csv(const BenchReport& report);
json report_to_json(const BenchReport& report);
/// Plot-ready long format: model, estimator, n, d, mse_x100.
std::string report_to_long_csv(const BenchReport& report);

/// Serialized report in the requested format ("csv" or "json").
std::string write_report(const BenchReport& report, const std::string& format);

}  // namespace lrd::bench
