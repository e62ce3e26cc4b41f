#include <stdexcept>

#include "lrd/estimators.hpp"

namespace lrd::hurst {

const std::vector<std::string>& estimator_ids() {
    static const std::vector<std::string> ids = {
        "aggvar", "diffvar", "absval", "higuchi", "peng", "rs",  "rar", "per", "boxper",
        "gph",    "sgph",    "wavelet", "lw",     "lwt",  "lwm", "elw", "elw2"};
    return ids;
}

HurstEstimate estimate(std::span<const double> scores, std::string_view id,
                       const EstimatorOptions& opts) {
    if (id == "aggvar")
        return estimate_time_domain(scores, TimeDomainMethod::aggvar, opts.block_grid);
    if (id == "diffvar")
        return estimate_time_domain(scores, TimeDomainMethod::diffvar, opts.block_grid);
    if (id == "absval")
        return estimate_time_domain(scores, TimeDomainMethod::absval, opts.block_grid);
    if (id == "higuchi")
        return estimate_time_domain(scores, TimeDomainMethod::higuchi, opts.block_grid);
    if (id == "peng")
        return estimate_time_domain(scores, TimeDomainMethod::peng, opts.block_grid);
    if (id == "rs") return rs_simple(scores);
    if (id == "rar") return rescaled_adjusted_range(scores, opts.sub_lengths);
    if (id == "per") return estimate_periodogram(scores, false);
    if (id == "boxper") return estimate_periodogram(scores, true);
    if (id == "gph") return gph(scores, opts.gph_bandwidth);
    if (id == "sgph") return smoothed_gph(scores, opts.gph_bandwidth, opts.sgph_lag_window);
    if (id == "wavelet") return wavelet_estimate(scores, opts.wavelet_min_level);
    if (id == "lw") return local_whittle(scores, opts.whittle);
    if (id == "lwt") return local_whittle_tapered(scores, opts.whittle);
    if (id == "lwm") return local_whittle_modified(scores, opts.whittle);
    if (id == "elw") return exact_local_whittle(scores, opts.whittle);
    if (id == "elw2") return two_step_elw(scores, opts.whittle);
    std::string valid;
    for (const auto& known : estimator_ids()) {
        if (!valid.empty()) valid += ", ";
        valid += known;
    }
    throw std::invalid_argument("unknown estimator '" + std::string(id) + "'; valid ids: " + valid);
}

}  // namespace lrd::hurst
