#pragma once

#include <cmath>
#include <map>
#include <span>
#include <stdexcept>
#include <string>

#include "lrd/errors.hpp"
#include "lrd/estimators.hpp"

namespace lrd::hurst::detail {

inline void check_scores(std::span<const double> scores, std::size_t min_n,
                         const char* who = "estimator") {
    if (scores.size() < min_n)
        throw std::invalid_argument(std::string(who) + ": series too short");
    for (double v : scores)
        if (!std::isfinite(v))
            throw std::invalid_argument(std::string(who) + ": non-finite score");
}

inline HurstEstimate finalize(std::string method, double H, RegressionPoints reg,
                              std::map<std::string, double> tuning, int dropped = 0) {
    HurstEstimate est;
    est.method = std::move(method);
    est.H = H;
    est.d = H - 0.5;
    est.regression = std::move(reg);
    est.tuning = std::move(tuning);
    est.dropped_points = dropped;
    if (!std::isfinite(est.H)) throw EstimationError(est.method + ": non-finite estimate");
    return est;
}

}  // namespace lrd::hurst::detail
