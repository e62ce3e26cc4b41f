#pragma once

#include <limits>
#include <string>

namespace lrd {

enum class KernelFamily { bartlett, parzen, tukey_hanning, quadratic_spectral, flat_top };

/// Lag-window kernel used by the sandwich long-run covariance estimator and
/// the plug-in bandwidth rule.  `order` is the characteristic exponent q of
/// 1 - W(x) near zero, `w_const` the matching limit constant
/// w = lim_{x->0} |x|^{-q} (1 - W(x)), and `l2_const` the squared L2 mass
/// of the window.  The flat-top window has infinite order and no w constant.
struct KernelSpec {
    KernelFamily family;
    int order;         // q; infinite_order for flat-top
    double w_const;    // NaN when undefined (flat-top)
    double l2_const;   // integral of W^2 over the real line

    static constexpr int infinite_order = std::numeric_limits<int>::max();

    static KernelSpec bartlett();
    static KernelSpec parzen();
    static KernelSpec tukey_hanning();
    static KernelSpec quadratic_spectral();
    static KernelSpec flat_top();

    /// Window value W_q(x).
    double weight(double x) const;

    std::string name() const;
};

}  // namespace lrd
