#include "lrd/kernels.hpp"

#include <cmath>

namespace lrd {

namespace {
const double kNaN = std::numeric_limits<double>::quiet_NaN();
}

KernelSpec KernelSpec::bartlett() {
    return {KernelFamily::bartlett, 1, 1.0, 2.0 / 3.0};
}

KernelSpec KernelSpec::parzen() {
    return {KernelFamily::parzen, 2, 6.0, 0.539285};
}

KernelSpec KernelSpec::tukey_hanning() {
    return {KernelFamily::tukey_hanning, 2, M_PI * M_PI / 4.0, 3.0 / 4.0};
}

KernelSpec KernelSpec::quadratic_spectral() {
    return {KernelFamily::quadratic_spectral, 2, 18.0 * M_PI * M_PI / 125.0, 1.0};
}

KernelSpec KernelSpec::flat_top() {
    return {KernelFamily::flat_top, infinite_order, kNaN, 4.0 / 3.0};
}

double KernelSpec::weight(double x) const {
    const double a = std::abs(x);
    switch (family) {
        case KernelFamily::bartlett:
            return a <= 1.0 ? 1.0 - a : 0.0;
        case KernelFamily::parzen:
            if (a <= 0.5) return 1.0 - 6.0 * a * a + 6.0 * a * a * a;
            if (a <= 1.0) {
                const double t = 1.0 - a;
                return 2.0 * t * t * t;
            }
            return 0.0;
        case KernelFamily::tukey_hanning:
            return a <= 1.0 ? 0.5 * (1.0 + std::cos(M_PI * x)) : 0.0;
        case KernelFamily::quadratic_spectral: {
            if (a < 1e-8) return 1.0;  // removable singularity at 0
            const double z = 6.0 * M_PI * a / 5.0;
            return 25.0 / (12.0 * M_PI * M_PI * a * a) * (std::sin(z) / z - std::cos(z));
        }
        case KernelFamily::flat_top:
            if (a <= 0.5) return 1.0;
            if (a <= 1.0) return 2.0 * (1.0 - a);
            return 0.0;
    }
    return 0.0;
}

std::string KernelSpec::name() const {
    switch (family) {
        case KernelFamily::bartlett: return "bartlett";
        case KernelFamily::parzen: return "parzen";
        case KernelFamily::tukey_hanning: return "tukey_hanning";
        case KernelFamily::quadratic_spectral: return "quadratic_spectral";
        case KernelFamily::flat_top: return "flat_top";
    }
    return "unknown";
}

}  // namespace lrd
