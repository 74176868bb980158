#include "besovflow/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace besovflow {

FitWindow adaptive_window(std::size_t n_scales) {
    return n_scales <= 5 ? FitWindow{1, 1} : FitWindow{1, 2};
}

FitResult fit_exponent_range(const NormScan& scan, double scale_lo, double scale_hi) {
    validate(scan);
    NormScan inside;
    inside.estimator_id = scan.estimator_id;
    for (std::size_t i = 0; i < scan.scales.size(); ++i) {
        const double s = scan.scales[i];
        if (s >= scale_lo * (1.0 - 1e-12) && s <= scale_hi * (1.0 + 1e-12)) {
            inside.scales.push_back(s);
            inside.values.push_back(scan.values[i]);
        }
    }
    return fit_exponent(inside, FitWindow{0, 0});
}

FitResult fit_exponent(const NormScan& scan, const FitWindow& window) {
    validate(scan);
    const std::size_t n = scan.scales.size();
    const std::size_t lo = static_cast<std::size_t>(std::max(window.drop_coarse, 0));
    const std::size_t drop_hi = static_cast<std::size_t>(std::max(window.drop_fine, 0));
    if (lo + drop_hi >= n || n - lo - drop_hi < 3)
        throw std::invalid_argument("fit_exponent: fewer than 3 points in window");
    const std::size_t hi = n - drop_hi;

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const int m = static_cast<int>(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) {
        if (!(scan.values[i] > 0.0))
            throw std::invalid_argument("fit_exponent: zero norm in scan");
        const double x = std::log2(scan.scales[i]);
        const double y = std::log2(scan.values[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = m * sxx - sx * sx;
    if (!(std::abs(denom) > 0.0)) throw std::invalid_argument("fit_exponent: degenerate scales");
    FitResult out;
    out.points = m;
    out.slope = (m * sxy - sx * sy) / denom;
    const double intercept = (sy - out.slope * sx) / m;

    double rss = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        const double x = std::log2(scan.scales[i]);
        const double y = std::log2(scan.values[i]);
        const double e = y - (out.slope * x + intercept);
        rss += e * e;
    }
    if (m > 2) out.stderr = std::sqrt(rss / (m - 2) / (sxx - sx * sx / m));
    return out;
}

}  // namespace besovflow
