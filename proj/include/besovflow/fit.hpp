#pragma once

// Log-log slope fitting for scaling scans.

#include "besovflow/norms.hpp"

namespace besovflow {

struct FitWindow {
    int drop_coarse = 1;  // scan entries removed from the large-scale end
    int drop_fine = 2;    // entries removed from the small-scale end
};

struct FitResult {
    double slope = 0.0;
    double stderr = 0.0;
    int points = 0;
};

// Least squares of log2(value) against log2(scale) inside the window.
// Throws on zero values ("zero norm in scan") and on windows with < 3 points.
FitResult fit_exponent(const NormScan& scan, const FitWindow& window = {});

// Same fit restricted to scales inside [scale_lo, scale_hi].
FitResult fit_exponent_range(const NormScan& scan, double scale_lo, double scale_hi);

// Window shrunk to {1,1} when the scan has five scales or fewer.
FitWindow adaptive_window(std::size_t n_scales);

}  // namespace besovflow
