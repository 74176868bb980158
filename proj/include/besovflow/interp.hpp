#pragma once

// Real-interpolation layer: K-functionals of spectral Hilbert couples,
// (X,Y)_{theta,r} norms by quadrature, and the product-form K-inequality
// verifications for bilinear and trilinear operator handles.
//
// All couples are realized with Bessel-potential weights w(k) =
// (1 + (2 pi |k/L|)^2)^(sigma/2), the r = 2 case where the decomposition
// infimum has a closed form. The closed form K2 satisfies K2 <= K <= sqrt(2)
// K2 for the true K, and every pass/fail bound below folds in that bracket.

#include <functional>
#include <string>
#include <vector>

#include "besovflow/grid.hpp"

namespace besovflow {

struct HilbertCouple {
    double sigma_x = 0.0;
    double sigma_y = 2.0;
    std::string label = "(H^0,H^2)";

    static HilbertCouple sobolev(double sx, double sy);
    // kappa2 = |k/L|^2 for an integer wavevector k.
    double weight_x(double kappa2) const;
    double weight_y(double kappa2) const;
};

// Closed-form quadratic relaxation
//   K2(t,x)^2 = sum_k |x_k|^2 wX^2 (t wY)^2 / (wX^2 + (t wY)^2),
// the exact minimizer of inf_{a+b=x} sqrt(|a|_X^2 + t^2 |b|_Y^2).
double k_functional(const SpectralField& x, const HilbertCouple& couple, double t);

struct TGrid {
    double t_min = 1e-4;
    double t_max = 1e4;
    int points = 61;
    std::vector<double> values() const;  // log-spaced
};

struct KProfile {
    std::vector<double> t;
    std::vector<double> K;
    std::vector<double> bound_min_norm;  // min(|x|_X, t |x|_Y)
};

KProfile k_profile(const SpectralField& x, const HilbertCouple& couple, const TGrid& grid = {});

struct KProfileChecks {
    bool monotone = false;
    bool bounded_by_min = false;          // K2 <= min(|x|_X, t|x|_Y), exact
    bool concave_bracket = false;         // sqrt(2) K2(t_mid) >= chord, exact for true K
    bool concave_squared_couple = false;  // tau -> K2(sqrt tau)^2 concave, exact
    double max_monotone_violation = 0.0;
    double max_bracket_violation = 0.0;
    double max_squared_violation = 0.0;
};

KProfileChecks check_k_profile(const KProfile& profile);

void write_k_profile_csv(const KProfile& profile, const std::string& path,
                         const std::string& config_hash);

struct InterpNormOpts {
    double t_min = 0.0;  // 0 = choose automatically
    double t_max = 0.0;
    int points_per_decade = 48;
    double decay = 1e-6;  // required endpoint decay of the integrand
};

// ||t^-theta K(t,x)||_{L^r(dt/t)} by Simpson quadrature on a log grid; the
// range is expanded until the integrand has decayed at both ends, or an
// explicit range is validated ("t-range too narrow" when it is not).
double interp_norm(const SpectralField& x, const HilbertCouple& couple, double theta, double r,
                   const InterpNormOpts& opts = {});

struct BesovEquivalenceReport {
    double interp_value = 0.0;
    double lp_value = 0.0;
    double ratio = 0.0;  // interp / lp, 0 when both vanish
    double lo = 0.05, hi = 20.0;
    bool pass = false;
};

// (L^2, W^{2,2})_{theta/2, inf} norm of the mean-free part against the
// dyadic-block estimator of the same exponent.
BesovEquivalenceReport verify_besov_equivalence(const Field& f, double theta,
                                                const InterpNormOpts& opts = {});

using BilinearHandle =
    std::function<SpectralField(const SpectralField&, const SpectralField&)>;
using TrilinearHandle = std::function<SpectralField(const SpectralField&, const SpectralField&,
                                                    const SpectralField&)>;

struct KInequalityReport {
    std::vector<double> t;
    std::vector<double> ratio;
    double sup_ratio = 0.0;
    bool skipped = false;  // zero input
    bool pass = false;
    double budget = 100.0;
    std::vector<std::string> deviations;
};

// ratio(t) = K(t, T(x1,x2); Y) / (K(sqrt t, x1; X) K(sqrt t, x2; X)).
KInequalityReport verify_bilinear_K_inequality(const SpectralField& x1, const SpectralField& x2,
                                               const BilinearHandle& op,
                                               const HilbertCouple& couple_x,
                                               const HilbertCouple& couple_y,
                                               const TGrid& grid = {});

// ratio(t) = K(t, T(x1,x2,x3); Y) /
//   (|x1|_X K(rt,x2) K(rt,x3) + K(rt,x1) (|x2|_X K(rt,x3) + |x3|_X K(rt,x2)))
// with rt = sqrt t.
KInequalityReport verify_trilinear_K_inequality(const SpectralField& x1, const SpectralField& x2,
                                                const SpectralField& x3,
                                                const TrilinearHandle& op,
                                                const HilbertCouple& couple_x,
                                                const HilbertCouple& couple_y,
                                                const TGrid& grid = {});

// Weighted norm |x|_{H^sigma} used as the X_1 factor of the trilinear bound.
double weighted_norm(const SpectralField& x, double sigma);

// Spectral antiderivative (2 pi |k/L|)^-1 x_k, zero mean: shifts a once-
// differentiated output back into nonnegative-order couples.
SpectralField half_laplacian_integrate(const SpectralField& x);

}  // namespace besovflow
