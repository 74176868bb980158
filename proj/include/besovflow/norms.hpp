#pragma once

// Norm machinery on the torus: L^r norms, finite-difference and dyadic-block
// Besov seminorm estimators, mollification, mollification scaling scans, and
// the multiplicative interpolation-inequality checks.
//
// Vector and tensor fields are measured through the pointwise Euclidean
// magnitude over components. Shifts are exact periodic lattice rotations, so
// no extension operator is needed.

#include <string>
#include <vector>

#include "besovflow/grid.hpp"

namespace besovflow {

enum class BesovEstimator { difference, littlewood_paley };

struct BesovParams {
    double theta = 0.5;  // supported range (0,2)
    double r = 2.0;      // integrability, [1, inf]
    double s = kInf;     // only s = inf implemented
    BesovEstimator estimator = BesovEstimator::littlewood_paley;
};

// Quadrature L^r norm (uniform weights 1/N); r = inf is the max norm.
double lp_norm(const Field& f, double r);

// First differences for theta in (0,1); second differences for theta in
// [1,2); first differences of the gradient would be equivalent but second
// differences cover the integer case with one formula branch.
double besov_seminorm_diff(const Field& f, const BesovParams& p);

// sup_j 2^{j theta} ||block_j f||_{L^r}; block j keeps the integer
// wavevectors with 2^{j-1} <= |k| < 2^j (the mean never contributes).
double besov_seminorm_lp(const Field& f, const BesovParams& p);

double besov_seminorm(const Field& f, const BesovParams& p);
// Full norm: lp_norm + seminorm.
double besov_norm(const Field& f, const BesovParams& p);

// Dyadic block L^r norms for j = 1..J (J covers the grid's spectral range).
std::vector<double> lp_block_norms(const Field& f, double r);
std::vector<double> lp_block_norms(const SpectralField& F, double r);

enum class MollifierKernel { gaussian_truncated, polynomial_bump };

struct MollifierSpec {
    MollifierKernel kernel = MollifierKernel::gaussian_truncated;
    double delta = 0.0;  // physical width; must resolve at least one cell
};

// Periodic convolution with the unit-mass kernel at width delta, evaluated
// spectrally. Preserves the mean exactly and commutes with divergence.
Field mollify(const Field& f, const MollifierSpec& m);

// Spectral multiplier of the discrete kernel, indexed like SpectralField
// bins; symbol(0) == 1 after normalization.
std::vector<double> mollifier_symbol(const Grid& g, const MollifierSpec& m);

struct NormScan {
    std::vector<double> scales;  // strictly decreasing
    std::vector<double> values;  // nonnegative
    std::string estimator_id;
};

void validate(const NormScan& s);

struct MollificationScans {
    NormScan approx;      // ||f - f_delta||_{L^r}          ~ delta^theta
    NormScan gradient;    // ||grad f_delta||_{L^r}         ~ delta^(theta-1)
    NormScan commutator;  // ||f_d (x) f_d - (f (x) f)_d||  ~ delta^(2 theta)
};

MollificationScans mollification_scan(const Field& f, double r,
                                      std::vector<double> deltas,
                                      MollifierKernel kernel = MollifierKernel::gaussian_truncated);

// Dyadic deltas spanning [2 cells, period/2], coarse first.
std::vector<double> default_mollification_deltas(const Grid& g);

struct InterpInequalityReport {
    double ratio_lower = 0.0;  // [f]_{B^gamma} vs L^r/B^theta product bound
    double ratio_upper = 0.0;  // [f]_{B^theta} vs B^gamma/W^{1,r} product bound
    double bound = 10.0;
    bool pass = false;
};

// Both sides of the multiplicative interpolation inequalities for
// 0 < gamma <= theta < 1; ratios of 0/0 count as 0.
InterpInequalityReport check_interpolation_inequalities(const Field& f, double gamma,
                                                        double theta, double r);

}  // namespace besovflow
