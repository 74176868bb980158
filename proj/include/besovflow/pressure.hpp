#pragma once

// Spectral pressure solvers on the torus:
//   bilinear:  -Lap p = div div (u (x) w),        p of zero mean;
//   trilinear: -Lap q = div div div (u (x) w (x) z), q of zero mean.
// Products are formed in real space after dealias truncation (2/3 of Nyquist
// for quadratic, 1/2 for cubic products), so exponent fits carry no aliasing
// bias.

#include <array>
#include <string>
#include <vector>

#include "besovflow/grid.hpp"
#include "besovflow/synth.hpp"

namespace besovflow {

enum class DivergenceHandling { reject, project };

struct PressureSolveResult {
    Field p;                       // zero mean
    double residual = 0.0;         // relative spectral L2 residual of the solve
    double mean_abs = 0.0;         // |mean(p)| after the solve
    std::array<double, 3> input_l2{0.0, 0.0, 0.0};
};

PressureSolveResult solve_bilinear(const Field& u, const Field& w,
                                   DivergenceHandling handling = DivergenceHandling::reject);
PressureSolveResult solve_trilinear(const Field& u, const Field& w, const Field& z,
                                    DivergenceHandling handling = DivergenceHandling::reject);

// Spectral cores used by the time-stepper and the K-inequality handles.
// Inputs are velocity spectra; outputs are zero-mean scalar pressure spectra.
SpectralField bilinear_pressure_spectral(const SpectralField& u, const SpectralField& w);
SpectralField trilinear_pressure_spectral(const SpectralField& u, const SpectralField& w,
                                          const SpectralField& z);

// Zero-mean solution of -Lap p = div div A for a d*d tensor field A (row
// major components), no dealiasing applied.
SpectralField poisson_divdiv(const Field& tensor);

struct DoubleRegularityParams {
    double theta = 0.4;
    double r = 2.0;
    int corpus_size = 10;
    std::uint64_t seed = 1;
    int jmax = 0;  // 0 = deepest level compatible with the dealias cutoff
};

struct DoubleRegularityReport {
    double theta = 0.0;
    double r = 0.0;
    std::vector<double> fitted_exponents;
    double min_fitted = 0.0;
    double floor = 0.0;  // 2 theta - 0.15
    double max_cz_ratio = 0.0;  // ||p||_{B^theta_r} / ||u||^2_{B^theta_2r}
    bool pass = false;
    std::vector<std::string> notes;
};

// Generates a corpus of divergence-free lacunary fields with exponent theta,
// solves the pressure for each, and fits the dyadic-block exponent of p.
DoubleRegularityReport double_regularity_experiment(const DoubleRegularityParams& params,
                                                    const Grid& grid);

}  // namespace besovflow
