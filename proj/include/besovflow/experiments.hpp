#pragma once

// End-to-end claim runners shared by the CLI and the acceptance suite. Every
// runner produces an ExperimentReport whose pass flag is a function of the
// recorded numbers only.

#include "besovflow/euler.hpp"
#include "besovflow/interp.hpp"
#include "besovflow/report.hpp"

namespace besovflow {

struct MollificationClaimParams {
    double theta = 0.5;
    double r = 2.0;
    std::uint64_t seed = 11;
    MollifierKernel kernel = MollifierKernel::gaussian_truncated;
    int jmax = 0;      // 0 = deepest level below half Nyquist
    int ensemble = 6;  // independent realizations averaged per scan point
};
ExperimentReport run_mollification_claim(const MollificationClaimParams& p, const Grid& grid,
                                         const std::string& out_dir = "");

struct InterpInequalityClaimParams {
    int corpus_size = 20;
    double r = 2.0;
    std::uint64_t seed = 23;
    std::vector<std::pair<double, double>> gamma_theta = {
        {0.3, 0.3}, {0.3, 0.5}, {0.3, 0.7}, {0.5, 0.7}, {0.7, 0.7}};
};
ExperimentReport run_interp_inequality_claim(const InterpInequalityClaimParams& p,
                                             const Grid& grid);

struct KInequalityClaimParams {
    bool trilinear = false;
    int corpus_size = 10;
    double theta = 0.6;
    std::uint64_t seed = 37;
    int jmax = 4;
    TGrid t_grid{1e-3, 1e3, 61};
};
ExperimentReport run_k_inequality_claim(const KInequalityClaimParams& p, const Grid& grid,
                                        const std::string& out_dir = "");

ExperimentReport run_pressure_double_claim(const DoubleRegularityParams& p, const Grid& grid);

struct BesovEquivalenceClaimParams {
    std::vector<double> thetas = {0.4, 0.6};
    int corpus_size = 10;
    std::uint64_t seed = 51;
    int jmax = 5;
};
ExperimentReport run_besov_equivalence_claim(const BesovEquivalenceClaimParams& p,
                                             const Grid& grid);

struct TimeRegularityClaimParams {
    std::string claim = "i";
    double theta = 0.5;
    double s = 2.0;
    double r = 2.0;
    double beta = 0.0;
    double epsilon = 0.01;
    std::uint64_t seed = 67;
    int jmax = 5;
    int frames = 0;  // 0 = 513
    double t_end = 1.0;
    int ensemble = 6;
};
ExperimentReport run_time_regularity_claim(const TimeRegularityClaimParams& p, const Grid& grid);

struct DtIdentityClaimParams {
    std::uint64_t seed = 5;
    double dt_base = 2.5e-4;
    double t_end = 0.05;
    std::vector<int> strides = {8, 4, 2};
};
ExperimentReport run_dt_identity_claim(const DtIdentityClaimParams& p, const Grid& grid);

// Normalized random smooth divergence-free initial data (max speed 1).
Field smooth_initial_data(const Grid& grid, std::uint64_t seed);

// The K-inequality operator handles the experiments wire into `interp`.
BilinearHandle pressure_bilinear_handle();
TrilinearHandle pressure_trilinear_integrated_handle();

}  // namespace besovflow
