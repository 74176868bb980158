#pragma once

// Generators for periodic fields with a prescribed regularity exponent theta.
// The lacunary construction places exactly one random Fourier mode in each
// dyadic annulus 2^{j-1} <= |k| < 2^j with coefficient amplitude * 2^{-j
// theta}, so its dyadic block norms are known in closed form. The
// power-spectrum construction draws i.i.d. phases on |f^(k)| ~ |k|^-(theta +
// d/2), which has the same block decay in mean square.

#include <cstdint>
#include <vector>

#include "besovflow/grid.hpp"

namespace besovflow {

enum class FieldKind { lacunary, power_spectrum };

struct RoughFieldSpec {
    double theta = 0.5;            // in (0,1)
    FieldKind kind = FieldKind::lacunary;
    int jmax = 5;                  // 2^jmax must stay below Nyquist/2
    std::uint64_t seed = 0;
    bool divergence_free = false;  // requires components == grid.dim
    double amplitude = 1.0;
    // Distinct modes per annulus, amplitude-normalized so the exact L2 block
    // norms are unchanged; > 1 densifies quadratic pair interactions (levels
    // with fewer available lattice vectors are filled as far as possible).
    int modes_per_level = 1;
};

// One term of the lacunary sum: amplitude_coeff * d * cos(2 pi <k,x> + phase).
struct LacunaryMode {
    int level = 0;
    std::array<int, 3> k{0, 0, 0};
    std::array<double, 3> direction{1.0, 0.0, 0.0};  // unit vector over components
    double phase = 0.0;
    double coeff = 0.0;
};

// The exact mode list the lacunary field is built from (oracle for tests).
// Levels run 1..jmax; jmax = 0 yields a single |k| = 1 mode. Draws depend
// only on (seed, level), never on the grid, so refining the grid keeps the
// same function.
std::vector<LacunaryMode> lacunary_modes(const RoughFieldSpec& spec, const Grid& grid,
                                         int components);

Field lacunary_field(const RoughFieldSpec& spec, const Grid& grid, int components = 1);
Field power_spectrum_field(const RoughFieldSpec& spec, const Grid& grid, int components = 1);
Field rough_field(const RoughFieldSpec& spec, const Grid& grid, int components = 1);

// Random smooth band-limited field (Gaussian coefficients, |k|_inf <= kmax).
Field smooth_field(const Grid& grid, int kmax, std::uint64_t seed, int components,
                   bool divergence_free);

// Space-time series u(t,x) = sum_j 2^{-j theta_space} sum_m M^{-1/2}
// g_{jm}(2^{j alpha} t) e_{jm}(x), alpha = theta_space / theta_time, with
// g_{jm} unit cosines of random phase and rate and e_{jm} random modes in
// annulus j. Level-j time gates oscillate at rates omega 2^{j alpha}, omega
// in [1,2), so time increments scale like h^{theta_time} between the gate
// knees while every fixed-time slice keeps spatial exponent theta_space.
// Several modes per level keep quadratic pair interactions dense, which the
// pressure experiments need.
struct SpaceTimeSeries {
    Grid grid;
    double theta_space = 0.5;
    double theta_time = 0.5;
    int jmax = 0;
    int modes_per_level = 8;
    double rate_min = 0.0;  // slowest / fastest gate rates actually drawn
    double rate_max = 0.0;
    std::vector<double> times;
    std::vector<Field> frames;

    // Lag window where the constructed time roughness scales: knees of the
    // fastest and slowest gates.
    double rough_lag_min() const { return 1.0 / (M_PI * rate_max); }
    double rough_lag_max() const { return 1.0 / (M_PI * rate_min); }
};

SpaceTimeSeries synthetic_series(const Grid& grid, double theta_space, double theta_time,
                                 int jmax, std::uint64_t seed, int components,
                                 bool divergence_free, double t_end, int n_frames,
                                 int modes_per_level = 8);

namespace detail {
// Counter-based generator: every draw is a pure function of (seed, stream,
// counter), so generation order never affects output.
struct CounterRng {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::uint64_t bits(std::uint64_t counter) const;
    double uniform(std::uint64_t counter) const;  // [0, 1)
};
}  // namespace detail

}  // namespace besovflow
