#include "besovflow/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace besovflow {

namespace detail {

namespace {
std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace

std::uint64_t CounterRng::bits(std::uint64_t counter) const {
    return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ counter);
}

double CounterRng::uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

}  // namespace detail

namespace {

void validate_spec(const RoughFieldSpec& spec, const Grid& grid, int components) {
    if (!(spec.theta > 0.0 && spec.theta < 1.0))
        throw std::invalid_argument("rough field: theta must lie in (0,1)");
    if (spec.jmax < 0) throw std::invalid_argument("rough field: jmax must be >= 0");
    int nyq = grid.n[0];
    for (int a = 1; a < grid.dim; ++a) nyq = std::min(nyq, grid.n[a]);
    if ((1 << spec.jmax) >= nyq / 2)
        throw std::invalid_argument("rough field: 2^jmax at or above Nyquist cutoff");
    if (spec.divergence_free && components != grid.dim)
        throw std::invalid_argument("rough field: divergence-free needs components == dim");
}

bool has_odd_component(const std::array<int, 3>& k, int dim) {
    for (int a = 0; a < dim; ++a)
        if (k[a] & 1) return true;
    return false;
}

// Canonical representative of {k, -k}: first nonzero component positive.
bool is_canonical(const std::array<int, 3>& k, int dim) {
    for (int a = 0; a < dim; ++a) {
        if (k[a] > 0) return true;
        if (k[a] < 0) return false;
    }
    return false;
}

// Integer wavevector with |k| in [lo, hi), at least one odd component (keeps
// grid-sampled extrema dense), canonical sign, distinct from `used`.
std::array<int, 3> draw_wavevector(const detail::CounterRng& rng, int dim, double lo, double hi,
                                   std::uint64_t& counter,
                                   const std::vector<std::array<int, 3>>* used = nullptr) {
    const int span = static_cast<int>(std::ceil(hi)) - 1;
    for (int tries = 0; tries < 100000; ++tries) {
        std::array<int, 3> k{0, 0, 0};
        double mag2 = 0.0;
        for (int a = 0; a < dim; ++a) {
            k[a] = static_cast<int>(std::floor(rng.uniform(counter++) * (2 * span + 1))) - span;
            mag2 += static_cast<double>(k[a]) * k[a];
        }
        if (mag2 < lo * lo || mag2 >= hi * hi) continue;
        if (!has_odd_component(k, dim)) continue;
        if (!is_canonical(k, dim)) {
            for (int a = 0; a < dim; ++a) k[a] = -k[a];
        }
        if (used && std::find(used->begin(), used->end(), k) != used->end()) continue;
        return k;
    }
    throw std::runtime_error("rough field: wavevector draw failed");
}

// Unit direction over the field components; orthogonal to k when requested.
std::array<double, 3> draw_direction(const detail::CounterRng& rng, int components,
                                     const std::array<int, 3>& k, bool orthogonal_to_k,
                                     std::uint64_t& counter) {
    for (int tries = 0; tries < 10000; ++tries) {
        std::array<double, 3> d{0.0, 0.0, 0.0};
        for (int a = 0; a < components; ++a) {
            double u1 = rng.uniform(counter++);
            double u2 = rng.uniform(counter++);
            u1 = std::max(u1, 1e-300);
            d[a] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
        }
        if (orthogonal_to_k) {
            double kk = 0.0, kd = 0.0;
            for (int a = 0; a < components; ++a) {
                kk += static_cast<double>(k[a]) * k[a];
                kd += k[a] * d[a];
            }
            for (int a = 0; a < components; ++a) d[a] -= k[a] * kd / kk;
        }
        double norm = 0.0;
        for (int a = 0; a < components; ++a) norm += d[a] * d[a];
        norm = std::sqrt(norm);
        if (norm < 0.3) continue;
        for (int a = 0; a < components; ++a) d[a] /= norm;
        return d;
    }
    throw std::runtime_error("rough field: direction draw failed");
}

std::int64_t mode_index(const Grid& g, const std::array<int, 3>& k) {
    auto s = g.strides();
    std::int64_t flat = 0;
    for (int a = 0; a < g.dim; ++a) {
        int idx = k[a] >= 0 ? k[a] : k[a] + g.n[a];
        flat += idx * s[a];
    }
    return flat;
}

void add_cosine_mode(SpectralField& F, const std::array<int, 3>& k,
                     const std::array<double, 3>& direction, double amplitude, double phase) {
    const std::complex<double> half_pos = 0.5 * amplitude * std::polar(1.0, phase);
    const std::complex<double> half_neg = std::conj(half_pos);
    std::array<int, 3> neg{-k[0], -k[1], -k[2]};
    std::int64_t ip = mode_index(F.grid(), k);
    std::int64_t in = mode_index(F.grid(), neg);
    for (int c = 0; c < F.components(); ++c) {
        F.component(c)[ip] += direction[c] * half_pos;
        F.component(c)[in] += direction[c] * half_neg;
    }
}

}  // namespace

std::vector<LacunaryMode> lacunary_modes(const RoughFieldSpec& spec, const Grid& grid,
                                         int components) {
    validate_spec(spec, grid, components);
    if (spec.modes_per_level < 1)
        throw std::invalid_argument("rough field: modes_per_level must be >= 1");
    std::vector<LacunaryMode> modes;
    const int jlo = spec.jmax == 0 ? 0 : 1;
    for (int j = jlo; j <= spec.jmax; ++j) {
        // level 0 (jmax = 0 only) pins |k| = 1; level j >= 1 draws annulus j
        const double lo = j == 0 ? 1.0 : std::ldexp(1.0, j - 1);
        const double hi = j == 0 ? 1.1 : std::ldexp(1.0, j);
        std::vector<std::array<int, 3>> used;
        std::vector<LacunaryMode> level;
        for (int m = 0; m < spec.modes_per_level; ++m) {
            detail::CounterRng rng{spec.seed, 0x1ac00000u +
                                                  (static_cast<std::uint64_t>(j) << 8) +
                                                  static_cast<std::uint64_t>(m)};
            std::uint64_t ctr = 0;
            LacunaryMode mode;
            mode.level = j;
            try {
                mode.k = draw_wavevector(rng, grid.dim, lo, hi, ctr, &used);
            } catch (const std::runtime_error&) {
                break;  // annulus exhausted; keep what fits
            }
            used.push_back(mode.k);
            mode.direction =
                components == 1
                    ? std::array<double, 3>{1.0, 0.0, 0.0}
                    : draw_direction(rng, components, mode.k, spec.divergence_free, ctr);
            mode.phase = 2.0 * M_PI * rng.uniform(ctr++);
            level.push_back(mode);
        }
        // amplitude split keeps the level's L2 block norm exact
        const double coeff = spec.amplitude *
                             std::pow(2.0, -static_cast<double>(j) * spec.theta) /
                             std::sqrt(static_cast<double>(level.size()));
        for (auto& mode : level) {
            mode.coeff = coeff;
            modes.push_back(mode);
        }
    }
    return modes;
}

Field lacunary_field(const RoughFieldSpec& spec, const Grid& grid, int components) {
    auto modes = lacunary_modes(spec, grid, components);
    SpectralField F(grid, components);
    for (const auto& m : modes) add_cosine_mode(F, m.k, m.direction, m.coeff, m.phase);
    return inverse(F);
}

Field power_spectrum_field(const RoughFieldSpec& spec, const Grid& grid, int components) {
    validate_spec(spec, grid, components);
    SpectralField F(grid, components);
    const double kcut = std::ldexp(1.0, spec.jmax);
    const double expo = spec.theta + grid.dim / 2.0;
    for_each_mode(grid, [&](std::int64_t flat, const std::array<int, 3>& k) {
        double mag2 = 0.0;
        for (int a = 0; a < grid.dim; ++a) mag2 += static_cast<double>(k[a]) * k[a];
        if (mag2 == 0.0 || mag2 >= kcut * kcut) return;
        if (!is_canonical(k, grid.dim)) return;  // conjugate bin filled via mirror
        const double modulus = spec.amplitude * std::pow(mag2, -0.5 * expo);
        std::array<int, 3> neg{-k[0], -k[1], -k[2]};
        std::int64_t nflat = mode_index(grid, neg);
        for (int c = 0; c < components; ++c) {
            detail::CounterRng rng{spec.seed, 0x905bec00u + static_cast<std::uint64_t>(c)};
            double phase = 2.0 * M_PI * rng.uniform(static_cast<std::uint64_t>(flat));
            auto v = std::polar(modulus, phase);
            F.component(c)[flat] = v;
            F.component(c)[nflat] = std::conj(v);
        }
    });
    if (spec.divergence_free) F = leray_project(F);
    return inverse(F);
}

Field rough_field(const RoughFieldSpec& spec, const Grid& grid, int components) {
    return spec.kind == FieldKind::lacunary ? lacunary_field(spec, grid, components)
                                            : power_spectrum_field(spec, grid, components);
}

Field smooth_field(const Grid& grid, int kmax, std::uint64_t seed, int components,
                   bool divergence_free) {
    if (kmax < 1 || kmax >= grid.n[0] / 2)
        throw std::invalid_argument("smooth_field: kmax out of range");
    if (divergence_free && components != grid.dim)
        throw std::invalid_argument("smooth_field: divergence-free needs components == dim");
    SpectralField F(grid, components);
    for_each_mode(grid, [&](std::int64_t flat, const std::array<int, 3>& k) {
        double mag2 = 0.0;
        bool in_band = true;
        for (int a = 0; a < grid.dim; ++a) {
            if (std::abs(k[a]) > kmax) in_band = false;
            mag2 += static_cast<double>(k[a]) * k[a];
        }
        if (!in_band || mag2 == 0.0 || !is_canonical(k, grid.dim)) return;
        std::array<int, 3> neg{-k[0], -k[1], -k[2]};
        std::int64_t nflat = mode_index(grid, neg);
        const double decay = std::exp(-0.5 * mag2);
        for (int c = 0; c < components; ++c) {
            detail::CounterRng rng{seed, 0x500f7u + static_cast<std::uint64_t>(c)};
            double u1 = std::max(rng.uniform(2 * static_cast<std::uint64_t>(flat)), 1e-300);
            double u2 = rng.uniform(2 * static_cast<std::uint64_t>(flat) + 1);
            double amp = std::sqrt(-2.0 * std::log(u1)) * decay;
            auto v = std::polar(amp, 2.0 * M_PI * u2);
            F.component(c)[flat] = v;
            F.component(c)[nflat] = std::conj(v);
        }
    });
    if (divergence_free) F = leray_project(F);
    return inverse(F);
}

SpaceTimeSeries synthetic_series(const Grid& grid, double theta_space, double theta_time,
                                 int jmax, std::uint64_t seed, int components,
                                 bool divergence_free, double t_end, int n_frames,
                                 int modes_per_level) {
    if (!(theta_time > 0.0 && theta_time < 1.0))
        throw std::invalid_argument("synthetic_series: theta_time must lie in (0,1)");
    if (n_frames < 8) throw std::invalid_argument("synthetic_series: need >= 8 frames");
    if (modes_per_level < 1)
        throw std::invalid_argument("synthetic_series: need >= 1 mode per level");
    RoughFieldSpec spec;
    spec.theta = theta_space;
    spec.jmax = jmax;
    spec.seed = seed;
    spec.divergence_free = divergence_free;
    spec.modes_per_level = modes_per_level;
    auto spatial = lacunary_modes(spec, grid, components);

    struct GatedMode {
        LacunaryMode mode;
        double rate;
        double time_phase;
    };
    const double alpha = theta_space / theta_time;
    const double dt = t_end / (n_frames - 1);
    std::vector<GatedMode> modes;
    double rate_min = kInf, rate_max = 0.0;
    for (std::size_t i = 0; i < spatial.size(); ++i) {
        detail::CounterRng rng{seed, 0x71e00000u + static_cast<std::uint64_t>(i)};
        GatedMode gm;
        gm.mode = spatial[i];
        gm.rate = (1.0 + rng.uniform(0)) * std::pow(2.0, alpha * gm.mode.level);
        gm.time_phase = 2.0 * M_PI * rng.uniform(1);
        rate_min = std::min(rate_min, gm.rate);
        rate_max = std::max(rate_max, gm.rate);
        modes.push_back(gm);
    }
    if (rate_max * dt > 0.25)
        throw std::invalid_argument("synthetic_series: time sampling too coarse for jmax");

    SpaceTimeSeries series;
    series.grid = grid;
    series.theta_space = theta_space;
    series.theta_time = theta_time;
    series.jmax = jmax;
    series.modes_per_level = modes_per_level;
    series.rate_min = rate_min;
    series.rate_max = rate_max;
    series.times.resize(n_frames);
    series.frames.resize(n_frames);
    parallel_for(n_frames, [&](std::int64_t fi) {
        const double t = fi * dt;
        series.times[static_cast<std::size_t>(fi)] = t;
        SpectralField F(grid, components);
        for (const auto& gm : modes) {
            const double gate = std::cos(2.0 * M_PI * gm.rate * t + gm.time_phase);
            add_cosine_mode(F, gm.mode.k, gm.mode.direction, gm.mode.coeff * gate,
                            gm.mode.phase);
        }
        series.frames[static_cast<std::size_t>(fi)] = inverse(F);
    });
    return series;
}

}  // namespace besovflow
