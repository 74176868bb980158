#include "besovflow/interp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "besovflow/norms.hpp"

namespace besovflow {

HilbertCouple HilbertCouple::sobolev(double sx, double sy) {
    HilbertCouple c;
    c.sigma_x = sx;
    c.sigma_y = sy;
    c.label = "(H^" + std::to_string(sx) + ",H^" + std::to_string(sy) + ")";
    return c;
}

double HilbertCouple::weight_x(double kappa2) const {
    return std::pow(1.0 + 4.0 * M_PI * M_PI * kappa2, 0.5 * sigma_x);
}

double HilbertCouple::weight_y(double kappa2) const {
    return std::pow(1.0 + 4.0 * M_PI * M_PI * kappa2, 0.5 * sigma_y);
}

namespace {

// Per-mode data compressed over components: |x|^2 mass per (wX, wY) pair.
struct ModeMass {
    double mass;
    double wx2;
    double wy2;
};

std::vector<ModeMass> collect_modes(const SpectralField& x, const HilbertCouple& couple) {
    const Grid& g = x.grid();
    std::vector<ModeMass> modes;
    modes.reserve(static_cast<std::size_t>(g.points()));
    for_each_mode(g, [&](std::int64_t flat, const std::array<int, 3>& k) {
        double mass = 0.0;
        for (int c = 0; c < x.components(); ++c) mass += std::norm(x.component(c)[flat]);
        if (mass == 0.0) return;
        double kappa2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            double ka = k[a] / g.period[a];
            kappa2 += ka * ka;
        }
        double wx = couple.weight_x(kappa2);
        double wy = couple.weight_y(kappa2);
        modes.push_back({mass, wx * wx, wy * wy});
    });
    return modes;
}

double k2_from_modes(const std::vector<ModeMass>& modes, double t) {
    const double t2 = t * t;
    double acc = 0.0;
    for (const auto& m : modes)
        acc += m.mass * m.wx2 * t2 * m.wy2 / (m.wx2 + t2 * m.wy2);
    return std::sqrt(acc);
}

double norm_x_from_modes(const std::vector<ModeMass>& modes) {
    double acc = 0.0;
    for (const auto& m : modes) acc += m.mass * m.wx2;
    return std::sqrt(acc);
}

double norm_y_from_modes(const std::vector<ModeMass>& modes) {
    double acc = 0.0;
    for (const auto& m : modes) acc += m.mass * m.wy2;
    return std::sqrt(acc);
}

}  // namespace

double k_functional(const SpectralField& x, const HilbertCouple& couple, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("k_functional: t must be positive");
    return k2_from_modes(collect_modes(x, couple), t);
}

std::vector<double> TGrid::values() const {
    if (points < 2 || !(t_min > 0.0) || !(t_max > t_min))
        throw std::invalid_argument("t grid: need t_max > t_min > 0 and >= 2 points");
    std::vector<double> t(static_cast<std::size_t>(points));
    const double step = std::log(t_max / t_min) / (points - 1);
    for (int i = 0; i < points; ++i) t[static_cast<std::size_t>(i)] = t_min * std::exp(i * step);
    return t;
}

KProfile k_profile(const SpectralField& x, const HilbertCouple& couple, const TGrid& grid) {
    auto modes = collect_modes(x, couple);
    const double nx = norm_x_from_modes(modes);
    const double ny = norm_y_from_modes(modes);
    KProfile p;
    p.t = grid.values();
    p.K.resize(p.t.size());
    p.bound_min_norm.resize(p.t.size());
    for (std::size_t i = 0; i < p.t.size(); ++i) {
        p.K[i] = k2_from_modes(modes, p.t[i]);
        p.bound_min_norm[i] = std::min(nx, p.t[i] * ny);
    }
    return p;
}

KProfileChecks check_k_profile(const KProfile& p) {
    KProfileChecks c;
    const std::size_t n = p.t.size();
    double scale = 0.0;
    for (double v : p.K) scale = std::max(scale, v);
    if (scale == 0.0) {
        c.monotone = c.bounded_by_min = c.concave_bracket = c.concave_squared_couple = true;
        return c;
    }
    const double tol = 1e-10 * scale;

    c.monotone = true;
    for (std::size_t i = 1; i < n; ++i) {
        double viol = p.K[i - 1] - p.K[i];
        c.max_monotone_violation = std::max(c.max_monotone_violation, viol / scale);
        if (viol > tol) c.monotone = false;
    }

    c.bounded_by_min = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (p.K[i] > p.bound_min_norm[i] + tol) c.bounded_by_min = false;
    }

    c.concave_bracket = true;
    c.concave_squared_couple = true;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double t1 = p.t[i - 1], t2 = p.t[i], t3 = p.t[i + 1];
        const double chord = p.K[i - 1] + (p.K[i + 1] - p.K[i - 1]) * (t2 - t1) / (t3 - t1);
        const double bracket_viol = chord - std::sqrt(2.0) * p.K[i];
        c.max_bracket_violation = std::max(c.max_bracket_violation, bracket_viol / scale);
        if (bracket_viol > tol) c.concave_bracket = false;

        // tau = t^2, G = K^2: the K-functional of the squared couple.
        const double u1 = t1 * t1, u2 = t2 * t2, u3 = t3 * t3;
        const double g1 = p.K[i - 1] * p.K[i - 1];
        const double g2 = p.K[i] * p.K[i];
        const double g3 = p.K[i + 1] * p.K[i + 1];
        const double gchord = g1 + (g3 - g1) * (u2 - u1) / (u3 - u1);
        const double sq_viol = gchord - g2;
        c.max_squared_violation = std::max(c.max_squared_violation, sq_viol / (scale * scale));
        if (sq_viol > tol * scale) c.concave_squared_couple = false;
    }
    return c;
}

void write_k_profile_csv(const KProfile& profile, const std::string& path,
                         const std::string& config_hash) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path);
    os << "# config=" << config_hash << "\n";
    os << "t,K,bound_min_norm\n";
    os.precision(17);
    for (std::size_t i = 0; i < profile.t.size(); ++i)
        os << profile.t[i] << "," << profile.K[i] << "," << profile.bound_min_norm[i] << "\n";
}

double interp_norm(const SpectralField& x, const HilbertCouple& couple, double theta, double r,
                   const InterpNormOpts& opts) {
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("interp_norm: theta must lie in (0,1)");
    if (!(r >= 1.0)) throw std::invalid_argument("interp_norm: r must lie in [1, inf]");
    auto modes = collect_modes(x, couple);
    if (modes.empty()) return 0.0;

    auto integrand = [&](double t) {
        return std::pow(t, -theta) * k2_from_modes(modes, t);
    };

    const bool explicit_range = opts.t_min > 0.0 && opts.t_max > opts.t_min;
    double lo = explicit_range ? opts.t_min : 1e-4;
    double hi = explicit_range ? opts.t_max : 1e4;
    // Endpoint decay measured on the integrand (t^-theta K)^r; for r = inf
    // the decay applies to the sup integrand itself.
    const double power = r == kInf ? 1.0 : r;
    const double needed = std::pow(opts.decay, 1.0 / power);

    auto peak_estimate = [&] {
        double peak = 0.0;
        for (int i = 0; i <= 60; ++i) {
            double t = lo * std::pow(hi / lo, i / 60.0);
            peak = std::max(peak, integrand(t));
        }
        return peak;
    };
    double peak = peak_estimate();
    if (peak == 0.0) return 0.0;
    int guard = 0;
    while (!explicit_range && integrand(lo) > needed * peak && guard++ < 300) {
        lo /= 10.0;
        peak = std::max(peak, peak_estimate());
    }
    guard = 0;
    while (!explicit_range && integrand(hi) > needed * peak && guard++ < 300) {
        hi *= 10.0;
        peak = std::max(peak, peak_estimate());
    }
    if (integrand(lo) > needed * peak || integrand(hi) > needed * peak)
        throw std::invalid_argument("interp_norm: t-range too narrow");

    const double decades = std::log10(hi / lo);
    int n = static_cast<int>(std::ceil(decades * opts.points_per_decade));
    if (n % 2 == 1) ++n;  // Simpson needs an even interval count
    n = std::max(n, 8);
    const double du = std::log(hi / lo) / n;

    if (r == kInf) {
        double sup = 0.0;
        for (int i = 0; i <= n; ++i) sup = std::max(sup, integrand(lo * std::exp(i * du)));
        return sup;
    }
    // Simpson in u = log t of integrand(t)^r (the dt/t measure is du).
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double g = std::pow(integrand(lo * std::exp(i * du)), r);
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc += w * g;
    }
    acc *= du / 3.0;
    return std::pow(acc, 1.0 / r);
}

BesovEquivalenceReport verify_besov_equivalence(const Field& f, double theta,
                                                const InterpNormOpts& opts) {
    if (!(theta > 0.0 && theta < 2.0))
        throw std::invalid_argument("besov equivalence: theta must lie in (0,2)");
    SpectralField F = transform(f);
    for (int c = 0; c < F.components(); ++c) F.component(c)[0] = 0.0;  // mean-free convention

    BesovEquivalenceReport rep;
    rep.interp_value =
        interp_norm(F, HilbertCouple::sobolev(0.0, 2.0), theta / 2.0, kInf, opts);
    BesovParams p{theta, 2.0, kInf, BesovEstimator::littlewood_paley};
    rep.lp_value = besov_seminorm_lp(inverse(F), p);
    if (rep.interp_value == 0.0 && rep.lp_value == 0.0) {
        rep.ratio = 0.0;
        rep.pass = true;
        return rep;
    }
    rep.ratio = rep.lp_value > 0.0 ? rep.interp_value / rep.lp_value : kInf;
    rep.pass = rep.ratio >= rep.lo && rep.ratio <= rep.hi;
    return rep;
}

double weighted_norm(const SpectralField& x, double sigma) {
    auto modes = collect_modes(x, HilbertCouple::sobolev(sigma, sigma));
    return norm_x_from_modes(modes);
}

SpectralField half_laplacian_integrate(const SpectralField& x) {
    const Grid& g = x.grid();
    SpectralField out(g, x.components());
    for (int c = 0; c < x.components(); ++c) {
        auto src = x.component(c);
        auto dst = out.component(c);
        for_each_mode(g, [&](std::int64_t flat, const std::array<int, 3>& k) {
            double kappa2 = 0.0;
            for (int a = 0; a < g.dim; ++a) {
                double ka = k[a] / g.period[a];
                kappa2 += ka * ka;
            }
            dst[flat] = kappa2 == 0.0 ? 0.0 : src[flat] / (2.0 * M_PI * std::sqrt(kappa2));
        });
    }
    return out;
}

KInequalityReport verify_bilinear_K_inequality(const SpectralField& x1, const SpectralField& x2,
                                               const BilinearHandle& op,
                                               const HilbertCouple& couple_x,
                                               const HilbertCouple& couple_y,
                                               const TGrid& grid) {
    KInequalityReport rep;
    rep.deviations = {"hilbert-couple-relaxation"};
    if (l2_norm(x1) == 0.0 || l2_norm(x2) == 0.0) {
        rep.skipped = true;
        rep.pass = true;
        return rep;
    }
    SpectralField Txx = op(x1, x2);
    auto modes_y = collect_modes(Txx, couple_y);
    auto modes_1 = collect_modes(x1, couple_x);
    auto modes_2 = collect_modes(x2, couple_x);

    rep.t = grid.values();
    rep.ratio.resize(rep.t.size());
    for (std::size_t i = 0; i < rep.t.size(); ++i) {
        const double t = rep.t[i];
        const double num = k2_from_modes(modes_y, t);
        const double den =
            k2_from_modes(modes_1, std::sqrt(t)) * k2_from_modes(modes_2, std::sqrt(t));
        rep.ratio[i] = den > 0.0 ? num / den : 0.0;
        rep.sup_ratio = std::max(rep.sup_ratio, rep.ratio[i]);
    }
    rep.pass = std::isfinite(rep.sup_ratio) && rep.sup_ratio < rep.budget;
    return rep;
}

KInequalityReport verify_trilinear_K_inequality(const SpectralField& x1, const SpectralField& x2,
                                                const SpectralField& x3,
                                                const TrilinearHandle& op,
                                                const HilbertCouple& couple_x,
                                                const HilbertCouple& couple_y,
                                                const TGrid& grid) {
    KInequalityReport rep;
    rep.deviations = {"hilbert-couple-relaxation", "integrated-output-couple-shift"};
    if (l2_norm(x1) == 0.0 || l2_norm(x2) == 0.0 || l2_norm(x3) == 0.0) {
        rep.skipped = true;
        rep.pass = true;
        return rep;
    }
    SpectralField T = op(x1, x2, x3);
    auto modes_y = collect_modes(T, couple_y);
    auto m1 = collect_modes(x1, couple_x);
    auto m2 = collect_modes(x2, couple_x);
    auto m3 = collect_modes(x3, couple_x);
    const double n1 = norm_x_from_modes(m1);
    const double n2 = norm_x_from_modes(m2);
    const double n3 = norm_x_from_modes(m3);

    rep.t = grid.values();
    rep.ratio.resize(rep.t.size());
    for (std::size_t i = 0; i < rep.t.size(); ++i) {
        const double t = rep.t[i];
        const double rt = std::sqrt(t);
        const double k1 = k2_from_modes(m1, rt);
        const double k2v = k2_from_modes(m2, rt);
        const double k3 = k2_from_modes(m3, rt);
        const double num = k2_from_modes(modes_y, t);
        const double den = n1 * k2v * k3 + k1 * (n2 * k3 + n3 * k2v);
        rep.ratio[i] = den > 0.0 ? num / den : 0.0;
        rep.sup_ratio = std::max(rep.sup_ratio, rep.ratio[i]);
    }
    rep.pass = std::isfinite(rep.sup_ratio) && rep.sup_ratio < rep.budget;
    return rep;
}

}  // namespace besovflow
