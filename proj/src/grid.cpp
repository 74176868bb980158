#include "besovflow/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "fft_engine.hpp"

namespace besovflow {

Grid Grid::make(std::span<const int> sizes, std::span<const double> periods) {
    Grid g;
    g.dim = static_cast<int>(sizes.size());
    if (g.dim != 2 && g.dim != 3)
        throw std::invalid_argument("grid: dim must be 2 or 3");
    for (int a = 0; a < g.dim; ++a) {
        if (sizes[a] < 8 || !is_pow2(sizes[a]))
            throw std::invalid_argument("grid: axis sizes must be powers of two >= 8");
        g.n[a] = sizes[a];
        double p = periods.empty() ? 1.0 : periods[a];
        if (!(p > 0.0)) throw std::invalid_argument("grid: period must be positive");
        g.period[a] = p;
    }
    for (int a = g.dim; a < 3; ++a) {
        g.n[a] = 1;
        g.period[a] = 1.0;
    }
    return g;
}

Grid Grid::square(int dim, int n_per_axis, double period) {
    std::array<int, 3> s{n_per_axis, n_per_axis, n_per_axis};
    std::array<double, 3> p{period, period, period};
    return make(std::span<const int>(s.data(), dim), std::span<const double>(p.data(), dim));
}

double Grid::max_spacing() const {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) s = std::max(s, spacing(a));
    return s;
}

std::array<std::int64_t, 3> Grid::strides() const {
    const std::int64_t n2 = dim == 3 ? n[2] : 1;
    return {static_cast<std::int64_t>(n[1]) * n2, n2, 1};
}

Field::Field(const Grid& grid, int components)
    : grid_(grid), components_(components),
      data_(static_cast<std::size_t>(grid.points() * components), 0.0) {
    if (components < 1) throw std::invalid_argument("field: components must be >= 1");
}

SpectralField::SpectralField(const Grid& grid, int components)
    : grid_(grid), components_(components),
      data_(static_cast<std::size_t>(grid.points() * components)) {
    if (components < 1) throw std::invalid_argument("field: components must be >= 1");
}

namespace {

// Zeroes Nyquist planes so |k_a| < n_a/2 everywhere.
void zero_nyquist(SpectralField& F) {
    const Grid& g = F.grid();
    for (int c = 0; c < F.components(); ++c) {
        auto coeffs = F.component(c);
        for_each_mode(g, [&](std::int64_t flat, const std::array<int, 3>& k) {
            for (int a = 0; a < g.dim; ++a) {
                if (k[a] == -g.n[a] / 2) {
                    coeffs[flat] = 0.0;
                    return;
                }
            }
        });
    }
}

}  // namespace

SpectralField transform(const Field& f) {
    for (double v : f.data()) {
        if (!std::isfinite(v)) throw std::invalid_argument("transform: non-finite data");
    }
    const Grid& g = f.grid();
    SpectralField F(g, f.components());
    const std::int64_t total = g.points();
    std::vector<std::complex<double>> in(static_cast<std::size_t>(total));
    const double scale = 1.0 / static_cast<double>(total);
    for (int c = 0; c < f.components(); ++c) {
        auto src = f.component(c);
        for (std::int64_t i = 0; i < total; ++i) in[static_cast<std::size_t>(i)] = src[i];
        detail::fft_forward(g, in.data(), F.component(c).data());
        for (auto& v : F.component(c)) v *= scale;
    }
    zero_nyquist(F);
    return F;
}

Field inverse(const SpectralField& F) {
    const Grid& g = F.grid();
    Field f(g, F.components());
    const std::int64_t total = g.points();
    std::vector<std::complex<double>> in(static_cast<std::size_t>(total));
    std::vector<std::complex<double>> out(static_cast<std::size_t>(total));
    for (int c = 0; c < F.components(); ++c) {
        auto src = F.component(c);
        for (std::int64_t i = 0; i < total; ++i) in[static_cast<std::size_t>(i)] = src[i];
        detail::fft_backward(g, in.data(), out.data());
        auto dst = f.component(c);
        for (std::int64_t i = 0; i < total; ++i) dst[i] = out[static_cast<std::size_t>(i)].real();
    }
    return f;
}

SpectralField derivative(const SpectralField& F, int axis, int order) {
    if (order < 1) throw std::invalid_argument("derivative: order must be >= 1");
    if (axis < 0 || axis >= F.grid().dim) throw std::invalid_argument("derivative: bad axis");
    const Grid& g = F.grid();
    SpectralField D(g, F.components());
    const double inv_L = 1.0 / g.period[axis];
    for (int c = 0; c < F.components(); ++c) {
        auto src = F.component(c);
        auto dst = D.component(c);
        for_each_mode(g, [&](std::int64_t flat, const std::array<int, 3>& k) {
            std::complex<double> m(0.0, 2.0 * M_PI * k[axis] * inv_L);
            std::complex<double> mult = 1.0;
            for (int o = 0; o < order; ++o) mult *= m;
            dst[flat] = src[flat] * mult;
        });
    }
    return D;
}

SpectralField divergence(const SpectralField& F) {
    const Grid& g = F.grid();
    if (F.components() != g.dim)
        throw std::invalid_argument("divergence: components must equal grid dimension");
    SpectralField D(g, 1);
    auto dst = D.component(0);
    for_each_mode(g, [&](std::int64_t flat, const std::array<int, 3>& k) {
        std::complex<double> acc = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            std::complex<double> m(0.0, 2.0 * M_PI * k[a] / g.period[a]);
            acc += m * F.component(a)[flat];
        }
        dst[flat] = acc;
    });
    return D;
}

Field divergence(const Field& f) { return inverse(divergence(transform(f))); }

SpectralField gradient(const SpectralField& F) {
    const Grid& g = F.grid();
    if (F.components() != 1) throw std::invalid_argument("gradient: scalar field expected");
    SpectralField G(g, g.dim);
    auto src = F.component(0);
    for (int a = 0; a < g.dim; ++a) {
        auto dst = G.component(a);
        for_each_mode(g, [&](std::int64_t flat, const std::array<int, 3>& k) {
            dst[flat] = std::complex<double>(0.0, 2.0 * M_PI * k[a] / g.period[a]) * src[flat];
        });
    }
    return G;
}

SpectralField leray_project(const SpectralField& F) {
    const Grid& g = F.grid();
    if (F.components() != g.dim)
        throw std::invalid_argument("leray_project: components must equal grid dimension");
    SpectralField P(g, g.dim);
    for_each_mode(g, [&](std::int64_t flat, const std::array<int, 3>& k) {
        std::array<double, 3> kappa{0.0, 0.0, 0.0};
        double k2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            kappa[a] = k[a] / g.period[a];
            k2 += kappa[a] * kappa[a];
        }
        if (k2 == 0.0) {
            for (int a = 0; a < g.dim; ++a) P.component(a)[flat] = F.component(a)[flat];
            return;
        }
        std::complex<double> dot = 0.0;
        for (int a = 0; a < g.dim; ++a) dot += kappa[a] * F.component(a)[flat];
        dot /= k2;
        for (int a = 0; a < g.dim; ++a)
            P.component(a)[flat] = F.component(a)[flat] - kappa[a] * dot;
    });
    return P;
}

Field leray_project(const Field& f) { return inverse(leray_project(transform(f))); }

SpectralField dealias_truncate(const SpectralField& F, double fraction) {
    const Grid& g = F.grid();
    SpectralField T = F;
    for (int c = 0; c < F.components(); ++c) {
        auto dst = T.component(c);
        for_each_mode(g, [&](std::int64_t flat, const std::array<int, 3>& k) {
            for (int a = 0; a < g.dim; ++a) {
                if (std::abs(k[a]) >= fraction * (g.n[a] / 2.0)) {
                    dst[flat] = 0.0;
                    return;
                }
            }
        });
    }
    return T;
}

double l2_norm(const SpectralField& F) {
    double acc = 0.0;
    for (const auto& c : F.data()) acc += std::norm(c);
    return std::sqrt(acc);
}

std::complex<double> spectral_dot(const SpectralField& A, const SpectralField& B) {
    if (A.data().size() != B.data().size())
        throw std::invalid_argument("spectral_dot: shape mismatch");
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < A.data().size(); ++i)
        acc += std::conj(A.data()[i]) * B.data()[i];
    return acc;
}

}  // namespace besovflow
