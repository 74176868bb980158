#pragma once

// Periodic grids on the flat d-torus (d = 2, 3) with real-space and spectral
// field representations, spectral calculus, and the Leray projector.
//
// Conventions:
//   * samples live at x_a = period[a] * i_a / n[a], layout component-major,
//     then row-major over axes (axis 0 slowest, last axis contiguous);
//   * transform() is normalized so that coefficients are the Fourier-series
//     amplitudes: f(x) = sum_k c_k exp(2 pi i <k, x / period>); a constant
//     field has only c_0 nonzero;
//   * spectral data is band-limited to |k_a| < n[a]/2: transform() zeroes the
//     Nyquist bins, so every SpectralField round-trips exactly and spectral
//     derivatives are unambiguous.

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "besovflow/common.hpp"

namespace besovflow {

struct Grid {
    int dim = 2;
    std::array<int, 3> n{1, 1, 1};
    std::array<double, 3> period{1.0, 1.0, 1.0};

    // Validates: dim in {2,3}, every n a power of two >= 8, periods > 0.
    static Grid make(std::span<const int> sizes, std::span<const double> periods = {});
    static Grid square(int dim, int n_per_axis, double period = 1.0);

    std::int64_t points() const {
        std::int64_t p = 1;
        for (int a = 0; a < dim; ++a) p *= n[a];
        return p;
    }
    double spacing(int axis) const { return period[axis] / n[axis]; }
    double max_spacing() const;
    std::array<std::int64_t, 3> strides() const;

    bool operator==(const Grid&) const = default;
};

// Real-space samples of an m-component field, double precision.
class Field {
  public:
    Field() = default;
    Field(const Grid& grid, int components);

    const Grid& grid() const { return grid_; }
    int components() const { return components_; }
    std::int64_t size() const { return grid_.points(); }

    std::span<double> component(int c) {
        return {data_.data() + c * size(), static_cast<std::size_t>(size())};
    }
    std::span<const double> component(int c) const {
        return {data_.data() + c * size(), static_cast<std::size_t>(size())};
    }
    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

  private:
    Grid grid_;
    int components_ = 0;
    std::vector<double> data_;
};

// Fourier coefficients of a Field, full c2c layout (bin a holds wavevector
// k_a = a for a < n/2, k_a = a - n otherwise; Nyquist bins are kept zero).
class SpectralField {
  public:
    SpectralField() = default;
    SpectralField(const Grid& grid, int components);

    const Grid& grid() const { return grid_; }
    int components() const { return components_; }
    std::int64_t size() const { return grid_.points(); }

    std::span<std::complex<double>> component(int c) {
        return {data_.data() + c * size(), static_cast<std::size_t>(size())};
    }
    std::span<const std::complex<double>> component(int c) const {
        return {data_.data() + c * size(), static_cast<std::size_t>(size())};
    }
    std::vector<std::complex<double>>& data() { return data_; }
    const std::vector<std::complex<double>>& data() const { return data_; }

  private:
    Grid grid_;
    int components_ = 0;
    std::vector<std::complex<double>> data_;
};

// Signed integer wavevector of bin index i on an axis of n points.
inline int wavenumber(int index, int n) { return index < n / 2 ? index : index - n; }

// Calls fn(flat, k) for every spectral bin, k the signed integer wavevector.
template <class Fn>
void for_each_mode(const Grid& g, Fn&& fn) {
    const int n0 = g.n[0], n1 = g.n[1], n2 = g.dim == 3 ? g.n[2] : 1;
    std::int64_t flat = 0;
    std::array<int, 3> k{0, 0, 0};
    for (int i0 = 0; i0 < n0; ++i0) {
        k[0] = wavenumber(i0, n0);
        for (int i1 = 0; i1 < n1; ++i1) {
            k[1] = wavenumber(i1, n1);
            for (int i2 = 0; i2 < n2; ++i2, ++flat) {
                k[2] = g.dim == 3 ? wavenumber(i2, n2) : 0;
                fn(flat, k);
            }
        }
    }
}

SpectralField transform(const Field& f);
Field inverse(const SpectralField& F);

// Multiplies coefficient k by (2 pi i k_axis / period[axis])^order.
SpectralField derivative(const SpectralField& F, int axis, int order = 1);

// Scalar divergence of an m = dim component field.
SpectralField divergence(const SpectralField& F);
Field divergence(const Field& f);

// Gradient of a scalar spectral field (dim components).
SpectralField gradient(const SpectralField& F);

// Orthogonal projection onto divergence-free fields; identity on the mean.
SpectralField leray_project(const SpectralField& F);
Field leray_project(const Field& f);

// Zeroes every mode with |k_a| >= fraction * (n_a / 2) on some axis.
SpectralField dealias_truncate(const SpectralField& F, double fraction);

double l2_norm(const SpectralField& F);
std::complex<double> spectral_dot(const SpectralField& A, const SpectralField& B);

}  // namespace besovflow
