/// @file test_fit.cpp
/// @brief Log-log slope fitting.

#include <doctest.h>

#include <cmath>

#include "besovflow/fit.hpp"

using namespace besovflow;

TEST_CASE("exact power law recovered to machine precision") {
    NormScan scan;
    scan.estimator_id = "synthetic";
    for (int m = 1; m <= 8; ++m) {
        const double s = std::ldexp(1.0, -m);
        scan.scales.push_back(s);
        scan.values.push_back(3.0 * std::pow(s, 0.5));
    }
    auto fit = fit_exponent(scan, FitWindow{0, 0});
    CHECK(fit.slope == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fit.stderr < 1e-10);
}

TEST_CASE("constant scan has zero slope") {
    NormScan scan{{0.5, 0.25, 0.125, 0.0625}, {2.0, 2.0, 2.0, 2.0}, "flat"};
    auto fit = fit_exponent(scan, FitWindow{0, 0});
    CHECK(fit.slope == doctest::Approx(0.0));
}

TEST_CASE("zero values and short windows rejected") {
    NormScan zero{{0.5, 0.25, 0.125, 0.0625}, {1.0, 0.0, 1.0, 1.0}, "zero"};
    CHECK_THROWS_WITH_AS(fit_exponent(zero, FitWindow{0, 0}),
                         "fit_exponent: zero norm in scan", std::invalid_argument);
    NormScan tiny{{0.5, 0.25, 0.125}, {1.0, 1.0, 1.0}, "tiny"};
    CHECK_THROWS_AS(fit_exponent(tiny, FitWindow{1, 2}), std::invalid_argument);
}

TEST_CASE("default window drops one coarse and two fine scales") {
    NormScan scan;
    scan.estimator_id = "windowed";
    // power law 0.4 in the interior, corrupted at the dropped ends
    for (int m = 1; m <= 7; ++m) {
        const double s = std::ldexp(1.0, -m);
        scan.scales.push_back(s);
        scan.values.push_back(std::pow(s, 0.4));
    }
    scan.values.front() *= 10.0;
    scan.values[scan.values.size() - 1] *= 5.0;
    scan.values[scan.values.size() - 2] *= 2.0;
    auto fit = fit_exponent(scan);
    CHECK(fit.slope == doctest::Approx(0.4).epsilon(1e-10));
    CHECK(fit.points == 4);
}
