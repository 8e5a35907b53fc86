#include "chlab/kernel.hpp"
#include "chlab/random_fields.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace chlab;
using std::numbers::pi;

namespace {
using F = PeriodicField<double>;
double max_diff(const F& a, const F& b) { return (a.values() - b.values()).abs().maxCoeff(); }
}  // namespace

TEST_CASE("Green's function values") {
  CHECK(green_value(0.0) == doctest::Approx(oracle::green(0.0)).epsilon(1e-15));
  CHECK(green_value(0.5) == doctest::Approx(oracle::green(0.5)).epsilon(1e-15));
  CHECK(green_value(0.0) == doctest::Approx(1.0819767).epsilon(1e-7));
  CHECK(green_value(0.5) == doctest::Approx(0.9595173).epsilon(1e-7));
  CHECK(green_value(1.25) == doctest::Approx(green_value(0.25)).epsilon(1e-15));
  for (double x : {0.1, 0.37, 0.81, -0.2, 3.6}) CHECK(green_value(x) == doctest::Approx(oracle::green(x)).epsilon(1e-14));
}

TEST_CASE("split kernel values") {
  const auto mid = split_green_values(0.5);
  CHECK(mid.plus == doctest::Approx(oracle::quarter_csch_half()).epsilon(1e-15));
  CHECK(mid.minus == doctest::Approx(oracle::quarter_csch_half()).epsilon(1e-15));
  CHECK(mid.plus == doctest::Approx(0.4797587).epsilon(1e-7));
  for (double z : {0.0, 0.13, 0.5, 0.77, 0.999}) {
    const auto s = split_green_values(z);
    CHECK(std::abs(s.plus + s.minus - green_value(z)) <= 1e-14);
    CHECK(s.plus > 0.0);
    CHECK(s.minus > 0.0);
    // P_x = P_minus - P_plus away from the seam
    CHECK(std::abs((s.minus - s.plus) - std::sinh(z - 0.5) / (2 * std::sinh(0.5))) <= 1e-14);
  }
  CHECK_THROWS_AS(split_green_values(1.0), std::invalid_argument);
  CHECK_THROWS_AS(split_green_values(-0.1), std::invalid_argument);
}

TEST_CASE("kernel tables") {
  const PeriodicGrid g(64);
  const KernelTable<double> table(g);
  for (Index j = 0; j < g.size(); ++j) {
    CHECK(table.p_values[j] == table.p_plus_values[j] + table.p_minus_values[j]);
    CHECK(table.p_plus_values[j] > 0.0);
    CHECK(table.p_minus_values[j] > 0.0);
  }
}

TEST_CASE("kernel integrals") {
  for (Index n : {64, 256}) {
    const PeriodicGrid g(n);
    CHECK(std::abs(kernel_integral(g, green_kernel<double>()) - 1.0) <= 1e-10);
    CHECK(std::abs(kernel_integral(g, p_plus_kernel<double>()) - 0.5) <= 1e-12);
    CHECK(std::abs(kernel_integral(g, p_minus_kernel<double>()) - 0.5) <= 1e-12);
  }
}

TEST_CASE("convolution with p") {
  const PeriodicGrid g(128);
  const auto one = F::constant(g, 1.0);
  CHECK(max_diff(conv_p(one), one) <= 1e-14);
  CHECK(max_diff(conv_p_quadrature(one), one) <= 1e-12);
  CHECK(conv_p(F(g)).max_abs() == 0.0);

  const auto c = F::sample(g, [](double x) { return std::cos(2 * pi * x); });
  CHECK(max_diff(conv_p(c), (1.0 / (1 + 4 * pi * pi)) * c) <= 1e-12);
  CHECK(max_diff(conv_p_quadrature(c), (1.0 / (1 + 4 * pi * pi)) * c) <= 1e-12);
}

TEST_CASE("convolution with p_x") {
  const PeriodicGrid g(128);
  CHECK(conv_dp(F::constant(g, 1.0)).max_abs() <= 1e-15);
  const auto s = F::sample(g, [](double x) { return std::sin(2 * pi * x); });
  const auto expected = F::sample(g, [](double x) { return 2 * pi * std::cos(2 * pi * x) / (1 + 4 * pi * pi); });
  CHECK(max_diff(conv_dp(s), expected) <= 1e-12);

  std::mt19937_64 rng(21);
  double worst = 0;
  for (int i = 0; i < 50; ++i) {
    const auto f = random_band_limited<double>(g, 32, rng);
    worst = std::max(worst, max_diff(conv_dp(f), derivative(conv_p(f))));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("split convolutions") {
  const PeriodicGrid g(256);
  const auto one = F::constant(g, 1.0);
  CHECK(max_diff(conv_p_plus(one), 0.5 * one) <= 1e-12);
  CHECK(max_diff(conv_p_minus(one), 0.5 * one) <= 1e-12);
  CHECK(max_diff(conv_p_plus_spectral(one), 0.5 * one) <= 1e-15);
  CHECK(conv_p_plus(F(g)).max_abs() == 0.0);
  CHECK(conv_p_minus(F(g)).max_abs() == 0.0);

  std::mt19937_64 rng(99);
  for (int i = 0; i < 5; ++i) {
    const auto f = random_band_limited<double>(g, 64, rng);
    const auto r = split_identity_residuals(f);
    CHECK(r.sum <= 1e-8);
    CHECK(r.difference <= 1e-8);
    CHECK(max_diff(conv_p_plus(f), conv_p_plus_spectral(f)) <= 1e-8);
    CHECK(max_diff(conv_p_minus(f), conv_p_minus_spectral(f)) <= 1e-8);
  }
}

TEST_CASE("split convolutions preserve positivity") {
  const PeriodicGrid g(64);
  const auto f = F::sample(g, [](double x) { return std::exp(4 * (std::cos(2 * pi * x) - 1)); });
  CHECK(conv_p_plus(f).values().minCoeff() > 0.0);
  CHECK(conv_p_minus(f).values().minCoeff() > 0.0);
}

TEST_CASE("one-sided integrals without wrap-around do not reproduce p") {
  // (A + B) 1 = 1 - e^{-1/2} cosh(x - 1/2), so the residual against p * 1 = 1
  // peaks at x = 0 with e^{-1/2} cosh(1/2) = (1 + e^{-1}) / 2.
  const PeriodicGrid g(64);
  const auto r = nonperiodic_split_residuals(F::constant(g, 1.0));
  CHECK(r.sum == doctest::Approx((1 + std::exp(-1.0)) / 2).epsilon(1e-12));
}

TEST_CASE("Helmholtz residual") {
  const PeriodicGrid g(256);
  const auto c = F::sample(g, [](double x) { return std::cos(2 * pi * x); });
  CHECK(helmholtz_residual(c) <= 1e-11);
  CHECK(helmholtz_residual(F(g)) == 0.0);
  std::mt19937_64 rng(1);
  const auto f = random_band_limited<double>(g, 64, rng);
  CHECK(helmholtz_residual(f) <= 1e-9);
  CHECK(helmholtz_residual(f, 1.01) > 1e-4);
}
