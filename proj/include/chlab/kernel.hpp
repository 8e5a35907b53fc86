// Periodic Helmholtz inverse (1 - d^2/dx^2)^{-1} on the unit circle.
//
// Green's function p(x) = cosh(x - [x] - 1/2) / (2 sinh 1/2) and its one-sided
// split p = p_plus + p_minus with
//   p_plus(z)  = exp(-(z - 1/2)) / (4 sinh 1/2),
//   p_minus(z) = exp( (z - 1/2)) / (4 sinh 1/2),   z in [0, 1),
// so that P = P_plus + P_minus and P_x = P_minus - P_plus as convolutions.
//
// Two routes are provided: Fourier multipliers (used in the time loop) and
// real-space quadrature against the tabulated kernels (cross-validation).
#ifndef CHLAB_KERNEL_HPP
#define CHLAB_KERNEL_HPP

#include "chlab/grid.hpp"

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace chlab {

namespace detail {

template <typename Scalar>
Scalar sinh_half() {
  using std::sinh;
  return sinh(Scalar(0.5));
}

}  // namespace detail

// coth(1/2) = (e + 1) / (e - 1).
template <typename Scalar = double>
Scalar coth_half() {
  using std::exp;
  const Scalar e = exp(Scalar(1));
  return (e + Scalar(1)) / (e - Scalar(1));
}

template <typename Scalar>
Scalar green_value(Scalar x) {
  using std::cosh;
  const Scalar r = wrap_unit(x);
  return cosh(r - Scalar(0.5)) / (Scalar(2) * detail::sinh_half<Scalar>());
}

template <typename Scalar>
struct SplitValues {
  Scalar plus;
  Scalar minus;
};

template <typename Scalar>
SplitValues<Scalar> split_green_values(Scalar z) {
  using std::exp;
  if (!(z >= Scalar(0) && z < Scalar(1))) throw std::invalid_argument("split kernel offset must lie in [0, 1)");
  const Scalar denom = Scalar(4) * detail::sinh_half<Scalar>();
  return {exp(-(z - Scalar(0.5))) / denom, exp(z - Scalar(0.5)) / denom};
}

// One term coeff * exp(rate * z) of a kernel restricted to z in [0, 1).
template <typename Scalar>
struct ExponentialTerm {
  Scalar coeff;
  Scalar rate;
};

template <typename Scalar>
using ExponentialKernel = std::vector<ExponentialTerm<Scalar>>;

template <typename Scalar>
ExponentialKernel<Scalar> p_plus_kernel() {
  using std::exp;
  return {{exp(Scalar(0.5)) / (Scalar(4) * detail::sinh_half<Scalar>()), Scalar(-1)}};
}

template <typename Scalar>
ExponentialKernel<Scalar> p_minus_kernel() {
  using std::exp;
  return {{exp(Scalar(-0.5)) / (Scalar(4) * detail::sinh_half<Scalar>()), Scalar(1)}};
}

template <typename Scalar>
ExponentialKernel<Scalar> green_kernel() {
  return {p_plus_kernel<Scalar>()[0], p_minus_kernel<Scalar>()[0]};
}

// Kernel samples at the grid offsets z_j = j/n.
template <typename Scalar>
struct KernelTable {
  PeriodicGrid grid;
  RealArray<Scalar> p_values;
  RealArray<Scalar> p_plus_values;
  RealArray<Scalar> p_minus_values;

  explicit KernelTable(const PeriodicGrid& g)
      : grid(g), p_values(g.size()), p_plus_values(g.size()), p_minus_values(g.size()) {
    for (Index j = 0; j < g.size(); ++j) {
      const auto split = split_green_values(g.node<Scalar>(j));
      p_plus_values[j] = split.plus;
      p_minus_values[j] = split.minus;
      p_values[j] = split.plus + split.minus;
    }
  }
};

namespace detail {

// B_{2m} / (2m)! for m = 1..16.
template <typename Scalar>
const std::array<Scalar, 16>& bernoulli_over_factorial() {
  static const std::array<Scalar, 16> table = [] {
    const std::array<long double, 16> num = {1.0L,
                                             -1.0L,
                                             1.0L,
                                             -1.0L,
                                             5.0L,
                                             -691.0L,
                                             7.0L,
                                             -3617.0L,
                                             43867.0L,
                                             -174611.0L,
                                             854513.0L,
                                             -236364091.0L,
                                             8553103.0L,
                                             -23749461029.0L,
                                             8615841276005.0L,
                                             -7709321041217.0L};
    const std::array<long double, 16> den = {6.0L,   30.0L,  42.0L,   30.0L,  66.0L, 2730.0L, 6.0L, 510.0L,
                                             798.0L, 330.0L, 138.0L, 2730.0L, 6.0L, 870.0L, 14322.0L, 510.0L};
    std::array<Scalar, 16> out{};
    long double factorial = 1.0L;
    for (int m = 1; m <= 16; ++m) {
      factorial *= static_cast<long double>((2 * m - 1) * (2 * m));
      out[m - 1] = static_cast<Scalar>(num[m - 1] / den[m - 1] / factorial);
    }
    return out;
  }();
  return table;
}

// Jump k^{(s)}(1-) - k^{(s)}(0+) of the s-th derivative across the seam.
template <typename Scalar>
Scalar seam_jump(std::span<const ExponentialTerm<Scalar>> kernel, int s) {
  using std::exp;
  using std::pow;
  Scalar jump = 0;
  for (const auto& term : kernel) jump += term.coeff * pow(term.rate, s) * (exp(term.rate) - Scalar(1));
  return jump;
}

}  // namespace detail

// Number of Euler-Maclaurin endpoint corrections used by the quadrature path.
inline constexpr int kEulerMaclaurinTerms = 16;

// (k * f)(x_i) = int_0^1 k(z) f(x_i - z) dz by the trapezoid rule on the
// nodes z_j, using one-sided kernel limits at z = 0+ and z = 1-, followed by
// Euler-Maclaurin corrections built from the seam jumps of k and spectral
// derivatives of f.  The correction series converges geometrically for
// content below the Nyquist wavenumber and reaches roundoff for |k| <= n/4.
template <typename Scalar>
PeriodicField<Scalar> corrected_trapezoid_convolution(std::span<const ExponentialTerm<Scalar>> kernel,
                                                      const PeriodicField<Scalar>& f,
                                                      int corrections = kEulerMaclaurinTerms) {
  using std::exp;
  if (corrections < 0 || corrections > kEulerMaclaurinTerms)
    throw std::invalid_argument("unsupported Euler-Maclaurin order");
  const PeriodicGrid& grid = f.grid();
  const Index n = grid.size();
  const Scalar h = Scalar(1) / static_cast<Scalar>(n);

  RealArray<Scalar> k(n);
  for (Index j = 0; j < n; ++j) {
    const Scalar z = grid.node<Scalar>(j);
    Scalar sum = 0;
    for (const auto& term : kernel) sum += term.coeff * exp(term.rate * z);
    k[j] = sum;
  }
  const Scalar seam0 = detail::seam_jump<Scalar>(kernel, 0);

  const auto& fv = f.values();
  PeriodicField<Scalar> out(grid);
  for (Index i = 0; i < n; ++i) {
    Scalar acc = 0;
    for (Index j = 0; j <= i; ++j) acc += k[j] * fv[i - j];
    for (Index j = i + 1; j < n; ++j) acc += k[j] * fv[i - j + n];
    out[i] = h * (acc + Scalar(0.5) * seam0 * fv[i]);
  }
  if (corrections == 0) return out;

  // Scaled derivatives D_d = h^d f^{(d)} at the nodes.
  const int max_order = 2 * corrections - 1;
  const auto base = to_spectrum(f);
  std::vector<RealArray<Scalar>> scaled(max_order + 1);
  scaled[0] = fv;
  Spectrum<Scalar> work = base;
  for (int d = 1; d <= max_order; ++d) {
    work.apply([&](Index kk) {
      return std::complex<Scalar>(0, detail::two_pi<Scalar> * static_cast<Scalar>(kk) * h);
    });
    scaled[d] = from_spectrum(work).values();
  }

  std::vector<Scalar> jump_h(max_order + 1);  // J_s h^{s+1}
  Scalar hp = h;
  for (int s = 0; s <= max_order; ++s, hp *= h) jump_h[s] = detail::seam_jump<Scalar>(kernel, s) * hp;

  const auto& bern = detail::bernoulli_over_factorial<Scalar>();
  for (int m = 1; m <= corrections; ++m) {
    const int r = 2 * m - 1;
    RealArray<Scalar> g = RealArray<Scalar>::Zero(n);
    Scalar binom = 1;
    for (int s = 0; s <= r; ++s) {
      const Scalar sign = ((r - s) % 2 == 0) ? Scalar(1) : Scalar(-1);
      g += (binom * jump_h[s] * sign) * scaled[r - s];
      binom = binom * static_cast<Scalar>(r - s) / static_cast<Scalar>(s + 1);
    }
    out.values() -= bern[m - 1] * g;
  }
  return out;
}

// Spectral route for p * f with p the Green's function of (1 - stiffness d^2).
// stiffness = 1 is the physical operator; other values exist for fault injection.
template <typename Scalar>
PeriodicField<Scalar> conv_p(const PeriodicField<Scalar>& f, Scalar stiffness = Scalar(1)) {
  auto s = to_spectrum(f);
  s.apply([&](Index k) {
    const Scalar wk = detail::two_pi<Scalar> * static_cast<Scalar>(k);
    return std::complex<Scalar>(Scalar(1) / (Scalar(1) + stiffness * wk * wk), 0);
  });
  return from_spectrum(s);
}

// d/dx (p * f): multiplier 2 pi i k / (1 + 4 pi^2 k^2), Nyquist zeroed.
template <typename Scalar>
Spectrum<Scalar>& apply_conv_dp(Spectrum<Scalar>& s) {
  s.apply([](Index k) {
    const Scalar wk = detail::two_pi<Scalar> * static_cast<Scalar>(k);
    return std::complex<Scalar>(0, wk / (Scalar(1) + wk * wk));
  });
  s.coefficients()[s.grid().nyquist_slot()] = 0;
  return s;
}

template <typename Scalar>
Spectrum<Scalar>& apply_conv_p(Spectrum<Scalar>& s) {
  s.apply([](Index k) {
    const Scalar wk = detail::two_pi<Scalar> * static_cast<Scalar>(k);
    return std::complex<Scalar>(Scalar(1) / (Scalar(1) + wk * wk), 0);
  });
  return s;
}

template <typename Scalar>
PeriodicField<Scalar> conv_dp(const PeriodicField<Scalar>& f) {
  auto s = to_spectrum(f);
  return from_spectrum(apply_conv_dp(s));
}

// Spectral route for P_plus (sign = +1) or P_minus (sign = -1):
// multiplier 1 / (2 (1 + sign 2 pi i k)).  The Nyquist slot keeps only the
// real part so the result stays real.
template <typename Scalar>
Spectrum<Scalar>& apply_conv_split(Spectrum<Scalar>& s, int sign) {
  const Index nyquist = s.grid().nyquist_slot();
  for (Index i = 0; i < s.coefficients().size(); ++i) {
    const Scalar wk = detail::two_pi<Scalar> * static_cast<Scalar>(s.grid().wavenumber(i));
    std::complex<Scalar> m = Scalar(1) / (Scalar(2) * std::complex<Scalar>(Scalar(1), static_cast<Scalar>(sign) * wk));
    if (i == nyquist) m = m.real();
    s.coefficients()[i] *= m;
  }
  return s;
}

template <typename Scalar>
PeriodicField<Scalar> conv_p_plus_spectral(const PeriodicField<Scalar>& f) {
  auto s = to_spectrum(f);
  return from_spectrum(apply_conv_split(s, +1));
}

template <typename Scalar>
PeriodicField<Scalar> conv_p_minus_spectral(const PeriodicField<Scalar>& f) {
  auto s = to_spectrum(f);
  return from_spectrum(apply_conv_split(s, -1));
}

// Quadrature route for P_plus * f.
template <typename Scalar>
PeriodicField<Scalar> conv_p_plus(const PeriodicField<Scalar>& f) {
  const auto kernel = p_plus_kernel<Scalar>();
  return corrected_trapezoid_convolution<Scalar>(kernel, f);
}

// Quadrature route for P_minus * f.
template <typename Scalar>
PeriodicField<Scalar> conv_p_minus(const PeriodicField<Scalar>& f) {
  const auto kernel = p_minus_kernel<Scalar>();
  return corrected_trapezoid_convolution<Scalar>(kernel, f);
}

// Quadrature route for p * f.
template <typename Scalar>
PeriodicField<Scalar> conv_p_quadrature(const PeriodicField<Scalar>& f) {
  const auto kernel = green_kernel<Scalar>();
  return corrected_trapezoid_convolution<Scalar>(kernel, f);
}

// int_0^1 p dz from the tabulated kernel with the same endpoint corrections.
template <typename Scalar>
Scalar kernel_integral(const PeriodicGrid& grid, const ExponentialKernel<Scalar>& kernel) {
  const auto one = corrected_trapezoid_convolution<Scalar>(kernel, PeriodicField<Scalar>::constant(grid, Scalar(1)));
  return one[0];
}

// max |(p*f - d^2(p*f)) - f|, the defining identity of the Green's function.
template <typename Scalar>
Scalar helmholtz_residual(const PeriodicField<Scalar>& f, Scalar stiffness = Scalar(1)) {
  const auto g = conv_p(f, stiffness);
  const auto gxx = derivative(derivative(g));
  return (g.values() - gxx.values() - f.values()).abs().maxCoeff();
}

template <typename Scalar>
struct SplitResiduals {
  Scalar sum;         // max |(P_plus + P_minus) * f - P * f|
  Scalar difference;  // max |(P_minus - P_plus) * f - P_x * f|
};

// Split identities for the quadrature split kernels against the spectral P, P_x.
template <typename Scalar>
SplitResiduals<Scalar> split_identity_residuals(const PeriodicField<Scalar>& f) {
  const auto plus = conv_p_plus(f);
  const auto minus = conv_p_minus(f);
  const auto p = conv_p(f);
  const auto dp = conv_dp(f);
  return {(plus.values() + minus.values() - p.values()).abs().maxCoeff(),
          (minus.values() - plus.values() - dp.values()).abs().maxCoeff()};
}

// Same identities for the one-sided integrals without periodic wrap-around,
//   A f(x) = 1/2 e^{-x} int_0^x e^y f(y) dy,   B f(x) = 1/2 e^x int_x^1 e^{-y} f(y) dy.
// On trigonometric f these equal A f = P_plus f - e^{-x} (P_plus f)(0) and
// B f = P_minus f - e^{x-1} (P_minus f)(0); they do not reproduce P.
template <typename Scalar>
SplitResiduals<Scalar> nonperiodic_split_residuals(const PeriodicField<Scalar>& f) {
  using std::exp;
  const auto plus = conv_p_plus(f);
  const auto minus = conv_p_minus(f);
  const auto p = conv_p(f);
  const auto dp = conv_dp(f);
  const PeriodicGrid& grid = f.grid();
  RealArray<Scalar> a(grid.size()), b(grid.size());
  for (Index j = 0; j < grid.size(); ++j) {
    const Scalar x = grid.node<Scalar>(j);
    a[j] = plus[j] - exp(-x) * plus[0];
    b[j] = minus[j] - exp(x - Scalar(1)) * minus[0];
  }
  return {(a + b - p.values()).abs().maxCoeff(), (b - a - dp.values()).abs().maxCoeff()};
}

}  // namespace chlab

#endif  // CHLAB_KERNEL_HPP
