// Uniform periodic grid on the unit circle and the Fourier machinery built on it.
//
// Fields are real samples f_j = f(j/n), j = 0..n-1.  Spectra use the
// convention f(x) = sum_k c_k exp(2 pi i k x) with c_k = (1/n) sum_j f_j
// exp(-2 pi i k j / n) and are stored in FFT order (k = 0..n/2-1, then
// k = -n/2..-1).
#ifndef CHLAB_GRID_HPP
#define CHLAB_GRID_HPP

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace chlab {

using Index = Eigen::Index;

template <typename Scalar>
using RealArray = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using ComplexArray = Eigen::Array<std::complex<Scalar>, Eigen::Dynamic, 1>;

class PeriodicGrid {
 public:
  // Throws std::invalid_argument unless n is a power of two and n >= 16.
  explicit PeriodicGrid(Index n) : n_(n) {
    if (n < 16 || (n & (n - 1)) != 0)
      throw std::invalid_argument("n must be a power of two >= 16 (got " + std::to_string(n) + ")");
  }

  Index size() const { return n_; }
  double dx() const { return 1.0 / static_cast<double>(n_); }

  template <typename Scalar = double>
  Scalar node(Index j) const {
    return static_cast<Scalar>(j) / static_cast<Scalar>(n_);
  }

  // Signed wavenumber of FFT-ordered slot `index`.
  Index wavenumber(Index index) const { return index < n_ / 2 ? index : index - n_; }
  // FFT-ordered slot of wavenumber k, -n/2 <= k < n/2.
  Index slot(Index k) const { return k >= 0 ? k : k + n_; }
  Index nyquist_slot() const { return n_ / 2; }

  bool operator==(const PeriodicGrid&) const = default;

 private:
  Index n_;
};

inline PeriodicGrid make_grid(Index n) { return PeriodicGrid(n); }

inline void require_same_grid(const PeriodicGrid& a, const PeriodicGrid& b) {
  if (!(a == b)) throw std::invalid_argument("fields live on different grids");
}

template <typename Scalar>
class PeriodicField {
 public:
  using Values = RealArray<Scalar>;

  explicit PeriodicField(const PeriodicGrid& grid) : grid_(grid), values_(Values::Zero(grid.size())) {}

  PeriodicField(const PeriodicGrid& grid, Values values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw std::invalid_argument("sample count does not match grid size");
  }

  static PeriodicField constant(const PeriodicGrid& grid, Scalar c) {
    return PeriodicField(grid, Values::Constant(grid.size(), c));
  }

  // Samples fn(x_j) at every node.
  template <typename Fn>
  static PeriodicField sample(const PeriodicGrid& grid, Fn&& fn) {
    Values v(grid.size());
    for (Index j = 0; j < grid.size(); ++j) v[j] = fn(grid.node<Scalar>(j));
    return PeriodicField(grid, std::move(v));
  }

  const PeriodicGrid& grid() const { return grid_; }
  Index size() const { return values_.size(); }
  const Values& values() const { return values_; }
  Values& values() { return values_; }
  Scalar operator[](Index j) const { return values_[j]; }
  Scalar& operator[](Index j) { return values_[j]; }

  bool all_finite() const { return values_.allFinite(); }
  Scalar max_abs() const { return values_.abs().maxCoeff(); }

  PeriodicField& operator+=(const PeriodicField& o) {
    require_same_grid(grid_, o.grid_);
    values_ += o.values_;
    return *this;
  }
  PeriodicField& operator-=(const PeriodicField& o) {
    require_same_grid(grid_, o.grid_);
    values_ -= o.values_;
    return *this;
  }
  PeriodicField& operator*=(Scalar c) {
    values_ *= c;
    return *this;
  }

 private:
  PeriodicGrid grid_;
  Values values_;
};

template <typename Scalar>
PeriodicField<Scalar> operator+(PeriodicField<Scalar> a, const PeriodicField<Scalar>& b) {
  return a += b;
}
template <typename Scalar>
PeriodicField<Scalar> operator-(PeriodicField<Scalar> a, const PeriodicField<Scalar>& b) {
  return a -= b;
}
template <typename Scalar>
PeriodicField<Scalar> operator-(PeriodicField<Scalar> a) {
  return a *= Scalar(-1);
}
// Pointwise product.
template <typename Scalar>
PeriodicField<Scalar> operator*(const PeriodicField<Scalar>& a, const PeriodicField<Scalar>& b) {
  require_same_grid(a.grid(), b.grid());
  return PeriodicField<Scalar>(a.grid(), a.values() * b.values());
}
template <typename Scalar>
PeriodicField<Scalar> operator*(Scalar c, PeriodicField<Scalar> a) {
  return a *= c;
}
template <typename Scalar>
PeriodicField<Scalar> operator*(PeriodicField<Scalar> a, Scalar c) {
  return a *= c;
}

template <typename Scalar>
class Spectrum {
 public:
  using Coefficients = ComplexArray<Scalar>;

  explicit Spectrum(const PeriodicGrid& grid) : grid_(grid), coeffs_(Coefficients::Zero(grid.size())) {}
  Spectrum(const PeriodicGrid& grid, Coefficients coeffs) : grid_(grid), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != grid_.size()) throw std::invalid_argument("coefficient count does not match grid size");
  }

  const PeriodicGrid& grid() const { return grid_; }
  // FFT-ordered coefficients.
  const Coefficients& coefficients() const { return coeffs_; }
  Coefficients& coefficients() { return coeffs_; }

  std::complex<Scalar> at(Index k) const { return coeffs_[grid_.slot(k)]; }
  std::complex<Scalar>& at(Index k) { return coeffs_[grid_.slot(k)]; }

  // c_{-k} == conj(c_k) for 0 < k < n/2 and c_0, c_{-n/2} real, within tol.
  bool is_hermitian(Scalar tol) const {
    const Index n = grid_.size();
    if (std::abs(coeffs_[0].imag()) > tol || std::abs(coeffs_[n / 2].imag()) > tol) return false;
    for (Index k = 1; k < n / 2; ++k)
      if (std::abs(at(-k) - std::conj(at(k))) > tol) return false;
    return true;
  }

  // Multiplies every coefficient by symbol(k), k the signed wavenumber.
  template <typename Symbol>
  Spectrum& apply(Symbol&& symbol) {
    for (Index i = 0; i < coeffs_.size(); ++i) coeffs_[i] *= symbol(grid_.wavenumber(i));
    return *this;
  }

 private:
  PeriodicGrid grid_;
  Coefficients coeffs_;
};

namespace detail {

// Eigen::FFT caches twiddles per instance; one engine per thread keeps the
// public transforms free of shared mutable state.
template <typename Scalar>
Eigen::FFT<Scalar>& fft_engine() {
  thread_local Eigen::FFT<Scalar> engine;
  return engine;
}

template <typename Scalar>
constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;

}  // namespace detail

template <typename Scalar>
Spectrum<Scalar> to_spectrum(const PeriodicField<Scalar>& f) {
  const Index n = f.size();
  Spectrum<Scalar> s(f.grid());
  detail::fft_engine<Scalar>().fwd(s.coefficients().data(), f.values().data(), n);
  s.coefficients() /= static_cast<Scalar>(n);
  return s;
}

// Inverse transform.  Uses the non-negative half of the spectrum, so the
// input is treated as the spectrum of a real field.
template <typename Scalar>
PeriodicField<Scalar> from_spectrum(const Spectrum<Scalar>& s) {
  const Index n = s.grid().size();
  typename Spectrum<Scalar>::Coefficients scaled = s.coefficients() * static_cast<Scalar>(n);
  PeriodicField<Scalar> f(s.grid());
  detail::fft_engine<Scalar>().inv(f.values().data(), scaled.data(), n);
  return f;
}

// Spectral multiplier 2 pi i k with the Nyquist slot zeroed.
template <typename Scalar>
Spectrum<Scalar>& differentiate(Spectrum<Scalar>& s) {
  const Index nyquist = s.grid().nyquist_slot();
  s.apply([](Index k) { return std::complex<Scalar>(0, detail::two_pi<Scalar> * static_cast<Scalar>(k)); });
  s.coefficients()[nyquist] = 0;
  return s;
}

template <typename Scalar>
PeriodicField<Scalar> derivative(const PeriodicField<Scalar>& f) {
  auto s = to_spectrum(f);
  return from_spectrum(differentiate(s));
}

// Zeroes every mode with |k| > n/3.
template <typename Scalar>
Spectrum<Scalar> dealias(Spectrum<Scalar> s) {
  const Index n = s.grid().size();
  for (Index i = 0; i < n; ++i)
    if (3 * std::abs(s.grid().wavenumber(i)) > n) s.coefficients()[i] = 0;
  return s;
}

template <typename Scalar>
PeriodicField<Scalar> dealias(const PeriodicField<Scalar>& f) {
  return from_spectrum(dealias(to_spectrum(f)));
}

// sum_k (1 + 4 pi^2 k^2) |c_k|^2.
template <typename Scalar>
Scalar h1_norm_sq(const Spectrum<Scalar>& s) {
  Scalar sum = 0;
  const auto& c = s.coefficients();
  for (Index i = 0; i < c.size(); ++i) {
    const Scalar wk = detail::two_pi<Scalar> * static_cast<Scalar>(s.grid().wavenumber(i));
    sum += (Scalar(1) + wk * wk) * std::norm(c[i]);
  }
  return sum;
}

template <typename Scalar>
Scalar h1_norm_sq(const PeriodicField<Scalar>& f) {
  return h1_norm_sq(to_spectrum(f));
}

template <typename Scalar>
Scalar wrap_unit(Scalar x) {
  Scalar r = x - std::floor(x);
  return r >= Scalar(1) ? Scalar(0) : r;
}

// Value and first derivative of the trigonometric interpolant at x.
template <typename Scalar>
struct PointSample {
  Scalar value;
  Scalar slope;
};

// Direct evaluation of the Fourier series at x (reduced mod 1).  The Nyquist
// mode contributes Re(c_{-n/2}) cos(pi n x), which keeps the interpolant real
// and exact at the nodes; its derivative is dropped, matching derivative().
template <typename Scalar>
PointSample<Scalar> interpolate_with_slope(const Spectrum<Scalar>& s, Scalar x) {
  using std::cos;
  using std::sin;
  const Index n = s.grid().size();
  const Scalar xr = wrap_unit(x);
  Scalar value = s.coefficients()[0].real();
  Scalar slope = 0;
  for (Index k = 1; k < n / 2; ++k) {
    const Scalar phase = detail::two_pi<Scalar> * static_cast<Scalar>(k) * xr;
    const Scalar c = cos(phase), sn = sin(phase);
    const std::complex<Scalar> ck = s.at(k), cmk = s.at(-k);
    // c_k e^{i phase} + c_{-k} e^{-i phase}
    const std::complex<Scalar> sum = ck + cmk, diff = ck - cmk;
    value += sum.real() * c - diff.imag() * sn;
    const Scalar wk = detail::two_pi<Scalar> * static_cast<Scalar>(k);
    slope += wk * (-diff.imag() * c - sum.real() * sn);
  }
  value += s.coefficients()[n / 2].real() * cos(std::numbers::pi_v<Scalar> * static_cast<Scalar>(n) * xr);
  return {value, slope};
}

template <typename Scalar>
Scalar interpolate(const Spectrum<Scalar>& s, Scalar x) {
  return interpolate_with_slope(s, x).value;
}

template <typename Scalar>
Scalar interpolate(const PeriodicField<Scalar>& f, Scalar x) {
  return interpolate(to_spectrum(f), x);
}

}  // namespace chlab

#endif  // CHLAB_GRID_HPP
