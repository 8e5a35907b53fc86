#ifndef CHLAB_RANDOM_FIELDS_HPP
#define CHLAB_RANDOM_FIELDS_HPP

#include "chlab/grid.hpp"

#include <random>
#include <stdexcept>

namespace chlab {

// Real field with random Fourier content on 0 <= |k| <= kmax, rescaled to
// max |f| = amplitude.
template <typename Scalar, typename Rng>
PeriodicField<Scalar> random_band_limited(const PeriodicGrid& grid, Index kmax, Rng& rng, Scalar amplitude = Scalar(1)) {
  if (kmax < 0 || kmax >= grid.size() / 2) throw std::invalid_argument("kmax must lie in [0, n/2)");
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Spectrum<Scalar> s(grid);
  s.at(0) = static_cast<Scalar>(unit(rng));
  for (Index k = 1; k <= kmax; ++k) {
    const std::complex<Scalar> c(static_cast<Scalar>(unit(rng)), static_cast<Scalar>(unit(rng)));
    s.at(k) = c;
    s.at(-k) = std::conj(c);
  }
  auto f = from_spectrum(s);
  const Scalar peak = f.max_abs();
  if (peak > Scalar(0)) f *= amplitude / peak;
  return f;
}

}  // namespace chlab

#endif  // CHLAB_RANDOM_FIELDS_HPP
