// Lagrangian tracking dq/dt = (u + v)(t, q) and the diagnostics
// M = w - w_x, N = w + w_x, g = sqrt(-M N) sampled along the track.
#ifndef CHLAB_CHARACTERISTICS_HPP
#define CHLAB_CHARACTERISTICS_HPP

#include "chlab/dynamics.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace chlab {

struct CharacteristicTrack {
  double x0 = 0.0;
  std::vector<double> times;
  std::vector<double> q;            // reduced mod 1
  std::vector<double> q_unwrapped;  // continuous lift, q_unwrapped[0] == x0
  std::vector<double> w;            // w at q
  std::vector<double> wx;           // w_x at q
  std::vector<double> M;
  std::vector<double> N;
  std::vector<std::optional<double>> g;  // defined only where M N < 0
  bool monotonicity_ok = false;
  bool riccati_ok = false;
  bool displacement_ok = false;

  std::size_t size() const { return times.size(); }
};

struct MNSample {
  double w;
  double wx;
  double M;
  double N;
};

// w and w_x at q by trigonometric interpolation.
MNSample sample_MN(const SolutionState& s, double q);
MNSample sample_MN(const Spectrum<double>& w_spectrum, double q);

struct TrackPosition {
  double unwrapped;
  double wrapped;
};

// One classical RK4 step of dq/dt = (u + v)(q) using the velocity of the
// four integrator stages: stages[0] at t, stages[1] and stages[2] at
// t + dt/2, stages[3] at t + dt.
TrackPosition advance_q(double q, std::span<const SolutionState, 4> stages, double dt);

// Track holding only its starting sample at state s.
CharacteristicTrack start_track(double x0, const SolutionState& s);

// Appends the sample at state s for lifted position q_unwrapped.
void record_sample(CharacteristicTrack& track, const SolutionState& s, double q_unwrapped);

// q_x(t) = exp(int_0^t w_x(tau, q(tau)) dtau) with trapezoid integration of
// the stored slopes.
std::vector<double> jacobian_series(const CharacteristicTrack& track);

// True when every entry of jacobian_series is finite and strictly positive.
bool jacobian_positivity(const CharacteristicTrack& track);

struct RiccatiResidual {
  std::vector<std::size_t> index;  // interior sample each entry belongs to
  std::vector<double> g_residual;  // g' - (g^2/2 - K^2)
  std::vector<double> m_residual;  // M' + M N / 2 + K^2
  std::vector<double> n_residual;  // -N' + M N / 2 + K^2
};

// Centered (three-point, non-uniform) differences at interior samples where
// g is defined at the sample and both neighbours.  Only samples below
// `limit` are used.  Throws std::invalid_argument when fewer than three
// usable samples exist.
RiccatiResidual riccati_residual(const CharacteristicTrack& track, double K,
                                 std::size_t limit = static_cast<std::size_t>(-1));

// |q(t) - x0| <= sqrt(E0/2) t + tol at every sample.
bool displacement_check(const CharacteristicTrack& track, double E0, double tol = 1e-8);

// M non-decreasing, N non-increasing, g increasing and M N < -2 K^2 for the
// first `limit` samples; step-to-step changes may go the wrong way by at most
// rel_tol times the magnitude.
bool monotonicity_check(const CharacteristicTrack& track, double K, double rel_tol = 1e-6,
                        std::size_t limit = static_cast<std::size_t>(-1));

// Riccati inequality for g with allowance slack * max(1, g^2).
bool riccati_check(const CharacteristicTrack& track, double K, double slack = 1e-3,
                   std::size_t limit = static_cast<std::size_t>(-1));

}  // namespace chlab

#endif  // CHLAB_CHARACTERISTICS_HPP
