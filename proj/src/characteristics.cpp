#include "chlab/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chlab {

MNSample sample_MN(const Spectrum<double>& w_spectrum, double q) {
  const auto p = interpolate_with_slope(w_spectrum, q);
  return {p.value, p.slope, p.value - p.slope, p.value + p.slope};
}

MNSample sample_MN(const SolutionState& s, double q) { return sample_MN(to_spectrum(s.w()), q); }

TrackPosition advance_q(double q, std::span<const SolutionState, 4> stages, double dt) {
  auto velocity = [&](std::size_t stage, double x) { return interpolate(to_spectrum(stages[stage].w()), x); };
  const double k1 = velocity(0, q);
  const double k2 = velocity(1, q + 0.5 * dt * k1);
  const double k3 = velocity(2, q + 0.5 * dt * k2);
  const double k4 = velocity(3, q + dt * k3);
  const double next = q + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return {next, wrap_unit(next)};
}

void record_sample(CharacteristicTrack& track, const SolutionState& s, double q_unwrapped) {
  const auto mn = sample_MN(s, q_unwrapped);
  track.times.push_back(s.t);
  track.q_unwrapped.push_back(q_unwrapped);
  track.q.push_back(wrap_unit(q_unwrapped));
  track.w.push_back(mn.w);
  track.wx.push_back(mn.wx);
  track.M.push_back(mn.M);
  track.N.push_back(mn.N);
  const double mn_product = mn.M * mn.N;
  track.g.push_back(mn_product < 0.0 ? std::optional<double>(std::sqrt(-mn_product)) : std::nullopt);
}

CharacteristicTrack start_track(double x0, const SolutionState& s) {
  CharacteristicTrack track;
  track.x0 = x0;
  record_sample(track, s, x0);
  return track;
}

std::vector<double> jacobian_series(const CharacteristicTrack& track) {
  std::vector<double> out;
  out.reserve(track.size());
  double integral = 0.0;
  for (std::size_t i = 0; i < track.size(); ++i) {
    if (i > 0) integral += 0.5 * (track.times[i] - track.times[i - 1]) * (track.wx[i] + track.wx[i - 1]);
    out.push_back(std::exp(integral));
  }
  return out;
}

bool jacobian_positivity(const CharacteristicTrack& track) {
  const auto qx = jacobian_series(track);
  return std::all_of(qx.begin(), qx.end(), [](double v) { return std::isfinite(v) && v > 0.0; });
}

namespace {

// f'(t_i) from (t_{i-1}, t_i, t_{i+1}), exact for quadratics.
double centered(const std::vector<double>& t, const std::vector<double>& f, std::size_t i) {
  const double hm = t[i] - t[i - 1];
  const double hp = t[i + 1] - t[i];
  return (hm * hm * f[i + 1] - hp * hp * f[i - 1] + (hp * hp - hm * hm) * f[i]) / (hm * hp * (hm + hp));
}

}  // namespace

RiccatiResidual riccati_residual(const CharacteristicTrack& track, double K, std::size_t limit) {
  const std::size_t n = std::min(limit, track.size());
  RiccatiResidual r;
  std::vector<double> gvals(track.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) gvals[i] = track.g[i].value_or(0.0);
  const double k2 = K * K;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!track.g[i - 1] || !track.g[i] || !track.g[i + 1]) continue;
    const double g = *track.g[i];
    const double mn = track.M[i] * track.N[i];
    r.index.push_back(i);
    r.g_residual.push_back(centered(track.times, gvals, i) - (0.5 * g * g - k2));
    r.m_residual.push_back(centered(track.times, track.M, i) + 0.5 * mn + k2);
    r.n_residual.push_back(-centered(track.times, track.N, i) + 0.5 * mn + k2);
  }
  if (r.index.empty()) throw std::invalid_argument("riccati_residual needs three consecutive samples with g defined");
  return r;
}

bool displacement_check(const CharacteristicTrack& track, double E0, double tol) {
  const double speed = std::sqrt(0.5 * E0);
  for (std::size_t i = 0; i < track.size(); ++i) {
    const double elapsed = track.times[i] - track.times.front();
    if (std::abs(track.q_unwrapped[i] - track.x0) > speed * elapsed + tol) return false;
  }
  return true;
}

bool monotonicity_check(const CharacteristicTrack& track, double K, double rel_tol, std::size_t limit) {
  const std::size_t n = std::min(limit, track.size());
  if (n == 0) return false;
  const double floor_mn = -2.0 * K * K;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(track.M[i] * track.N[i] < floor_mn) || !track.g[i]) return false;
    if (i == 0) continue;
    if (track.M[i] < track.M[i - 1] - rel_tol * std::abs(track.M[i - 1])) return false;
    if (track.N[i] > track.N[i - 1] + rel_tol * std::abs(track.N[i - 1])) return false;
    if (*track.g[i] < *track.g[i - 1] - rel_tol * *track.g[i - 1]) return false;
  }
  return true;
}

bool riccati_check(const CharacteristicTrack& track, double K, double slack, std::size_t limit) {
  RiccatiResidual r;
  try {
    r = riccati_residual(track, K, limit);
  } catch (const std::invalid_argument&) {
    return false;
  }
  for (std::size_t j = 0; j < r.index.size(); ++j) {
    const double g = *track.g[r.index[j]];
    if (r.g_residual[j] < -slack * std::max(1.0, g * g)) return false;
  }
  return true;
}

}  // namespace chlab
