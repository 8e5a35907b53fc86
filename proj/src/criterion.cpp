#include "chlab/criterion.hpp"

#include "chlab/evolution.hpp"
#include "chlab/kernel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace chlab {

double criterion_constant() { return 0.5 + 2.0 * coth_half<double>(); }

double compute_K(double E0) {
  if (!(E0 >= 0.0)) throw std::invalid_argument("energy must be non-negative");
  return std::sqrt(criterion_constant() * E0);
}

double criterion_margin(const Spectrum<double>& w0_spectrum, double x, double K) {
  const auto p = interpolate_with_slope(w0_spectrum, x);
  return -p.slope - std::abs(p.value) - std::numbers::sqrt2 * K;
}

double criterion_margin(const SolutionState& z0, double x, double K) {
  return criterion_margin(to_spectrum(z0.w()), x, K);
}

CriterionPoint best_margin(const SolutionState& z0, double K) {
  const Field w = z0.w();
  const Field wx = derivative(w);
  const PeriodicGrid& grid = z0.grid();

  Index best = 0;
  double best_margin = -std::numeric_limits<double>::infinity();
  for (Index j = 0; j < grid.size(); ++j) {
    const double m = -wx[j] - std::abs(w[j]) - std::numbers::sqrt2 * K;
    if (m > best_margin) {
      best_margin = m;
      best = j;
    }
  }

  const auto spectrum = to_spectrum(w);
  auto margin = [&](double x) { return criterion_margin(spectrum, x, K); };
  constexpr double inv_phi = 0.6180339887498949;
  double a = grid.node(best) - grid.dx();
  double b = grid.node(best) + grid.dx();
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = margin(c);
  double fd = margin(d);
  while (b - a > 1e-10) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = margin(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = margin(d);
    }
  }
  const double x = 0.5 * (a + b);
  const double polished = margin(x);
  if (polished > best_margin) return {wrap_unit(x), polished};
  return {grid.node(best), best_margin};
}

std::optional<CriterionPoint> scan_x0(const SolutionState& z0, double K) {
  const auto p = best_margin(z0, K);
  if (p.margin > 0.0) return p;
  return std::nullopt;
}

double tstar_from_g0(double g0, double K) {
  const double c = std::numbers::sqrt2 * K;
  if (!(g0 > c)) throw std::invalid_argument("T* bound needs g0 > sqrt(2) K");
  if (c == 0.0) return 2.0 / g0;
  // ln((g0 + c) / (g0 - c)) = 2 atanh(c / g0)
  return 2.0 * std::atanh(c / g0) / c;
}

TstarBound tstar_bound(const SolutionState& z0, double x0, double K) {
  const auto p = interpolate_with_slope(to_spectrum(z0.w()), x0);
  const double g0_sq = p.slope * p.slope - p.value * p.value;
  if (!(g0_sq > 0.0)) throw std::invalid_argument("T* bound needs |w0_x| > |w0| at x0");
  const double g0 = std::sqrt(g0_sq);
  return {tstar_from_g0(g0, K), g0};
}

bool BlowupInterval::contains(double x, double tol) const {
  const double width = hi - lo;
  if (width + 2.0 * tol >= 1.0) return true;
  const double offset = wrap_unit(x - lo + tol);
  return offset <= width + 2.0 * tol;
}

BlowupInterval blowup_interval(double x0, double E0, double tstar) {
  const double half = std::sqrt(0.5 * E0) * tstar;
  const double lo = x0 - half;
  const double hi = x0 + half;
  return {lo, hi, wrap_unit(lo), wrap_unit(hi)};
}

CriterionReport evaluate(const SolutionState& z0) {
  CriterionReport r;
  r.E0 = energy(z0);
  r.K = compute_K(r.E0);
  const auto best = best_margin(z0, r.K);
  r.x0 = best.x0;
  r.margin = best.margin + 0.0;  // -0 -> +0
  r.satisfied = best.margin > 0.0;
  if (r.satisfied) {
    const auto bound = tstar_bound(z0, r.x0, r.K);
    r.tstar = bound.tstar;
    r.g0 = bound.g0;
    r.interval = blowup_interval(r.x0, r.E0, bound.tstar);
  }
  return r;
}

}  // namespace chlab
