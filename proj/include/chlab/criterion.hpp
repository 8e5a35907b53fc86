// Sufficient condition for finite-time breaking and its quantitative
// predictions.  With w0 = u0 + v0 and
//   K = sqrt((1/2 + 2 coth(1/2)) E0),
// breaking is guaranteed if some x0 has w0_x(x0) < -|w0(x0)| - sqrt(2) K.
// The breaking time is then at most
//   T* = ln((g0 + sqrt(2) K) / (g0 - sqrt(2) K)) / (sqrt(2) K),
//   g0 = sqrt(w0_x(x0)^2 - w0(x0)^2),
// and the breaking point lies within sqrt(E0/2) T* of x0.
#ifndef CHLAB_CRITERION_HPP
#define CHLAB_CRITERION_HPP

#include "chlab/dynamics.hpp"

#include <optional>

namespace chlab {

// 1/2 + 2 coth(1/2).
double criterion_constant();

// Throws std::invalid_argument for negative E0.
double compute_K(double E0);

// -w0_x(x) - |w0(x)| - sqrt(2) K; positive where the criterion holds.
double criterion_margin(const SolutionState& z0, double x, double K);
double criterion_margin(const Spectrum<double>& w0_spectrum, double x, double K);

struct CriterionPoint {
  double x0;
  double margin;
};

// Maximizer of the margin: best grid node, then golden-section polish to
// 1e-10 in x.  Always returns the best point found, satisfied or not.
CriterionPoint best_margin(const SolutionState& z0, double K);

// best_margin when its margin is positive.
std::optional<CriterionPoint> scan_x0(const SolutionState& z0, double K);

struct TstarBound {
  double tstar;
  double g0;
};

// Closed-form bound from g0 and K.  Throws std::invalid_argument unless
// g0 > sqrt(2) K.
double tstar_from_g0(double g0, double K);

// g0 from the data at x0, then tstar_from_g0.
TstarBound tstar_bound(const SolutionState& z0, double x0, double K);

struct BlowupInterval {
  double lo;
  double hi;
  double lo_wrapped;  // lo mod 1
  double hi_wrapped;  // hi mod 1

  // Arc-aware membership on the circle.
  bool contains(double x, double tol = 0.0) const;
};

BlowupInterval blowup_interval(double x0, double E0, double tstar);

struct CriterionReport {
  bool satisfied = false;
  double x0 = 0.0;
  double margin = 0.0;
  double E0 = 0.0;
  double K = 0.0;
  std::optional<double> tstar;
  std::optional<BlowupInterval> interval;
  std::optional<double> g0;
};

CriterionReport evaluate(const SolutionState& z0);

}  // namespace chlab

#endif  // CHLAB_CRITERION_HPP
