// Right-hand sides of the coupled system in nonlocal (u, v) form
//
//   u_t + (u+v) u_x = -P*(u v_x) - d_x P*(u^2 + u_x^2/2 + u_x v_x + v^2/2 - v_x^2/2)
//   v_t + (u+v) v_x = -P*(u_x v) - d_x P*(v^2 + v_x^2/2 + u_x v_x + u^2/2 - u_x^2/2)
//
// and of the combined velocity w = u + v.
#ifndef CHLAB_DYNAMICS_HPP
#define CHLAB_DYNAMICS_HPP

#include "chlab/grid.hpp"

#include <stdexcept>

namespace chlab {

using Field = PeriodicField<double>;

struct SolutionState {
  double t = 0.0;
  Field u;
  Field v;

  explicit SolutionState(const PeriodicGrid& grid) : u(grid), v(grid) {}
  SolutionState(double time, Field u0, Field v0) : t(time), u(std::move(u0)), v(std::move(v0)) {
    require_same_grid(u.grid(), v.grid());
  }

  const PeriodicGrid& grid() const { return u.grid(); }
  bool all_finite() const { return u.all_finite() && v.all_finite(); }
  Field w() const { return u + v; }
};

class NonfiniteState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StateRate {
  Field du_dt;
  Field dv_dt;
};

// Time derivative of (u, v).  Quadratic products are formed pointwise and,
// when `dealias` is set, truncated to |k| <= n/3 before any convolution.
// Throws NonfiniteState if the result contains NaN or Inf.
StateRate rhs_state(const SolutionState& s, bool dealias = true);

// F = 3/2 u^2 + u v + 2 u_x v_x + 3/2 v^2.
Field quadratic_bundle(const SolutionState& s, bool dealias = true);

// w_t + w w_x = -d_x P * F.
Field rhs_w(const SolutionState& s, bool dealias = true);

// w_tx + w w_xx = -u_x^2 - v_x^2 + 3/2 u^2 + 3/2 v^2 + u v - P * F.
Field rhs_wx(const SolutionState& s, bool dealias = true);

struct AprioriReport {
  double max_uv_sq = 0.0;     // ||u^2 + v^2||_inf
  double max_pplus_F = 0.0;   // ||P_plus * (3u^2 + 2uv + 4u_x v_x + 3v^2)||_inf
  double max_pminus_F = 0.0;  // same with P_minus
  double bound_uv = 0.0;      // E0 / 2
  double bound_conv = 0.0;    // 2 coth(1/2) E0
  bool violated = false;
};

// Relative tolerance: a value v violates bound b when v > b (1 + tol).
AprioriReport apriori_check(const SolutionState& s, double E0, double tol = 1e-6);

}  // namespace chlab

#endif  // CHLAB_DYNAMICS_HPP
