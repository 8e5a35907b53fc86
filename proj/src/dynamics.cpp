#include "chlab/dynamics.hpp"

#include "chlab/kernel.hpp"

#include <complex>

namespace chlab {
namespace {

using Spec = Spectrum<double>;
using Complex = std::complex<double>;

struct Gradients {
  Field ux;
  Field vx;
};

Gradients gradients(const SolutionState& s) {
  auto us = to_spectrum(s.u);
  auto vs = to_spectrum(s.v);
  return {from_spectrum(differentiate(us)), from_spectrum(differentiate(vs))};
}

Spec maybe_dealias(Spec s, bool dealias) { return dealias ? chlab::dealias(std::move(s)) : s; }

// -T - P*B - d_x P*Q, assembled mode by mode.
Field assemble_rate(const Spec& transport, const Spec& coupling, const Spec& pressure) {
  const PeriodicGrid& grid = transport.grid();
  Spec out(grid);
  const Index nyquist = grid.nyquist_slot();
  for (Index i = 0; i < grid.size(); ++i) {
    const double wk = detail::two_pi<double> * static_cast<double>(grid.wavenumber(i));
    const double helm = 1.0 / (1.0 + wk * wk);
    const Complex dhelm = i == nyquist ? Complex(0.0) : Complex(0.0, wk * helm);
    out.coefficients()[i] =
        -transport.coefficients()[i] - helm * coupling.coefficients()[i] - dhelm * pressure.coefficients()[i];
  }
  return from_spectrum(out);
}

}  // namespace

StateRate rhs_state(const SolutionState& s, bool dealias) {
  const auto [ux, vx] = gradients(s);
  const auto& u = s.u.values();
  const auto& v = s.v.values();
  const auto& uxv = ux.values();
  const auto& vxv = vx.values();
  const PeriodicGrid& grid = s.grid();
  const Field::Values w = u + v;
  const Field::Values cross = uxv * vxv;

  auto spectral = [&](const Field::Values& product) {
    return maybe_dealias(to_spectrum(Field(grid, product)), dealias);
  };

  const Field::Values qu = u * u + 0.5 * (uxv * uxv) + cross + 0.5 * (v * v) - 0.5 * (vxv * vxv);
  const Field::Values qv = v * v + 0.5 * (vxv * vxv) + cross + 0.5 * (u * u) - 0.5 * (uxv * uxv);

  StateRate rate{assemble_rate(spectral(w * uxv), spectral(u * vxv), spectral(qu)),
                 assemble_rate(spectral(w * vxv), spectral(uxv * v), spectral(qv))};
  if (!rate.du_dt.all_finite() || !rate.dv_dt.all_finite())
    throw NonfiniteState("non-finite right-hand side at t = " + std::to_string(s.t));
  return rate;
}

Field quadratic_bundle(const SolutionState& s, bool dealias) {
  const auto [ux, vx] = gradients(s);
  const auto& u = s.u.values();
  const auto& v = s.v.values();
  Field f(s.grid(), 1.5 * u * u + u * v + 2.0 * ux.values() * vx.values() + 1.5 * v * v);
  return dealias ? chlab::dealias(f) : f;
}

Field rhs_w(const SolutionState& s, bool dealias) { return -conv_dp(quadratic_bundle(s, dealias)); }

Field rhs_wx(const SolutionState& s, bool dealias) {
  const auto [ux, vx] = gradients(s);
  const auto& u = s.u.values();
  const auto& v = s.v.values();
  const auto& a = ux.values();
  const auto& b = vx.values();
  const Field local(s.grid(), -a * a - b * b + 1.5 * u * u + 1.5 * v * v + u * v);
  return local - conv_p(quadratic_bundle(s, dealias));
}

AprioriReport apriori_check(const SolutionState& s, double E0, double tol) {
  const auto [ux, vx] = gradients(s);
  const auto& u = s.u.values();
  const auto& v = s.v.values();
  const Field g(s.grid(), 3.0 * u * u + 2.0 * u * v + 4.0 * ux.values() * vx.values() + 3.0 * v * v);

  AprioriReport r;
  r.max_uv_sq = (u * u + v * v).maxCoeff();
  r.max_pplus_F = conv_p_plus_spectral(g).max_abs();
  r.max_pminus_F = conv_p_minus_spectral(g).max_abs();
  r.bound_uv = 0.5 * E0;
  r.bound_conv = 2.0 * coth_half<double>() * E0;
  const double slack = 1.0 + tol;
  r.violated = r.max_uv_sq > r.bound_uv * slack || r.max_pplus_F > r.bound_conv * slack ||
               r.max_pminus_F > r.bound_conv * slack;
  return r;
}

}  // namespace chlab
