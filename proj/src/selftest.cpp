#include "chlab/experiments.hpp"
#include "chlab/kernel.hpp"
#include "chlab/random_fields.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>

namespace chlab {
namespace {

class Report {
 public:
  Report(std::ostream& log, Index n) : log_(log), n_(n) {}

  void check(const char* name, double value, double tol) {
    const bool ok = value <= tol;
    line(ok ? "PASS" : "FAIL", name, value, tol);
    if (!ok) ++failures_;
  }
  void check_true(const char* name, bool ok) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "[n=%ld] %s %s\n", static_cast<long>(n_), ok ? "PASS" : "FAIL", name);
    log_ << buf;
    if (!ok) ++failures_;
  }
  void info(const char* name, double value) { line("INFO", name, value, std::nan("")); }
  int failures() const { return failures_; }

 private:
  void line(const char* tag, const char* name, double value, double tol) {
    char buf[200];
    if (std::isnan(tol))
      std::snprintf(buf, sizeof buf, "[n=%ld] %s %s = %.6e\n", static_cast<long>(n_), tag, name, value);
    else
      std::snprintf(buf, sizeof buf, "[n=%ld] %s %s = %.6e (tol %.1e)\n", static_cast<long>(n_), tag, name, value, tol);
    log_ << buf;
  }

  std::ostream& log_;
  Index n_;
  int failures_ = 0;
};

double max_diff(const Field& a, const Field& b) { return (a.values() - b.values()).abs().maxCoeff(); }

bool bitwise_equal(const Field& a, const Field& b) { return (a.values() == b.values()).all(); }

SolutionState fixed_dt_run(const SolutionState& z0, double t_end, double dt) {
  StepControl ctrl;
  ctrl.cfl = 1e6;
  ctrl.dt_max = dt;
  ctrl.dt_min = 1e-12;
  ctrl.slope_threshold = 1e12;
  return run(z0, t_end, ctrl).final_state;
}

void kernel_checks(Report& r, const PeriodicGrid& grid, std::mt19937_64& rng, double stiffness) {
  const Index kmax = grid.size() / 4;
  double helmholtz = 0, split_sum = 0, split_diff = 0, spectral_split = 0, quad_vs_spectral = 0;
  double literal_sum = 0, literal_diff = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_band_limited<double>(grid, kmax, rng);
    helmholtz = std::max(helmholtz, helmholtz_residual(f, stiffness));
    const auto split = split_identity_residuals(f);
    split_sum = std::max(split_sum, split.sum);
    split_diff = std::max(split_diff, split.difference);
    const auto plus = conv_p_plus_spectral(f);
    const auto minus = conv_p_minus_spectral(f);
    spectral_split = std::max(spectral_split, max_diff(plus + minus, conv_p(f)));
    spectral_split = std::max(spectral_split, max_diff(minus - plus, conv_dp(f)));
    quad_vs_spectral = std::max(quad_vs_spectral, max_diff(conv_p_quadrature(f), conv_p(f)));
    const auto literal = nonperiodic_split_residuals(f);
    literal_sum = std::max(literal_sum, literal.sum);
    literal_diff = std::max(literal_diff, literal.difference);
  }
  r.check("helmholtz_identity", helmholtz, 1e-8);
  r.check("split_sum_identity", split_sum, 1e-8);
  r.check("split_difference_identity", split_diff, 1e-8);
  r.check("spectral_split_identities", spectral_split, 1e-12);
  r.check("quadrature_vs_spectral_p", quad_vs_spectral, 1e-8);
  r.info("nonperiodic_split_sum_residual", literal_sum);
  r.info("nonperiodic_split_difference_residual", literal_diff);

  const auto one = Field::constant(grid, 1.0);
  r.check("p_conv_one", max_diff(conv_p_quadrature(one), one), 1e-12);
  r.check("p_plus_conv_one", max_diff(conv_p_plus(one), 0.5 * one), 1e-12);
  r.check("p_minus_conv_one", max_diff(conv_p_minus(one), 0.5 * one), 1e-12);
}

void spectral_checks(Report& r, const PeriodicGrid& grid) {
  using std::numbers::pi;
  const auto s = Field::sample(grid, [](double x) { return std::sin(2 * pi * x); });
  const auto c = Field::sample(grid, [](double x) { return 2 * pi * std::cos(2 * pi * x); });
  r.check("derivative_of_sine", max_diff(derivative(s), c) / (2 * pi), 1e-12);
  r.check("h1_norm_of_sine", std::abs(h1_norm_sq(s) - 0.5 * (1 + 4 * pi * pi)), 1e-10);
  r.check("interpolation_off_grid", std::abs(interpolate(s, 0.123456789) - std::sin(2 * pi * 0.123456789)), 1e-12);
}

void dynamics_checks(Report& r, const PeriodicGrid& grid, std::mt19937_64& rng) {
  const Index kmax = grid.size() / 6;
  const SolutionState z(0.0, random_band_limited<double>(grid, kmax, rng), random_band_limited<double>(grid, kmax, rng));

  // x-derivative of the w equation; exact here because nothing aliases at |k| <= n/6
  const Field wx = derivative(z.w());
  const Field expected = derivative(rhs_w(z)) - wx * wx;
  const Field got = rhs_wx(z);
  r.check("rhs_wx_identity", max_diff(got, expected) / std::max(1.0, got.max_abs()), 1e-11);

  const SolutionState swapped(0.0, z.v, z.u);
  const auto a = rhs_state(z);
  const auto b = rhs_state(swapped);
  r.check_true("swap_symmetry_bitwise", bitwise_equal(a.du_dt, b.dv_dt) && bitwise_equal(a.dv_dt, b.du_dt));

  const Field w_rate = rhs_w(z);
  const Field sum_rate = a.du_dt + a.dv_dt + z.w() * wx;
  r.check("w_rate_consistency", max_diff(w_rate, sum_rate) / std::max(1.0, w_rate.max_abs()), 1e-11);
}

void evolution_checks(Report& r, const PeriodicGrid& grid) {
  using std::numbers::pi;
  InitialSpec small;
  small.kind = InitialKind::sine;
  small.amp_u = 0.05;
  small.amp_v = 0.05;
  small.phase_u = pi / 2;
  const SolutionState z0 = build_initial(small, grid);
  StepControl ctrl;
  const auto first = run(z0, 0.1, ctrl);
  r.check("energy_drift_short_run", first.record.max_relative_energy_drift(), 1e-10);
  r.check_true("run_reaches_t_end", first.record.termination == Termination::reached_t_end);
  const auto second = run(z0, 0.1, ctrl);
  r.check_true("repeat_run_bitwise", bitwise_equal(first.final_state.u, second.final_state.u) &&
                                         bitwise_equal(first.final_state.v, second.final_state.v));

  InitialSpec bump;
  bump.kind = InitialKind::bump;
  bump.a = 0.5;
  bump.kappa = 2.0;
  const SolutionState b0 = build_initial(bump, grid);
  const double t_end = 0.2;
  const auto coarse = fixed_dt_run(b0, t_end, 8e-3);
  const auto mid = fixed_dt_run(b0, t_end, 4e-3);
  const auto fine = fixed_dt_run(b0, t_end, 2e-3);
  const double e1 = max_diff(coarse.u, mid.u) + max_diff(coarse.v, mid.v);
  const double e2 = max_diff(mid.u, fine.u) + max_diff(mid.v, fine.v);
  const double order = std::log2(e1 / e2);
  r.info("temporal_order", order);
  r.check("temporal_order_deficit", std::max(0.0, 3.9 - order), 0.0);
}

void criterion_checks(Report& r, const PeriodicGrid& grid) {
  const double expected = std::sqrt(0.5 + 2 * (std::numbers::e + 1) / (std::numbers::e - 1));
  r.check("compute_K_unit_energy", std::abs(compute_K(1.0) - expected), 1e-12);

  InitialSpec harmonic;
  harmonic.kind = InitialKind::sine;
  harmonic.amp_u = 3.0;
  r.check_true("single_harmonic_unsatisfiable", !evaluate(build_initial(harmonic, grid)).satisfied);

  InitialSpec bump;
  bump.kind = InitialKind::bump;
  bump.kappa = 8.0;
  bump.v_mode = VMode::equal;
  const SolutionState z1 = build_initial(bump, grid);
  bump.a = 2.5;
  const SolutionState z2 = build_initial(bump, grid);
  const double K1 = compute_K(energy(z1));
  const double m1 = criterion_margin(z1, 0.55, K1);
  const double m2 = criterion_margin(z2, 0.55, 2.5 * K1);
  r.check("margin_scaling", std::abs(m2 - 2.5 * m1) / std::abs(2.5 * m1), 1e-10);
}

}  // namespace

int cmd_selftest(const SelftestOptions& options, std::ostream& log) {
  int failures = 0;
  for (Index n : {Index(64), Index(256)}) {
    const PeriodicGrid grid(n);
    std::mt19937_64 rng(options.seed + static_cast<std::uint64_t>(n));
    Report r(log, n);
    kernel_checks(r, grid, rng, options.kernel_stiffness);
    spectral_checks(r, grid);
    dynamics_checks(r, grid, rng);
    evolution_checks(r, grid);
    criterion_checks(r, grid);
    failures += r.failures();
  }
  log << (failures == 0 ? "selftest: all checks passed\n" : "selftest: " + std::to_string(failures) + " check(s) failed\n");
  return failures;
}

}  // namespace chlab
