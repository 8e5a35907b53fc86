#include "chlab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace chlab {

DtUnderflow::DtUnderflow(double dt) : std::runtime_error("time step underflow: dt = " + std::to_string(dt)), dt_(dt) {}

double energy(const SolutionState& s) { return h1_norm_sq(s.u) + h1_norm_sq(s.v); }

double cfl_dt(const SolutionState& s, const StepControl& ctrl) {
  const double speed = std::max((s.u.values() + s.v.values()).abs().maxCoeff(), 1e-12);
  const double dt = std::min(ctrl.dt_max, ctrl.cfl * s.grid().dx() / speed);
  if (!(dt >= ctrl.dt_min)) throw DtUnderflow(dt);
  return dt;
}

namespace {

SolutionState shifted(const SolutionState& s, double t, const StateRate& k, double h) {
  return SolutionState(t, s.u + h * k.du_dt, s.v + h * k.dv_dt);
}

}  // namespace

SolutionState step_rk4(const SolutionState& s, double dt, bool dealias, StageStates* stages) {
  const double half = s.t + 0.5 * dt;
  const StateRate k1 = rhs_state(s, dealias);
  SolutionState s2 = shifted(s, half, k1, 0.5 * dt);
  const StateRate k2 = rhs_state(s2, dealias);
  SolutionState s3 = shifted(s, half, k2, 0.5 * dt);
  const StateRate k3 = rhs_state(s3, dealias);
  SolutionState s4 = shifted(s, s.t + dt, k3, dt);
  const StateRate k4 = rhs_state(s4, dealias);

  const double c = dt / 6.0;
  SolutionState next(s.t + dt,
                     Field(s.grid(), s.u.values() + c * (k1.du_dt.values() + 2.0 * k2.du_dt.values() +
                                                         2.0 * k3.du_dt.values() + k4.du_dt.values())),
                     Field(s.grid(), s.v.values() + c * (k1.dv_dt.values() + 2.0 * k2.dv_dt.values() +
                                                         2.0 * k3.dv_dt.values() + k4.dv_dt.values())));
  if (!next.all_finite()) throw NonfiniteState("non-finite state after step to t = " + std::to_string(next.t));
  if (stages) *stages = {s, std::move(s2), std::move(s3), std::move(s4)};
  return next;
}

SlopeExtremum min_slope(const SolutionState& s) {
  const Field slope = derivative(s.w());
  Index at = 0;
  const double value = slope.values().minCoeff(&at);
  return {value, s.grid().node(at)};
}

std::optional<SlopeExtremum> detect_breaking(const SolutionState& s, const StepControl& ctrl) {
  const auto m = min_slope(s);
  if (m.slope <= -ctrl.slope_threshold) return m;
  return std::nullopt;
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::reached_t_end:
      return "reached_t_end";
    case Termination::breaking_detected:
      return "breaking_detected";
    case Termination::dt_underflow:
      return "dt_underflow";
    case Termination::nonfinite_state:
      return "nonfinite_state";
  }
  return "unknown";
}

double RunRecord::max_relative_energy_drift() const {
  double worst = 0.0;
  for (const auto& s : samples) {
    const double drift = std::abs(s.energy - E0);
    worst = std::max(worst, E0 > 0.0 ? drift / E0 : drift);
  }
  return worst;
}

bool RunRecord::apriori_violated() const {
  return std::any_of(samples.begin(), samples.end(), [](const StepSample& s) { return s.apriori && s.apriori->violated; });
}

RunResult run(const SolutionState& initial, double t_end, const StepControl& ctrl, std::span<const double> track_x0,
              const RunOptions& options) {
  if (!(t_end > initial.t)) throw std::invalid_argument("t_end must exceed the initial time");
  RunResult result{RunRecord{}, {}, initial};
  RunRecord& record = result.record;
  SolutionState& state = result.final_state;
  record.E0 = energy(initial);

  std::vector<double> q;
  for (double x0 : track_x0) {
    result.tracks.push_back(start_track(x0, initial));
    q.push_back(x0);
  }

  auto sample = [&](double dt, bool last) {
    const auto slope = min_slope(state);
    StepSample s{record.steps, state.t, energy(state), slope.slope, slope.location, dt, std::nullopt};
    if (options.apriori_stride > 0 && (record.steps % options.apriori_stride == 0 || last))
      s.apriori = apriori_check(state, record.E0, options.apriori_tol);
    record.samples.push_back(s);
    return slope;
  };

  auto declare_breaking = [&](const SlopeExtremum& slope) {
    record.termination = Termination::breaking_detected;
    record.break_time = state.t;
    record.break_location = slope.location;
  };

  // Initial data may already be past the threshold.
  if (const auto slope = sample(0.0, false); slope.slope <= -ctrl.slope_threshold) {
    declare_breaking(slope);
    if (options.apriori_stride > 0) record.samples.back().apriori = apriori_check(state, record.E0, options.apriori_tol);
    return result;
  }

  StageStates stages{state, state, state, state};
  while (state.t < t_end && record.steps < options.max_steps) {
    double dt = 0.0;
    try {
      dt = cfl_dt(state, ctrl);
    } catch (const DtUnderflow&) {
      record.termination = Termination::dt_underflow;
      record.break_time = state.t;
      record.break_location = min_slope(state).location;
      break;
    }
    const bool final_step = state.t + dt * (1.0 + 1e-9) >= t_end;
    if (final_step) dt = t_end - state.t;

    SolutionState next(state.grid());
    try {
      next = step_rk4(state, dt, ctrl.dealias, q.empty() ? nullptr : &stages);
    } catch (const NonfiniteState&) {
      record.termination = Termination::nonfinite_state;
      record.break_time = state.t;
      break;
    }
    if (final_step) next.t = t_end;  // no drift from repeated summation

    for (std::size_t i = 0; i < q.size(); ++i) {
      q[i] = advance_q(q[i], stages, dt).unwrapped;
    }
    state = std::move(next);
    ++record.steps;
    for (std::size_t i = 0; i < q.size(); ++i) record_sample(result.tracks[i], state, q[i]);

    const auto breaking = detect_breaking(state, ctrl);
    const bool stop = breaking.has_value() || state.t >= t_end;
    sample(dt, stop);
    if (breaking) {
      declare_breaking(*breaking);
      break;
    }
  }
  if (record.termination == Termination::reached_t_end && state.t < t_end)
    throw std::runtime_error("step budget exhausted before t_end");
  return result;
}

bool collapse_is_monotone(const RunRecord& record, double onset, double rel_tol) {
  const double trigger = -onset * std::sqrt(record.E0);
  bool armed = false;
  for (std::size_t i = 0; i < record.samples.size(); ++i) {
    const double s = record.samples[i].min_slope;
    if (armed && s > record.samples[i - 1].min_slope + rel_tol * std::abs(record.samples[i - 1].min_slope)) return false;
    armed = armed || s < trigger;
  }
  return true;
}

std::size_t resolved_prefix(const RunRecord& record, double factor) {
  const double floor = -factor * std::sqrt(record.E0);
  std::size_t n = 0;
  while (n < record.samples.size() && record.samples[n].min_slope >= floor) ++n;
  return n;
}

}  // namespace chlab
