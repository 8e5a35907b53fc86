// Time integration of the nonlocal system with energy and slope monitoring.
#ifndef CHLAB_EVOLUTION_HPP
#define CHLAB_EVOLUTION_HPP

#include "chlab/characteristics.hpp"
#include "chlab/dynamics.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace chlab {

struct StepControl {
  double cfl = 0.3;
  double dt_max = 1e-3;
  double dt_min = 1e-9;
  double slope_threshold = 1e4;
  bool dealias = true;

  bool operator==(const StepControl&) const = default;
};

class DtUnderflow : public std::runtime_error {
 public:
  explicit DtUnderflow(double dt);
  double dt() const { return dt_; }

 private:
  double dt_;
};

// ||u||_1^2 + ||v||_1^2.
double energy(const SolutionState& s);

// min(dt_max, cfl dx / max(||u+v||_inf, 1e-12)).  Throws DtUnderflow when
// the result is below dt_min.
double cfl_dt(const SolutionState& s, const StepControl& ctrl);

using StageStates = std::array<SolutionState, 4>;

// Classical RK4.  When `stages` is given it receives the four stage states
// (t, t+dt/2, t+dt/2, t+dt) used to evaluate the right-hand side.
// Throws NonfiniteState if the update is not finite.
SolutionState step_rk4(const SolutionState& s, double dt, bool dealias = true, StageStates* stages = nullptr);

struct SlopeExtremum {
  double slope;     // min_x (u_x + v_x) over the grid
  double location;  // grid node of the minimum
};

SlopeExtremum min_slope(const SolutionState& s);

// The slope extremum when it is at or below -slope_threshold.
std::optional<SlopeExtremum> detect_breaking(const SolutionState& s, const StepControl& ctrl);

enum class Termination { reached_t_end, breaking_detected, dt_underflow, nonfinite_state };

std::string_view to_string(Termination t);

struct StepSample {
  std::size_t step = 0;
  double t = 0.0;
  double energy = 0.0;
  double min_slope = 0.0;
  double min_slope_x = 0.0;
  double dt = 0.0;  // step that produced this sample; 0 for the initial one
  std::optional<AprioriReport> apriori;
};

struct RunRecord {
  double E0 = 0.0;
  std::vector<StepSample> samples;  // initial state plus every accepted step
  Termination termination = Termination::reached_t_end;
  std::optional<double> break_time;
  std::optional<double> break_location;
  std::size_t steps = 0;

  double max_relative_energy_drift() const;
  bool apriori_violated() const;
};

struct RunOptions {
  // Evaluate apriori_check every this many steps (and at the last one); 0 disables.
  std::size_t apriori_stride = 0;
  double apriori_tol = 1e-6;
  std::size_t max_steps = 100'000'000;
};

struct RunResult {
  RunRecord record;
  std::vector<CharacteristicTrack> tracks;
  SolutionState final_state;
};

// Advances until t_end or a termination trigger, co-advancing one
// characteristic per entry of track_x0.  Numerical breakdowns are recorded
// in the termination field, never thrown.
RunResult run(const SolutionState& initial, double t_end, const StepControl& ctrl, std::span<const double> track_x0 = {},
              const RunOptions& options = {});

// Once min_slope drops below -onset * sqrt(E0) it never rises by more than
// rel_tol of its magnitude from one step to the next.
bool collapse_is_monotone(const RunRecord& record, double onset = 50.0, double rel_tol = 0.01);

// Number of leading samples whose min_slope >= -factor * sqrt(E0).
std::size_t resolved_prefix(const RunRecord& record, double factor = 100.0);

}  // namespace chlab

#endif  // CHLAB_EVOLUTION_HPP
