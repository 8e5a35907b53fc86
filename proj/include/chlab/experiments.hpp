// Experiment drivers behind the command-line subcommands and their file
// formats (run.csv, summary.json, report.json, sweep.csv).
#ifndef CHLAB_EXPERIMENTS_HPP
#define CHLAB_EXPERIMENTS_HPP

#include "chlab/config.hpp"
#include "chlab/criterion.hpp"
#include "chlab/evolution.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace chlab {

inline constexpr const char* kRunCsvHeader = "t,E,min_slope,min_slope_x,q,w_at_q,wx_at_q,M,N,g,dt";

struct TrackVerdict {
  double x0 = 0.0;
  bool displacement_ok = false;
  bool jacobian_positive = false;
  // Only meaningful when the criterion holds at x0; empty otherwise.
  std::optional<bool> monotonicity_ok;
  std::optional<bool> riccati_ok;
};

struct SimulationOutcome {
  RunConfig config;
  CriterionReport criterion;
  RunResult result;
  std::vector<TrackVerdict> verdicts;
  std::size_t resolved_samples = 0;  // samples with min_slope >= -100 sqrt(E0)
  bool apriori_ok = true;
  bool collapse_monotone = true;
  std::optional<bool> break_before_tstar;
  std::optional<bool> break_in_interval;
};

// Criterion, then the run with characteristic tracking and all diagnostics.
SimulationOutcome simulate(const RunConfig& config);

// Rows at every output_stride-th step plus the last one.  Track columns
// come from `track` when given, else are left empty.
void write_run_csv(std::ostream& out, const RunRecord& record, const CharacteristicTrack* track,
                   std::size_t output_stride);

std::string summary_json(const SimulationOutcome& outcome);
std::string report_json(const CriterionReport& report);

struct SweepRow {
  double value = 0.0;  // swept parameter
  InitialSpec initial;
  CriterionReport criterion;
  std::optional<Termination> termination;
  std::optional<double> break_time;
};

// Members in axis order; family members run concurrently when simulated.
std::vector<SweepRow> sweep(const RunConfig& config);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

// Subcommands.  Each writes into `out_dir` and echoes a short report to `log`.
int cmd_simulate(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_criterion(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_sweep(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log);

struct SelftestOptions {
  std::uint64_t seed = 20240917;
  double kernel_stiffness = 1.0;  // != 1 corrupts the Helmholtz kernel
};

// Invariant suite at n = 64 and n = 256.  Returns the number of failed checks.
int cmd_selftest(const SelftestOptions& options, std::ostream& log);

}  // namespace chlab

#endif  // CHLAB_EXPERIMENTS_HPP
