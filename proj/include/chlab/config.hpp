// Run configuration: a flat key = value document with dotted sections.
//
//   # comment
//   n = 1024
//   t_end = 0.2
//   step.slope_threshold = 125
//   initial.kind = bump
//   initial.kappa = 16
//   track = auto            # or a comma-separated list of positions
//
// Every key is optional; unknown keys, malformed values and constraint
// violations raise ConfigError naming the offending key.
#ifndef CHLAB_CONFIG_HPP
#define CHLAB_CONFIG_HPP

#include "chlab/dynamics.hpp"
#include "chlab/evolution.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chlab {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class InitialKind { sine, bump, fourier, file };
enum class VMode { zero, equal };

struct InitialSpec {
  InitialKind kind = InitialKind::sine;
  // sine: u0 = amp_u sin(2 pi x + phase_u), v0 likewise
  double amp_u = 0.0;
  double amp_v = 0.0;
  double phase_u = 0.0;
  double phase_v = 0.0;
  // bump: u0 = a exp(kappa (cos 2 pi (x - center) - 1)), v0 = 0 or u0
  double a = 1.0;
  double kappa = 1.0;
  double center = 0.5;
  VMode v_mode = VMode::zero;
  // fourier: f(x) = sum_k cos[k] cos(2 pi k x) + sin[k] sin(2 pi k x)
  std::vector<double> u_cos, u_sin, v_cos, v_sin;
  // file: CSV with header x,u,v and one row per grid node
  std::string path;

  bool operator==(const InitialSpec&) const = default;
};

struct SweepAxis {
  std::string parameter = "kappa";  // a | kappa | center
  double min = 1.0;
  double max = 1.0;
  std::size_t count = 1;
  bool simulate = false;

  bool operator==(const SweepAxis&) const = default;
};

struct RunConfig {
  Index n = 256;
  double t_end = 1.0;
  StepControl step;
  InitialSpec initial;
  bool track_auto = true;
  std::vector<double> track;
  std::string output = "out";
  std::size_t output_stride = 10;
  SweepAxis sweep;

  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

// Every key, numbers with 17 significant digits; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

SolutionState build_initial(const InitialSpec& init, const PeriodicGrid& grid);

std::string_view to_string(InitialKind kind);
std::string_view to_string(VMode mode);

// "%.17g".
std::string format_number(double value);

}  // namespace chlab

#endif  // CHLAB_CONFIG_HPP
