#include "chlab/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace chlab {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(std::string_view key, const std::string& what) {
  throw ConfigError(std::string(key) + ": " + what);
}

double parse_double(std::string_view key, std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) fail(key, "expected a number, got '" + std::string(text) + "'");
  if (!std::isfinite(value)) fail(key, "value must be finite");
  return value;
}

long long parse_integer(std::string_view key, std::string_view text) {
  long long value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) fail(key, "expected an integer, got '" + std::string(text) + "'");
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true") return true;
  if (text == "false") return false;
  fail(key, "expected true or false, got '" + std::string(text) + "'");
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_double(key, trim(text.substr(start, comma - start))));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double positive(std::string_view key, double v) {
  if (!(v > 0.0)) fail(key, "must be positive");
  return v;
}

using Setter = std::function<void(RunConfig&, std::string_view key, std::string_view value)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"n",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         const long long n = parse_integer(k, v);
         if (n < 16 || (n & (n - 1)) != 0) fail(k, "n must be a power of two ≥ 16");
         c.n = static_cast<Index>(n);
       }},
      {"t_end", [](RunConfig& c, std::string_view k, std::string_view v) { c.t_end = positive(k, parse_double(k, v)); }},
      {"output", [](RunConfig& c, std::string_view k, std::string_view v) {
         if (v.empty()) fail(k, "must not be empty");
         c.output = std::string(v);
       }},
      {"output_stride",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         const long long s = parse_integer(k, v);
         if (s <= 0) fail(k, "must be positive");
         c.output_stride = static_cast<std::size_t>(s);
       }},
      {"track",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         if (v == "auto") {
           c.track_auto = true;
           c.track.clear();
           return;
         }
         c.track_auto = false;
         c.track = parse_list(k, v);
         if (c.track.empty()) fail(k, "expected 'auto' or a list of positions");
       }},
      {"step.cfl", [](RunConfig& c, std::string_view k, std::string_view v) { c.step.cfl = positive(k, parse_double(k, v)); }},
      {"step.dt_max",
       [](RunConfig& c, std::string_view k, std::string_view v) { c.step.dt_max = positive(k, parse_double(k, v)); }},
      {"step.dt_min",
       [](RunConfig& c, std::string_view k, std::string_view v) { c.step.dt_min = positive(k, parse_double(k, v)); }},
      {"step.slope_threshold",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         c.step.slope_threshold = positive(k, parse_double(k, v));
       }},
      {"step.dealias", [](RunConfig& c, std::string_view k, std::string_view v) { c.step.dealias = parse_bool(k, v); }},
      {"initial.kind",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         if (v == "sine")
           c.initial.kind = InitialKind::sine;
         else if (v == "bump")
           c.initial.kind = InitialKind::bump;
         else if (v == "fourier")
           c.initial.kind = InitialKind::fourier;
         else if (v == "file")
           c.initial.kind = InitialKind::file;
         else
           fail(k, "expected one of sine, bump, fourier, file");
       }},
      {"initial.amp_u", [](RunConfig& c, std::string_view k, std::string_view v) { c.initial.amp_u = parse_double(k, v); }},
      {"initial.amp_v", [](RunConfig& c, std::string_view k, std::string_view v) { c.initial.amp_v = parse_double(k, v); }},
      {"initial.phase_u",
       [](RunConfig& c, std::string_view k, std::string_view v) { c.initial.phase_u = parse_double(k, v); }},
      {"initial.phase_v",
       [](RunConfig& c, std::string_view k, std::string_view v) { c.initial.phase_v = parse_double(k, v); }},
      {"initial.a", [](RunConfig& c, std::string_view k, std::string_view v) { c.initial.a = parse_double(k, v); }},
      {"initial.kappa",
       [](RunConfig& c, std::string_view k, std::string_view v) { c.initial.kappa = positive(k, parse_double(k, v)); }},
      {"initial.center", [](RunConfig& c, std::string_view k, std::string_view v) { c.initial.center = parse_double(k, v); }},
      {"initial.v_mode",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         if (v == "zero")
           c.initial.v_mode = VMode::zero;
         else if (v == "equal")
           c.initial.v_mode = VMode::equal;
         else
           fail(k, "expected zero or equal");
       }},
      {"initial.u_cos", [](RunConfig& c, std::string_view k, std::string_view v) { c.initial.u_cos = parse_list(k, v); }},
      {"initial.u_sin", [](RunConfig& c, std::string_view k, std::string_view v) { c.initial.u_sin = parse_list(k, v); }},
      {"initial.v_cos", [](RunConfig& c, std::string_view k, std::string_view v) { c.initial.v_cos = parse_list(k, v); }},
      {"initial.v_sin", [](RunConfig& c, std::string_view k, std::string_view v) { c.initial.v_sin = parse_list(k, v); }},
      {"initial.path", [](RunConfig& c, std::string_view, std::string_view v) { c.initial.path = std::string(v); }},
      {"sweep.parameter",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         if (v != "a" && v != "kappa" && v != "center") fail(k, "expected a, kappa or center");
         c.sweep.parameter = std::string(v);
       }},
      {"sweep.min", [](RunConfig& c, std::string_view k, std::string_view v) { c.sweep.min = parse_double(k, v); }},
      {"sweep.max", [](RunConfig& c, std::string_view k, std::string_view v) { c.sweep.max = parse_double(k, v); }},
      {"sweep.count",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         const long long n = parse_integer(k, v);
         if (n <= 0) fail(k, "must be positive");
         c.sweep.count = static_cast<std::size_t>(n);
       }},
      {"sweep.simulate", [](RunConfig& c, std::string_view k, std::string_view v) { c.sweep.simulate = parse_bool(k, v); }},
  };
  return table;
}

void validate(const RunConfig& c) {
  if (c.step.dt_min > c.step.dt_max) fail("step.dt_min", "must not exceed step.dt_max");
  if (c.sweep.count > 1 && c.sweep.parameter == "kappa" && !(c.sweep.min > 0.0))
    fail("sweep.min", "kappa must be positive");
  if (c.initial.kind == InitialKind::file && c.initial.path.empty()) fail("initial.path", "required for kind = file");
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_number(values[i]);
  }
  return out;
}

}  // namespace

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) fail(key, "unknown key");
    if (!seen.insert(std::string(key)).second) fail(key, "duplicate key");
    it->second(config, key, value);
  }
  validate(config);
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open configuration");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "n = " << c.n << '\n';
  out << "t_end = " << format_number(c.t_end) << '\n';
  out << "output = " << c.output << '\n';
  out << "output_stride = " << c.output_stride << '\n';
  out << "track = " << (c.track_auto ? std::string("auto") : join(c.track)) << '\n';
  out << "step.cfl = " << format_number(c.step.cfl) << '\n';
  out << "step.dt_max = " << format_number(c.step.dt_max) << '\n';
  out << "step.dt_min = " << format_number(c.step.dt_min) << '\n';
  out << "step.slope_threshold = " << format_number(c.step.slope_threshold) << '\n';
  out << "step.dealias = " << (c.step.dealias ? "true" : "false") << '\n';
  const auto& i = c.initial;
  out << "initial.kind = " << to_string(i.kind) << '\n';
  out << "initial.amp_u = " << format_number(i.amp_u) << '\n';
  out << "initial.amp_v = " << format_number(i.amp_v) << '\n';
  out << "initial.phase_u = " << format_number(i.phase_u) << '\n';
  out << "initial.phase_v = " << format_number(i.phase_v) << '\n';
  out << "initial.a = " << format_number(i.a) << '\n';
  out << "initial.kappa = " << format_number(i.kappa) << '\n';
  out << "initial.center = " << format_number(i.center) << '\n';
  out << "initial.v_mode = " << to_string(i.v_mode) << '\n';
  out << "initial.u_cos = " << join(i.u_cos) << '\n';
  out << "initial.u_sin = " << join(i.u_sin) << '\n';
  out << "initial.v_cos = " << join(i.v_cos) << '\n';
  out << "initial.v_sin = " << join(i.v_sin) << '\n';
  if (!i.path.empty()) out << "initial.path = " << i.path << '\n';
  out << "sweep.parameter = " << c.sweep.parameter << '\n';
  out << "sweep.min = " << format_number(c.sweep.min) << '\n';
  out << "sweep.max = " << format_number(c.sweep.max) << '\n';
  out << "sweep.count = " << c.sweep.count << '\n';
  out << "sweep.simulate = " << (c.sweep.simulate ? "true" : "false") << '\n';
  return out.str();
}

std::string_view to_string(InitialKind kind) {
  switch (kind) {
    case InitialKind::sine:
      return "sine";
    case InitialKind::bump:
      return "bump";
    case InitialKind::fourier:
      return "fourier";
    case InitialKind::file:
      return "file";
  }
  return "sine";
}

std::string_view to_string(VMode mode) { return mode == VMode::equal ? "equal" : "zero"; }

namespace {

Field fourier_series(const PeriodicGrid& grid, const std::vector<double>& cos_c, const std::vector<double>& sin_c,
                     std::string_view key) {
  const std::size_t modes = std::max(cos_c.size(), sin_c.size());
  if (modes > static_cast<std::size_t>(grid.size() / 2)) fail(key, "more modes than the grid resolves");
  return Field::sample(grid, [&](double x) {
    double f = 0.0;
    for (std::size_t k = 0; k < cos_c.size(); ++k) f += cos_c[k] * std::cos(2.0 * std::numbers::pi * k * x);
    for (std::size_t k = 0; k < sin_c.size(); ++k) f += sin_c[k] * std::sin(2.0 * std::numbers::pi * k * x);
    return f;
  });
}

SolutionState read_field_file(const std::string& path, const PeriodicGrid& grid) {
  std::ifstream in(path);
  if (!in) fail("initial.path", "cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || trim(line) != "x,u,v") fail("initial.path", "expected header 'x,u,v'");
  Field u(grid), v(grid);
  Index row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    if (row >= grid.size()) fail("initial.path", "more rows than grid nodes");
    std::string_view rest = line;
    double cols[3];
    for (int c = 0; c < 3; ++c) {
      const auto comma = rest.find(',');
      if ((comma == std::string_view::npos) != (c == 2)) fail("initial.path", "row " + std::to_string(row + 1) + ": expected 3 columns");
      cols[c] = parse_double("initial.path", trim(rest.substr(0, comma)));
      if (comma != std::string_view::npos) rest = rest.substr(comma + 1);
    }
    u[row] = cols[1];
    v[row] = cols[2];
    ++row;
  }
  if (row != grid.size())
    fail("initial.path", "expected " + std::to_string(grid.size()) + " rows, got " + std::to_string(row));
  return SolutionState(0.0, std::move(u), std::move(v));
}

}  // namespace

SolutionState build_initial(const InitialSpec& init, const PeriodicGrid& grid) {
  using std::numbers::pi;
  for (double p : {init.amp_u, init.amp_v, init.phase_u, init.phase_v, init.a, init.kappa, init.center})
    if (!std::isfinite(p)) throw ConfigError("initial: parameters must be finite");
  switch (init.kind) {
    case InitialKind::sine: {
      auto u = Field::sample(grid, [&](double x) { return init.amp_u * std::sin(2.0 * pi * x + init.phase_u); });
      auto v = Field::sample(grid, [&](double x) { return init.amp_v * std::sin(2.0 * pi * x + init.phase_v); });
      return SolutionState(0.0, std::move(u), std::move(v));
    }
    case InitialKind::bump: {
      if (!(init.kappa > 0.0)) fail("initial.kappa", "must be positive");
      auto u = Field::sample(grid, [&](double x) {
        return init.a * std::exp(init.kappa * (std::cos(2.0 * pi * (x - init.center)) - 1.0));
      });
      Field v = init.v_mode == VMode::equal ? u : Field(grid);
      return SolutionState(0.0, std::move(u), std::move(v));
    }
    case InitialKind::fourier:
      return SolutionState(0.0, fourier_series(grid, init.u_cos, init.u_sin, "initial.u_cos"),
                           fourier_series(grid, init.v_cos, init.v_sin, "initial.v_cos"));
    case InitialKind::file:
      return read_field_file(init.path, grid);
  }
  throw ConfigError("initial.kind: unsupported");
}

}  // namespace chlab
