#include "chlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace chlab {
namespace {

// Numbers go through format_number so every file carries 17 significant
// digits; nlohmann::json would print the shortest round-trip form instead.
std::string json_number(double x) { return std::isfinite(x) ? format_number(x) : "null"; }
std::string json_number(const std::optional<double>& x) { return x ? json_number(*x) : "null"; }
std::string json_bool(bool b) { return b ? "true" : "false"; }
std::string json_bool(const std::optional<bool>& b) { return b ? json_bool(*b) : "null"; }
std::string json_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

class JsonObject {
 public:
  explicit JsonObject(int depth = 0) : depth_(depth) {}
  int child_depth() const { return depth_ + 1; }

  JsonObject& add(std::string_view key, std::string raw) {
    fields_.emplace_back(json_string(key), std::move(raw));
    return *this;
  }
  JsonObject& add(std::string_view key, const JsonObject& child) { return add(key, child.str()); }
  JsonObject& add(std::string_view key, const std::vector<JsonObject>& items) {
    if (items.empty()) return add(key, "[]");
    const std::string pad(2 * (depth_ + 1), ' ');
    std::string raw = "[\n";
    for (std::size_t i = 0; i < items.size(); ++i) {
      raw += pad + "  " + items[i].str();
      raw += i + 1 < items.size() ? ",\n" : "\n";
    }
    return add(key, raw + pad + "]");
  }

  std::string str() const {
    if (fields_.empty()) return "{}";
    const std::string pad(2 * depth_, ' ');
    std::string out = "{\n";
    for (std::size_t i = 0; i < fields_.size(); ++i) {
      out += pad + "  " + fields_[i].first + ": " + fields_[i].second;
      out += i + 1 < fields_.size() ? ",\n" : "\n";
    }
    return out + pad + "}";
  }

 private:
  int depth_;
  std::vector<std::pair<std::string, std::string>> fields_;
};

JsonObject interval_json(const BlowupInterval& iv, int depth) {
  JsonObject o(depth);
  o.add("lo", json_number(iv.lo)).add("hi", json_number(iv.hi));
  o.add("lo_wrapped", json_number(iv.lo_wrapped)).add("hi_wrapped", json_number(iv.hi_wrapped));
  return o;
}

JsonObject criterion_json(const CriterionReport& r, int depth) {
  JsonObject o(depth);
  o.add("satisfied", json_bool(r.satisfied));
  o.add("x0", json_number(r.x0));
  o.add("margin", json_number(r.margin));
  o.add("E0", json_number(r.E0));
  o.add("K", json_number(r.K));
  o.add("g0", json_number(r.g0));
  o.add("tstar", json_number(r.tstar));
  if (r.interval)
    o.add("interval", interval_json(*r.interval, o.child_depth()));
  else
    o.add("interval", "null");
  return o;
}

std::string csv_number(double x) { return format_number(x); }
std::string csv_number(const std::optional<double>& x) { return x ? format_number(*x) : std::string(); }

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void prepare_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
}

std::string run_csv(const RunRecord& record, const CharacteristicTrack* track, std::size_t stride) {
  std::ostringstream out;
  write_run_csv(out, record, track, stride);
  return out.str();
}

}  // namespace

SimulationOutcome simulate(const RunConfig& config) {
  const PeriodicGrid grid(config.n);
  const SolutionState z0 = build_initial(config.initial, grid);

  SimulationOutcome o{config, evaluate(z0), RunResult{RunRecord{}, {}, z0}, {}, 0, true, true, {}, {}};
  std::vector<double> x0s = config.track_auto ? std::vector<double>{o.criterion.x0} : config.track;

  RunOptions options;
  options.apriori_stride = config.output_stride;
  o.result = run(z0, config.t_end, config.step, x0s, options);
  const RunRecord& record = o.result.record;

  o.resolved_samples = resolved_prefix(record);
  o.apriori_ok = !record.apriori_violated();
  o.collapse_monotone = collapse_is_monotone(record);

  const auto spectrum = to_spectrum(z0.w());
  for (const auto& track : o.result.tracks) {
    TrackVerdict v;
    v.x0 = track.x0;
    v.displacement_ok = displacement_check(track, record.E0);
    v.jacobian_positive = jacobian_positivity(track);
    if (criterion_margin(spectrum, track.x0, o.criterion.K) > 0.0) {
      v.monotonicity_ok = monotonicity_check(track, o.criterion.K, 1e-6, o.resolved_samples);
      try {
        v.riccati_ok = riccati_check(track, o.criterion.K, 1e-3, o.resolved_samples);
      } catch (const std::invalid_argument&) {
        v.riccati_ok = false;
      }
    }
    o.verdicts.push_back(v);
  }

  if (record.termination == Termination::breaking_detected && o.criterion.tstar) {
    o.break_before_tstar = *record.break_time <= *o.criterion.tstar;
    o.break_in_interval = o.criterion.interval->contains(*record.break_location);
  }
  return o;
}

void write_run_csv(std::ostream& out, const RunRecord& record, const CharacteristicTrack* track,
                   std::size_t output_stride) {
  if (output_stride == 0) throw std::invalid_argument("output_stride must be positive");
  out << kRunCsvHeader << '\n';
  const std::size_t count = record.samples.size();
  for (std::size_t i = 0; i < count; ++i) {
    const StepSample& s = record.samples[i];
    if (s.step % output_stride != 0 && i + 1 != count) continue;
    out << csv_number(s.t) << ',' << csv_number(s.energy) << ',' << csv_number(s.min_slope) << ','
        << csv_number(s.min_slope_x) << ',';
    if (track && i < track->size()) {
      out << csv_number(track->q[i]) << ',' << csv_number(track->w[i]) << ',' << csv_number(track->wx[i]) << ','
          << csv_number(track->M[i]) << ',' << csv_number(track->N[i]) << ',' << csv_number(track->g[i]) << ',';
    } else {
      out << ",,,,,,";
    }
    out << csv_number(s.dt) << '\n';
  }
}

std::string summary_json(const SimulationOutcome& o) {
  const RunRecord& record = o.result.record;
  const double drift = record.max_relative_energy_drift();
  JsonObject root;
  root.add("termination", json_string(to_string(record.termination)));
  root.add("t_final", json_number(o.result.final_state.t));
  root.add("steps", std::to_string(record.steps));
  root.add("break_time", json_number(record.break_time));
  root.add("break_location", json_number(record.break_location));
  root.add("E0", json_number(record.E0));
  root.add("max_relative_energy_drift", json_number(drift));
  root.add("criterion", criterion_json(o.criterion, root.child_depth()));
  root.add("tstar", json_number(o.criterion.tstar));
  if (o.criterion.interval)
    root.add("interval", interval_json(*o.criterion.interval, root.child_depth()));
  else
    root.add("interval", "null");
  root.add("break_before_tstar", json_bool(o.break_before_tstar));
  root.add("break_in_interval", json_bool(o.break_in_interval));

  JsonObject flags(root.child_depth());
  flags.add("energy_drift_ok", json_bool(drift <= 1e-8));
  flags.add("apriori_ok", json_bool(o.apriori_ok));
  flags.add("collapse_monotone", json_bool(o.collapse_monotone));
  flags.add("resolved_samples", std::to_string(o.resolved_samples));
  root.add("flags", flags);

  std::vector<JsonObject> tracks;
  for (const auto& v : o.verdicts) {
    JsonObject t(root.child_depth() + 1);
    t.add("x0", json_number(v.x0));
    t.add("displacement_ok", json_bool(v.displacement_ok));
    t.add("jacobian_positive", json_bool(v.jacobian_positive));
    t.add("monotonicity_ok", json_bool(v.monotonicity_ok));
    t.add("riccati_ok", json_bool(v.riccati_ok));
    tracks.push_back(t);
  }
  root.add("tracks", tracks);
  return root.str() + "\n";
}

std::string report_json(const CriterionReport& report) { return criterion_json(report, 0).str() + "\n"; }

std::vector<SweepRow> sweep(const RunConfig& config) {
  if (config.initial.kind != InitialKind::bump) throw ConfigError("sweep: initial.kind must be bump");
  const SweepAxis& axis = config.sweep;
  std::vector<SweepRow> rows(axis.count);
  for (std::size_t i = 0; i < axis.count; ++i) {
    const double value =
        axis.count == 1 ? axis.min : axis.min + (axis.max - axis.min) * static_cast<double>(i) / (axis.count - 1);
    rows[i].value = value;
    rows[i].initial = config.initial;
    if (axis.parameter == "a")
      rows[i].initial.a = value;
    else if (axis.parameter == "kappa")
      rows[i].initial.kappa = value;
    else
      rows[i].initial.center = value;
  }

  auto member = [&config](SweepRow row) {
    const PeriodicGrid grid(config.n);
    const SolutionState z0 = build_initial(row.initial, grid);
    row.criterion = evaluate(z0);
    if (config.sweep.simulate) {
      const RunResult r = run(z0, config.t_end, config.step);
      row.termination = r.record.termination;
      row.break_time = r.record.break_time;
    }
    return row;
  };

  const std::size_t workers = config.sweep.simulate ? std::max(1u, std::thread::hardware_concurrency()) : 1;
  for (std::size_t begin = 0; begin < rows.size(); begin += workers) {
    const std::size_t end = std::min(rows.size(), begin + workers);
    if (end - begin == 1) {
      rows[begin] = member(rows[begin]);
      continue;
    }
    std::vector<std::future<SweepRow>> jobs;
    for (std::size_t i = begin; i < end; ++i) jobs.push_back(std::async(std::launch::async, member, rows[i]));
    for (std::size_t i = begin; i < end; ++i) rows[i] = jobs[i - begin].get();
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "value,a,kappa,center,v_mode,E0,K,x0,margin,satisfied,g0,tstar,termination,break_time,break_over_tstar\n";
  for (const auto& r : rows) {
    const auto& c = r.criterion;
    std::optional<double> ratio;
    if (r.break_time && c.tstar) ratio = *r.break_time / *c.tstar;
    out << csv_number(r.value) << ',' << csv_number(r.initial.a) << ',' << csv_number(r.initial.kappa) << ','
        << csv_number(r.initial.center) << ',' << to_string(r.initial.v_mode) << ',' << csv_number(c.E0) << ','
        << csv_number(c.K) << ',' << csv_number(c.x0) << ',' << csv_number(c.margin) << ','
        << (c.satisfied ? "true" : "false") << ',' << csv_number(c.g0) << ',' << csv_number(c.tstar) << ','
        << (r.termination ? std::string(to_string(*r.termination)) : std::string()) << ','
        << csv_number(r.break_time) << ',' << csv_number(ratio) << '\n';
  }
}

int cmd_simulate(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log) {
  const SimulationOutcome o = simulate(config);
  prepare_dir(out_dir);
  const auto& tracks = o.result.tracks;
  write_file(out_dir / "run.csv", run_csv(o.result.record, tracks.empty() ? nullptr : &tracks[0], config.output_stride));
  for (std::size_t i = 1; i < tracks.size(); ++i)
    write_file(out_dir / ("track_" + std::to_string(i) + ".csv"),
               run_csv(o.result.record, &tracks[i], config.output_stride));
  const std::string summary = summary_json(o);
  write_file(out_dir / "summary.json", summary);
  log << summary;
  return 0;
}

int cmd_criterion(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log) {
  const PeriodicGrid grid(config.n);
  const std::string report = report_json(evaluate(build_initial(config.initial, grid)));
  prepare_dir(out_dir);
  write_file(out_dir / "report.json", report);
  log << report;
  return 0;
}

int cmd_sweep(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log) {
  std::ostringstream table;
  write_sweep_csv(table, sweep(config));
  prepare_dir(out_dir);
  write_file(out_dir / "sweep.csv", table.str());
  log << table.str();
  return 0;
}

}  // namespace chlab
