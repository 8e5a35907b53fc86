#include "chlab/config.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

using namespace chlab;
using std::numbers::pi;

namespace {
std::string error_of(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

const char* kFixture = R"(# frozen bump
n = 4096
t_end = 0.2
output = out/fixture
output_stride = 10
track = auto
step.cfl = 0.3
step.dt_max = 1e-3
step.slope_threshold = 125
initial.kind = bump
initial.a = 1
initial.kappa = 16
initial.center = 0.5
initial.v_mode = equal
)";
}  // namespace

TEST_CASE("empty document gives defaults") {
  const RunConfig c = parse_config("");
  CHECK(c == RunConfig{});
  CHECK(c.n == 256);
  CHECK(c.step.cfl == 0.3);
  CHECK(c.step.dt_max == 1e-3);
  CHECK(c.step.dt_min == 1e-9);
  CHECK(c.step.slope_threshold == 1e4);
  CHECK(c.step.dealias);
  CHECK(c.output_stride == 10);
  CHECK(c.track_auto);
  CHECK(parse_config("# only a comment\n\n   \n") == RunConfig{});
}

TEST_CASE("errors name the key") {
  CHECK(error_of("n = 100") == "n: n must be a power of two ≥ 16");
  CHECK(error_of("n = 8").find("power of two") != std::string::npos);
  CHECK(error_of("step.cfll = 0.3").find("step.cfll: unknown key") != std::string::npos);
  CHECK(error_of("t_end = 1\nt_end = 2").find("t_end: duplicate") != std::string::npos);
  CHECK(error_of("t_end = soon").find("t_end") != std::string::npos);
  CHECK(error_of("t_end = -1").find("t_end: must be positive") != std::string::npos);
  CHECK(error_of("initial.kappa = 0").find("initial.kappa") != std::string::npos);
  CHECK(error_of("initial.a = nan").find("initial.a") != std::string::npos);
  CHECK(error_of("initial.a = inf").find("finite") != std::string::npos);
  CHECK(error_of("step.dealias = yes").find("step.dealias") != std::string::npos);
  CHECK(error_of("initial.kind = gauss").find("initial.kind") != std::string::npos);
  CHECK(error_of("step.dt_min = 1e-2").find("step.dt_min") != std::string::npos);
  CHECK(error_of("output_stride = 0").find("output_stride") != std::string::npos);
  CHECK(error_of("just words").find("line 1") != std::string::npos);
  CHECK(error_of("initial.kind = file").find("initial.path") != std::string::npos);
}

TEST_CASE("track list") {
  const auto c = parse_config("track = 0.25, 0.5,0.75");
  CHECK_FALSE(c.track_auto);
  CHECK(c.track == std::vector<double>{0.25, 0.5, 0.75});
  CHECK(parse_config("track = auto").track_auto);
}

TEST_CASE("roundtrip through serialization") {
  const RunConfig c = parse_config(kFixture);
  CHECK(c.n == 4096);
  CHECK(c.initial.v_mode == VMode::equal);
  CHECK(parse_config(serialize_config(c)) == c);

  RunConfig odd;
  odd.t_end = 0.1 + 0.2;
  odd.initial.kind = InitialKind::fourier;
  odd.initial.u_cos = {0.0, 1.0 / 3.0};
  odd.initial.v_sin = {0.0, 0.0, std::exp(-1.0)};
  odd.track_auto = false;
  odd.track = {1.0 / 7.0};
  odd.step.dealias = false;
  odd.sweep.parameter = "a";
  odd.sweep.count = 5;
  odd.sweep.max = 2.5;
  CHECK(parse_config(serialize_config(odd)) == odd);
}

TEST_CASE("numbers keep 17 significant digits") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(1.0) == "1");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("sine initial data") {
  RunConfig c = parse_config("initial.kind = sine\ninitial.amp_u = 1");
  const PeriodicGrid g(64);
  const auto z = build_initial(c.initial, g);
  for (Index j = 0; j < g.size(); ++j) {
    CHECK(z.u[j] == doctest::Approx(std::sin(2 * pi * g.node<double>(j))).epsilon(1e-15));
    CHECK(z.v[j] == 0.0);
  }
  CHECK(z.t == 0.0);
}

TEST_CASE("bump initial data") {
  InitialSpec spec;
  spec.kind = InitialKind::bump;
  spec.a = 1.7;
  spec.kappa = 5;
  spec.v_mode = VMode::equal;
  const PeriodicGrid g(64);
  const auto z = build_initial(spec, g);
  CHECK((z.u.values() == z.v.values()).all());
  CHECK(z.u[32] == 1.7);
  CHECK(z.u.values().maxCoeff() == 1.7);

  spec.v_mode = VMode::zero;
  CHECK(build_initial(spec, g).v.max_abs() == 0.0);

  spec.kappa = std::nan("");
  CHECK_THROWS_AS(build_initial(spec, g), ConfigError);
}

TEST_CASE("fourier initial data") {
  const auto c = parse_config("initial.kind = fourier\ninitial.u_cos = 0.5, 0, 2\ninitial.v_sin = 0, 1");
  const PeriodicGrid g(32);
  const auto z = build_initial(c.initial, g);
  for (Index j = 0; j < g.size(); ++j) {
    const double x = g.node<double>(j);
    CHECK(z.u[j] == doctest::Approx(0.5 + 2 * std::cos(4 * pi * x)).epsilon(1e-14));
    CHECK(z.v[j] == doctest::Approx(std::sin(2 * pi * x)).epsilon(1e-14));
  }
  InitialSpec wide;
  wide.kind = InitialKind::fourier;
  wide.u_cos.assign(17, 1.0);
  CHECK_THROWS_AS(build_initial(wide, g), ConfigError);
}

TEST_CASE("field file initial data") {
  const auto path = std::filesystem::temp_directory_path() / "chlab_field_test.csv";
  {
    std::ofstream out(path);
    out << "x,u,v\n";
    for (int j = 0; j < 16; ++j) out << j / 16.0 << ',' << j << ',' << -j << '\n';
  }
  InitialSpec spec;
  spec.kind = InitialKind::file;
  spec.path = path.string();
  const auto z = build_initial(spec, PeriodicGrid(16));
  CHECK(z.u[5] == 5.0);
  CHECK(z.v[5] == -5.0);
  CHECK_THROWS_AS(build_initial(spec, PeriodicGrid(32)), ConfigError);
  spec.path = (std::filesystem::temp_directory_path() / "chlab_missing.csv").string();
  CHECK_THROWS_AS(build_initial(spec, PeriodicGrid(16)), ConfigError);
  std::filesystem::remove(path);
}
