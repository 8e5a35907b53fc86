#include "chlab/characteristics.hpp"
#include "chlab/criterion.hpp"
#include "chlab/evolution.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace chlab;
using std::numbers::pi;

namespace {
CharacteristicTrack synthetic(std::vector<double> M, std::vector<double> N, double dt = 0.01) {
  CharacteristicTrack t;
  for (std::size_t i = 0; i < M.size(); ++i) {
    t.times.push_back(dt * i);
    t.q.push_back(0.5);
    t.q_unwrapped.push_back(0.5);
    t.w.push_back(0.5 * (M[i] + N[i]));
    t.wx.push_back(0.5 * (N[i] - M[i]));
    t.M.push_back(M[i]);
    t.N.push_back(N[i]);
    const double mn = M[i] * N[i];
    t.g.push_back(mn < 0 ? std::optional<double>(std::sqrt(-mn)) : std::nullopt);
  }
  t.x0 = 0.5;
  return t;
}
}  // namespace

TEST_CASE("M and N samples") {
  const PeriodicGrid g(64);
  const auto zero = sample_MN(SolutionState(g), 0.3);
  CHECK(zero.M == 0.0);
  CHECK(zero.N == 0.0);

  const SolutionState s(0.0, Field::sample(g, [](double x) { return std::sin(2 * pi * x); }), Field(g));
  const auto m = sample_MN(s, 0.0);
  CHECK(std::abs(m.w) <= 1e-14);
  CHECK(m.M == doctest::Approx(-2 * pi).epsilon(1e-13));
  CHECK(m.N == doctest::Approx(2 * pi).epsilon(1e-13));
}

TEST_CASE("criterion data start with M above and N below sqrt(2) K") {
  const PeriodicGrid g(1024);
  const Field u = Field::sample(g, [](double x) { return std::exp(16 * (std::cos(2 * pi * (x - 0.5)) - 1)); });
  const SolutionState z(0.0, u, u);
  const auto report = evaluate(z);
  REQUIRE(report.satisfied);
  const auto m = sample_MN(z, report.x0);
  CHECK(m.M > std::sqrt(2.0) * report.K);
  CHECK(m.N < -std::sqrt(2.0) * report.K);
}

TEST_CASE("transport along a constant field") {
  const PeriodicGrid g(64);
  const double c = 0.3;
  const SolutionState s(0.0, Field::constant(g, c), Field::constant(g, c));
  const double x0s[] = {0.9, 0.25};
  const auto r = run(s, 1.0, StepControl{}, x0s);
  REQUIRE(r.tracks.size() == 2);
  for (const auto& track : r.tracks) {
    CHECK(track.q_unwrapped[0] == track.x0);
    double worst = 0;
    for (std::size_t i = 0; i < track.size(); ++i) {
      worst = std::max(worst, std::abs(track.q_unwrapped[i] - (track.x0 + 2 * c * track.times[i])));
      CHECK(track.q[i] >= 0.0);
      CHECK(track.q[i] < 1.0);
    }
    CHECK(worst <= 1e-12);
    for (double j : jacobian_series(track)) CHECK(j == doctest::Approx(1.0).epsilon(1e-14));
    // |w| = 2c exceeds sqrt(E0/2) = c here: the displacement bound is not
    // valid for data with nonzero mean.
    CHECK_FALSE(displacement_check(track, r.record.E0));
  }
}

TEST_CASE("zero field keeps characteristics fixed") {
  const PeriodicGrid g(64);
  const double x0s[] = {0.4};
  const auto r = run(SolutionState(g), 0.1, StepControl{}, x0s);
  const auto& track = r.tracks[0];
  for (double q : track.q_unwrapped) CHECK(q == 0.4);
  CHECK(displacement_check(track, 0.0));
  CHECK(jacobian_positivity(track));
  for (double j : jacobian_series(track)) CHECK(j == 1.0);
}

TEST_CASE("g is the square root of -MN") {
  const PeriodicGrid g(256);
  const Field u = Field::sample(g, [](double x) { return 0.5 * std::exp(8 * (std::cos(2 * pi * (x - 0.5)) - 1)); });
  const double x0s[] = {0.55};
  const auto r = run(SolutionState(0.0, u, u), 0.05, StepControl{}, x0s);
  const auto& t = r.tracks[0];
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(t.M[i] == doctest::Approx(t.w[i] - t.wx[i]).epsilon(1e-15));
    CHECK(t.N[i] == doctest::Approx(t.w[i] + t.wx[i]).epsilon(1e-15));
    if (t.g[i]) CHECK(std::abs(*t.g[i] - std::sqrt(-t.M[i] * t.N[i])) <= 1e-12 * *t.g[i]);
  }
}

TEST_CASE("Riccati residual formula on a constant track") {
  const double K = 1.5;
  const auto t = synthetic({4, 4, 4, 4}, {-3, -3, -3, -3});
  const auto r = riccati_residual(t, K);
  REQUIRE(r.g_residual.size() == 2);
  const double g2 = 12.0;
  for (double v : r.g_residual) CHECK(v == doctest::Approx(-(0.5 * g2 - K * K)).epsilon(1e-14));
  for (double v : r.m_residual) CHECK(v == doctest::Approx(-6.0 + K * K).epsilon(1e-14));
  CHECK_FALSE(riccati_check(t, K));
  CHECK_THROWS_AS(riccati_residual(synthetic({4, 4}, {-3, -3}), K), std::invalid_argument);
}

TEST_CASE("monotonicity on synthetic tracks") {
  const double K = 1.0;
  const auto good = synthetic({3, 3.5, 4.2, 5}, {-3, -3.4, -4.1, -5.2});
  CHECK(monotonicity_check(good, K));
  const auto bad_m = synthetic({3, 2.9, 4.2, 5}, {-3, -3.4, -4.1, -5.2});
  CHECK_FALSE(monotonicity_check(bad_m, K));
  // MN = -1.44 > -2 K^2
  const auto weak = synthetic({1.2, 1.3, 1.4, 1.5}, {-1.2, -1.3, -1.4, -1.5});
  CHECK_FALSE(monotonicity_check(weak, K));
  // the limit keeps only the leading samples
  CHECK(monotonicity_check(bad_m, K, 1e-6, 1));
}

TEST_CASE("Jacobian of a breaking track shrinks") {
  auto t = synthetic({3, 3, 3, 3}, {-3, -3, -3, -3});
  t.wx = {-10, -20, -40, -80};
  const auto j = jacobian_series(t);
  CHECK(j[0] == 1.0);
  for (std::size_t i = 1; i < j.size(); ++i) CHECK(j[i] < j[i - 1]);
  CHECK(j[1] == doctest::Approx(std::exp(-0.15)).epsilon(1e-14));
  CHECK(jacobian_positivity(t));
}

TEST_CASE("characteristics converge at fourth order") {
  const PeriodicGrid g(128);
  const Field u = Field::sample(g, [](double x) { return 0.8 * std::exp(3 * (std::cos(2 * pi * (x - 0.5)) - 1)); });
  const SolutionState s(0.0, u, 0.3 * u);
  const double x0s[] = {0.55};
  auto endpoint = [&](double dt) {
    StepControl ctrl;
    ctrl.cfl = 1e9;
    ctrl.dt_max = dt;
    return run(s, 0.2, ctrl, x0s).tracks[0].q_unwrapped.back();
  };
  const double reference = endpoint(2.5e-4);
  const double coarse = std::abs(endpoint(4e-3) - reference);
  const double fine = std::abs(endpoint(2e-3) - reference);
  INFO("q errors " << coarse << " -> " << fine);
  CHECK(coarse / fine >= 12.0);
}

TEST_CASE("Jacobian along the criterion point of a breaking run") {
  const PeriodicGrid g(1024);
  const Field u = Field::sample(g, [](double x) { return std::exp(16 * (std::cos(2 * pi * (x - 0.5)) - 1)); });
  const SolutionState z(0.0, u, u);
  const auto report = evaluate(z);
  REQUIRE(report.satisfied);
  StepControl ctrl;
  ctrl.slope_threshold = 60;
  const double x0s[] = {report.x0};
  const auto r = run(z, 0.2, ctrl, x0s);
  REQUIRE(r.record.termination == Termination::breaking_detected);
  const auto j = jacobian_series(r.tracks[0]);
  CHECK(jacobian_positivity(r.tracks[0]));
  for (std::size_t i = 1; i < j.size(); ++i) CHECK(j[i] < j[i - 1]);
  // detection fires long before q_x gets anywhere near zero
  INFO("final q_x " << j.back());
  CHECK(j.back() < 0.5);
}
