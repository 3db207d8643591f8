#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "cksvar/error.hpp"
#include "cksvar/lrv.hpp"
#include "cksvar/rng.hpp"
#include "cksvar/simulate.hpp"
#include "doctest.h"

using namespace cksvar;

TEST_CASE("bartlett weights") {
  CHECK(bartlett_kernel(0.0) == 1.0);
  CHECK(bartlett_kernel(0.5) == 0.5);
  CHECK(bartlett_kernel(-0.5) == 0.5);
  CHECK(bartlett_kernel(1.0) == 0.0);
  CHECK(bartlett_kernel(-1.3) == 0.0);
}

TEST_CASE("white-noise differences recover a unit long-run sd") {
  // y = level + random walk, level large enough to stay positive
  Rng rng(64);
  const int n = 100000;
  std::vector<double> y(n);
  double w = 0.0;
  for (int t = 0; t < n; ++t) {
    w += rng.next_normal();
    y[t] = 1e6 + w;
  }
  const LrvEstimate est = lrv_estimate(y);
  CHECK(est.has_plus);
  CHECK_FALSE(est.has_minus);
  CHECK(std::abs(est.omega_plus - 1.0) < 0.03);
  CHECK_THROWS_AS(est.omega(-1), Error);  // minus regime never visited
}

TEST_CASE("constant series has zero long-run sd") {
  std::vector<double> y(200, 3.0);
  const LrvEstimate est = lrv_estimate(y);
  CHECK(est.omega_plus == 0.0);
  try {
    estimate_w0_value(3.0, y.size(), est);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Error::Code::zero_lrv);
  }
}

TEST_CASE("matches a direct kernel estimator when the regime split is vacuous") {
  Rng rng(65);
  const int n = 5000;
  std::vector<double> y(n);
  double w = 0.0;
  for (int t = 0; t < n; ++t) {
    w += rng.next_normal() + 0.4 * std::sin(t * 0.7);
    y[t] = 5000.0 + w;
  }
  const int L = 12;
  LrvSettings settings;
  settings.lags = L;
  const LrvEstimate est = lrv_estimate(y, settings);

  // direct implementation with the same regime-count normalization
  double acc = 0.0;
  for (int l = 0; l <= L; ++l) {
    double g = 0.0;
    for (int t = l + 1; t < n; ++t) g += (y[t] - y[t - 1]) * (y[t - l] - y[t - l - 1]);
    g /= n;
    acc += (l == 0 ? 1.0 : 2.0) * (1.0 - static_cast<double>(l) / L) * g;
  }
  const double direct = std::sqrt(std::max(0.0, acc));
  CHECK(est.omega_plus == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("scale equivariance is exact for power-of-two scalings") {
  Rng rng(66);
  const int n = 3000;
  std::vector<double> y(n), y4(n);
  double w = 0.0;
  for (int t = 0; t < n; ++t) {
    w += rng.next_normal() - 0.001 * t / n;
    y[t] = w + (t % 7 == 0 ? -2.0 : 1.0);
    y4[t] = 4.0 * y[t];
  }
  const LrvEstimate a = lrv_estimate(y);
  const LrvEstimate b = lrv_estimate(y4);
  if (a.has_plus) CHECK(b.omega_plus == 4.0 * a.omega_plus);
  if (a.has_minus) CHECK(b.omega_minus == 4.0 * a.omega_minus);
  if (a.has_plus && a.omega_plus > 0.0) {
    const W0Estimate wa = estimate_w0_value(2.0, n, a);
    const W0Estimate wb = estimate_w0_value(8.0, n, b);
    CHECK(wb.value == wa.value);  // y0 scales with the series
  }
}

TEST_CASE("initialization estimate arithmetic") {
  LrvEstimate est;
  est.has_plus = est.has_minus = true;
  est.omega_plus = 2.0;
  est.omega_minus = 0.5;

  CHECK(estimate_w0_value(0.0, 100, est).value == 0.0);
  const W0Estimate w = estimate_w0_value(10.0, 100, est);
  CHECK(w.value == doctest::Approx(0.5));
  CHECK(w.regime_used == +1);
  const W0Estimate wn = estimate_w0_value(-10.0, 100, est);
  CHECK(wn.value == doctest::Approx(-2.0));
  CHECK(wn.regime_used == -1);
}

TEST_CASE("benchmark paths start at zero, so the estimate is zero") {
  const DesignSpec d = mc_design(McDesign::nonlinear);
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    Rng rng(seed);
    const SimulatedPath sim = simulate_path(d.params, 900, {}, rng);
    std::vector<double> y{0.0};  // the initialization heads the series
    for (int t = 0; t < sim.path.n; ++t) y.push_back(sim.path(t, 0));
    const LrvEstimate est = lrv_estimate(y);
    CHECK(estimate_w0(y, est).value == 0.0);
  }
}

TEST_CASE("short samples are rejected") {
  std::vector<double> y(10, 1.0);
  LrvSettings settings;
  settings.lags = 6;  // needs n >= 14
  try {
    lrv_estimate(y, settings);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Error::Code::too_few_observations);
  }
  CHECK_THROWS_AS(lrv_estimate(y, LrvSettings{0, "parzen"}), Error);
}

TEST_CASE("automatic lag rule") {
  CHECK(default_lag_count(100) == 4);
  CHECK(default_lag_count(1500) == 7);   // floor(4 * 15^(2/9))
  CHECK(default_lag_count(30) >= 1);
}
