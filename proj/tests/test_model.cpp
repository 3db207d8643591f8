#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "cksvar/coint.hpp"
#include "cksvar/error.hpp"
#include "cksvar/model.hpp"
#include "cksvar/ranktest.hpp"
#include "cksvar/simulate.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace cksvar;

namespace {

CksvarParams scalar_params(double phi_plus, double phi_minus) {
  CksvarParams p;
  p.p = 1;
  p.k = 0;
  p.phi0_plus = Mat(1, 1, {phi_plus});
  p.phi0_minus = Mat(1, 1, {phi_minus});
  p.Phi0_x = Mat(1, 0);
  p.c = Mat(1, 1);
  p.Sigma_u = Mat::identity(1);
  return p;
}

// structural params whose canonical form is `target`: Phi_i = Q^-1 Phi~_i P^-1
CksvarParams detransform(const CksvarParams& target, const Mat& q_inv, const Mat& p_inv) {
  CksvarParams out = target;
  auto back = [&](const Mat& m) { return q_inv * m * p_inv; };
  const Mat phi0 = back(target.Phi0());
  out.phi0_plus = phi0.col(0);
  out.phi0_minus = phi0.col(1);
  out.Phi0_x = phi0.block(0, 2, target.p, target.p - 1);
  for (int i = 1; i <= target.k; ++i) {
    const Mat phii = back(target.Phi_lag(i));
    out.lag_phi_plus[i - 1] = phii.col(0);
    out.lag_phi_minus[i - 1] = phii.col(1);
    out.lag_Phi_x[i - 1] = phii.block(0, 2, target.p, target.p - 1);
  }
  out.c = q_inv * target.c;
  out.Sigma_u = q_inv * target.Sigma_u * transpose(q_inv);
  return out;
}

// canonical p=2, k=2 fixture with Pi^{+-} = alpha beta^{+-}' and a lagged
// difference block
CksvarParams k2_params(double beta_y_minus) {
  const Mat alpha = Mat::col_vec({0.5, 0.1});
  const Mat beta_star_t(1, 3, {-1.0, beta_y_minus, 1.0});
  const Mat gamma1(2, 3, {0.1, 0.05, 0.0, 0.0, 0.05, 0.1});
  CksvarParams m;
  m.p = 2;
  m.k = 2;
  m.phi0_plus = Mat::col_vec({1.0, 0.0});
  m.phi0_minus = Mat::col_vec({1.0, 0.0});
  m.Phi0_x = Mat(2, 1, {0.0, 1.0});
  const Mat phi1 = canonical_selector(2) + alpha * beta_star_t + gamma1;
  const Mat phi2 = -1.0 * gamma1;
  m.lag_phi_plus = {phi1.col(0), phi2.col(0)};
  m.lag_phi_minus = {phi1.col(1), phi2.col(1)};
  m.lag_Phi_x = {phi1.block(0, 2, 2, 1), phi2.block(0, 2, 2, 1)};
  m.c = 2.0 * alpha;
  m.Sigma_u = Mat::identity(2);
  return m;
}

}  // namespace

TEST_CASE("coherency holds for the canonical selector") {
  CksvarParams p = mc_design(McDesign::linear).params;
  const CoherencyDiagnostics d = check_coherency(p);
  CHECK(d.ok);
  CHECK(d.schur_plus == doctest::Approx(1.0));
  CHECK(d.schur_minus == doctest::Approx(1.0));
}

TEST_CASE("scalar coherency sign checks") {
  CHECK(check_coherency(scalar_params(2.0, 1.0)).ok);
  const CoherencyDiagnostics bad = check_coherency(scalar_params(2.0, -1.0));
  CHECK_FALSE(bad.ok);
  CHECK(bad.det_plus == doctest::Approx(2.0));
  CHECK(bad.det_minus == doctest::Approx(-1.0));
}

TEST_CASE("to_canonical is the identity on canonical parameters") {
  const CksvarParams p = mc_design(McDesign::nonlinear).params;
  const CanonicalForm cf = to_canonical(p);
  CHECK(max_abs(cf.P_inv - Mat::identity(3)) <= 1e-12);
  CHECK(max_abs(cf.Q - Mat::identity(2)) <= 1e-12);
  CHECK(max_abs(cf.params_tilde.Phi0() - p.Phi0()) <= 1e-12);
  CHECK(max_abs(cf.params_tilde.Phi_lag(1) - p.Phi_lag(1)) <= 1e-12);

  // idempotence: canonicalizing the canonical form changes nothing
  const CanonicalForm cf2 = to_canonical(cf.params_tilde);
  CHECK(max_abs(cf2.params_tilde.Phi_lag(1) - cf.params_tilde.Phi_lag(1)) <= 1e-10);
  CHECK(max_abs(cf2.params_tilde.c - cf.params_tilde.c) <= 1e-10);
}

TEST_CASE("p=2 k=1 canonicalization against direct matrix algebra") {
  // Phi0 = [[1, 1, 1], [0.3, -0.2, 2]]: phi0_yx = 1, Phi0_xx = 2
  CksvarParams p;
  p.p = 2;
  p.k = 1;
  p.phi0_plus = Mat::col_vec({1.0, 0.3});
  p.phi0_minus = Mat::col_vec({1.0, -0.2});
  p.Phi0_x = Mat(2, 1, {1.0, 2.0});
  p.lag_phi_plus = {Mat::col_vec({0.4, 0.1})};
  p.lag_phi_minus = {Mat::col_vec({0.2, 0.0})};
  p.lag_Phi_x = {Mat(2, 1, {0.0, 0.5})};
  p.c = Mat::col_vec({0.1, -0.3});
  p.Sigma_u = Mat(2, 2, {1.0, 0.2, 0.2, 0.5});

  const CanonicalForm cf = to_canonical(p);
  // Schur complements by hand: 1 - 1 * (1/2) * phi0_xy
  const double sp = 1.0 - 0.5 * 0.3;
  const double sm = 1.0 - 0.5 * (-0.2);
  CHECK(cf.P_inv(0, 0) == doctest::Approx(sp));
  CHECK(cf.P_inv(1, 1) == doctest::Approx(sm));
  CHECK(cf.P_inv(2, 0) == doctest::Approx(0.3));
  CHECK(cf.P_inv(2, 1) == doctest::Approx(-0.2));
  CHECK(cf.P_inv(2, 2) == doctest::Approx(2.0));
  CHECK(cf.Q(0, 1) == doctest::Approx(-0.5));
  CHECK(max_abs(cf.params_tilde.Phi0() - canonical_selector(2)) <= 1e-10);
  // lag polynomial transforms as Q Phi_1 P
  CHECK(max_abs(cf.params_tilde.Phi_lag(1) - cf.Q * p.Phi_lag(1) * cf.P) <= 1e-12);
}

TEST_CASE("canonical variables preserve the regime sign on simulated paths") {
  Rng seed_rng(404);
  int designs_checked = 0;
  while (designs_checked < 20) {
    // random coherent structural form around the nonlinear benchmark
    const CksvarParams canon = mc_design(McDesign::nonlinear).params;
    Mat q_inv = Mat::identity(2);
    Mat p_inv = Mat::identity(3);
    q_inv(0, 1) = 2.0 * seed_rng.next_uniform() - 1.0;
    q_inv(1, 0) = 2.0 * seed_rng.next_uniform() - 1.0;
    if (std::abs(det(q_inv)) < 0.2) continue;
    const double s_plus = 0.3 + 2.0 * seed_rng.next_uniform();
    const double s_minus = 0.3 + 2.0 * seed_rng.next_uniform();
    p_inv(0, 0) = s_plus;
    p_inv(1, 1) = s_minus;
    p_inv(2, 0) = 2.0 * seed_rng.next_uniform() - 1.0;
    p_inv(2, 1) = 2.0 * seed_rng.next_uniform() - 1.0;
    p_inv(2, 2) = 1.0 + seed_rng.next_uniform();
    const CksvarParams structural =
        detransform(canon, oracle::gauss_jordan_inverse(q_inv), p_inv);
    if (!check_coherency(structural).ok) continue;
    ++designs_checked;

    const CanonicalForm cf = to_canonical(structural);
    Rng rng(seed_rng.next_u64());
    const SimulatedPath sim = simulate_path(structural, 300, {}, rng);
    // z~* = P^-1 z*: the canonical first series has the sign of the original
    for (int t = 0; t < sim.path.n; ++t) {
      const double y = sim.path(t, 0);
      Mat zstar(3, 1);
      if (y >= 0.0)
        zstar(0, 0) = y;
      else
        zstar(1, 0) = y;
      zstar(2, 0) = sim.path(t, 1);
      const Mat tilde = cf.P_inv * zstar;
      const double y_tilde = tilde(0, 0) + tilde(1, 0);
      CHECK(((y >= 0.0 && y_tilde >= 0.0) || (y < 0.0 && y_tilde < 0.0)));
    }
  }
}

TEST_CASE("round-trip through a non-canonical k=2 structural form") {
  // the de-transform must use matrices of the recipe's shape: Q^-1 unit upper
  // triangular in the first row, P^-1 with the split-diagonal block layout
  const CksvarParams canon = k2_params(-0.5);
  const Mat q0_inv(2, 2, {1.0, 0.4, 0.0, 1.0});
  const Mat p0_inv(3, 3, {1.7, 0, 0, 0, 0.6, 0, 0.2, -0.1, 1.5});
  const CksvarParams structural = detransform(canon, q0_inv, p0_inv);
  REQUIRE(check_coherency(structural).ok);
  const CanonicalForm cf = to_canonical(structural);
  CHECK(max_abs(cf.P_inv - p0_inv) <= 1e-12);
  for (int i = 1; i <= 2; ++i)
    CHECK(max_abs(cf.params_tilde.Phi_lag(i) - canon.Phi_lag(i)) <= 1e-9);
  CHECK(max_abs(cf.params_tilde.c - canon.c) <= 1e-9);
}

TEST_CASE("univariate models canonicalize through the same recipe") {
  CksvarParams p = scalar_params(2.0, 0.5);
  p.k = 1;
  p.lag_phi_plus = {Mat(1, 1, {0.8})};
  p.lag_phi_minus = {Mat(1, 1, {0.1})};
  p.lag_Phi_x = {Mat(1, 0)};
  const CanonicalForm cf = to_canonical(p);
  CHECK(max_abs(cf.params_tilde.Phi0() - canonical_selector(1)) <= 1e-12);
  CHECK(cf.P_inv(0, 0) == doctest::Approx(2.0));
  CHECK(cf.P_inv(1, 1) == doctest::Approx(0.5));
  // scalar lag blocks rescale by the split diagonal: phi~ = phi / phi0
  CHECK(cf.params_tilde.lag_phi_plus[0](0, 0) == doctest::Approx(0.4));
  CHECK(cf.params_tilde.lag_phi_minus[0](0, 0) == doctest::Approx(0.2));
}

TEST_CASE("to_canonical rejects incoherent parameters") {
  CksvarParams bad = scalar_params(2.0, -1.0);
  try {
    to_canonical(bad);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Error::Code::coherency_violated);
  }
}

TEST_CASE("companion blocks reduce to scalars for the benchmark designs") {
  const DesignSpec nonlinear = mc_design(McDesign::nonlinear);
  const auto [a_plus, a_minus] = build_companion(nonlinear.coint, nonlinear.params);
  REQUIRE(a_plus.rows == 1);
  CHECK(a_plus(0, 0) == doctest::Approx(0.6).epsilon(1e-10));   // 1 + beta+' alpha
  CHECK(a_minus(0, 0) == doctest::Approx(0.85).epsilon(1e-10));  // 1 + beta-' alpha

  const DesignSpec linear = mc_design(McDesign::linear);
  const auto [l_plus, l_minus] = build_companion(linear.coint, linear.params);
  CHECK(l_plus(0, 0) == doctest::Approx(0.6).epsilon(1e-10));
  CHECK(l_minus(0, 0) == doctest::Approx(0.6).epsilon(1e-10));
}

TEST_CASE("zero adjustment gives identity companions") {
  DesignSpec d = mc_design(McDesign::linear);
  CointCaseTwoSpec spec = d.coint;
  spec.alpha = Mat(2, 1);  // alpha = 0
  const auto [cp, cm] = build_companion(spec, d.params);
  CHECK(max_abs(cp - Mat::identity(1)) == 0.0);
  CHECK(max_abs(cm - Mat::identity(1)) == 0.0);
}

TEST_CASE("jsr bracket on singletons and scalar sets") {
  const JsrBracket id = jsr_bracket({Mat::identity(2)}, 3);
  CHECK(id.lower == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(id.upper == doctest::Approx(1.0).epsilon(1e-8));

  const JsrBracket sc = jsr_bracket({Mat(1, 1, {0.6}), Mat(1, 1, {0.85})}, 6);
  CHECK(sc.lower == doctest::Approx(0.85).epsilon(1e-12));
  CHECK(sc.upper == doctest::Approx(0.85).epsilon(1e-12));
}

TEST_CASE("jsr bracket against depth-4 enumeration for a nilpotent pair") {
  const Mat a(2, 2, {0.9, 0, 0, 0});
  const Mat b(2, 2, {0, 0.9, 0, 0});
  const JsrBracket br = jsr_bracket({a, b}, 4);
  CHECK(br.lower <= br.upper + 1e-12);
  CHECK(br.upper < 1.0);

  // independent enumeration of all products up to depth 4
  std::vector<Mat> mats{a, b};
  double lower = 0.0, upper = 1e300;
  std::vector<Mat> level{Mat::identity(2)};
  for (int m = 1; m <= 4; ++m) {
    std::vector<Mat> next;
    double norm_max = 0.0;
    for (const Mat& prod : level)
      for (const Mat& g : mats) {
        const Mat q = g * prod;
        // 2x2 spectral radius from the quadratic formula
        const double tr = q(0, 0) + q(1, 1);
        const double dt = q(0, 0) * q(1, 1) - q(0, 1) * q(1, 0);
        const double disc = tr * tr - 4.0 * dt;
        double rho;
        if (disc >= 0.0)
          rho = std::max(std::abs(tr + std::sqrt(disc)), std::abs(tr - std::sqrt(disc))) / 2.0;
        else
          rho = std::sqrt(dt);
        lower = std::max(lower, std::pow(rho, 1.0 / m));
        // spectral norm of a 2x2 via the singular-value formula
        const double g11 = q(0, 0) * q(0, 0) + q(1, 0) * q(1, 0);
        const double g22 = q(0, 1) * q(0, 1) + q(1, 1) * q(1, 1);
        const double g12 = q(0, 0) * q(0, 1) + q(1, 0) * q(1, 1);
        const double mid = 0.5 * (g11 + g22);
        const double rad = std::sqrt(std::max(0.0, mid * mid - (g11 * g22 - g12 * g12)));
        norm_max = std::max(norm_max, std::sqrt(mid + rad));
        next.push_back(q);
      }
    upper = std::min(upper, std::pow(norm_max, 1.0 / m));
    level = std::move(next);
  }
  CHECK(br.lower == doctest::Approx(lower).epsilon(1e-8));
  CHECK(br.upper == doctest::Approx(upper).epsilon(1e-8));
}

TEST_CASE("deepening the jsr search never widens the bracket") {
  const Mat a(2, 2, {0.7, 0.3, 0.0, 0.5});
  const Mat b(2, 2, {0.4, -0.2, 0.3, 0.6});
  JsrBracket prev = jsr_bracket({a, b}, 1);
  for (int depth = 2; depth <= 7; ++depth) {
    const JsrBracket cur = jsr_bracket({a, b}, depth);
    CHECK(cur.lower >= prev.lower - 1e-12);
    CHECK(cur.upper <= prev.upper + 1e-12);
    CHECK(cur.lower <= cur.upper + 1e-12);
    prev = cur;
  }
}

TEST_CASE("jsr product budget is enforced") {
  std::vector<Mat> mats(4, Mat::identity(2));
  try {
    jsr_bracket(mats, 10, 1000);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Error::Code::product_budget_exceeded);
  }
}

TEST_CASE("case-(ii) validation on the benchmark designs") {
  const DesignSpec lin = mc_design(McDesign::linear);
  CHECK(lin.coint.r == 1);
  CHECK(lin.coint.theta_plus(0, 0) == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(lin.coint.theta_minus(0, 0) == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(lin.coint.stability_verified);
  CHECK(lin.coint.jsr.upper == doctest::Approx(0.6).epsilon(1e-9));

  const DesignSpec non = mc_design(McDesign::nonlinear);
  CHECK(non.coint.theta_minus(0, 0) == doctest::Approx(-0.5).epsilon(1e-10));
  CHECK(non.coint.stability_verified);
  CHECK(non.coint.jsr.upper == doctest::Approx(0.85).epsilon(1e-9));
  CHECK(non.coint.jsr.lower == doctest::Approx(0.85).epsilon(1e-9));

  // Pi^{+-} equals alpha beta^{+-}' in the scale-free parameterization
  const Mat pi_plus = non.coint.alpha * transpose(non.coint.beta(+1));
  CHECK(max_abs(pi_plus - non.coint.Pi_plus) <= 1e-10);
  const Mat expected_plus = Mat::col_vec({0.5, 0.1}) * Mat(1, 2, {-1.0, 1.0});
  CHECK(max_abs(non.coint.Pi_plus - expected_plus) <= 1e-10);
  const Mat expected_minus = Mat::col_vec({0.5, 0.1}) * Mat(1, 2, {-0.5, 1.0});
  CHECK(max_abs(non.coint.Pi_minus - expected_minus) <= 1e-10);
}

TEST_CASE("case-(ii) validation on the k=2 fixture") {
  const CksvarParams params = k2_params(-0.5);
  const CointCaseTwoSpec spec = check_case_ii(params, 1);
  CHECK(spec.r == 1);
  REQUIRE(spec.Gamma.size() == 1);
  CHECK(spec.stability_verified);
  CHECK(spec.jsr.upper < 1.0);
  CHECK(spec.jsr.lower <= spec.jsr.upper);
  const auto [cp, cm] = build_companion(spec, params);
  CHECK(cp.rows == 4);  // r + (k-1)(p+1)
  const Mat expected_minus = Mat::col_vec({0.5, 0.1}) * Mat(1, 2, {-0.5, 1.0});
  CHECK(max_abs(spec.Pi_minus - expected_minus) <= 1e-9);
}

TEST_CASE("case-(ii) machinery at cointegrating rank two") {
  // p = 3, r = 2: adjustment loads only on the linear series, so both regime
  // companions are 0.5 I
  const Mat alpha(3, 2, {0, 0, -0.5, 0, 0, -0.5});
  const Mat beta_star_t(2, 4, {0.2, 0.1, 1, 0, -0.1, 0.0, 0, 1});  // rows: relations
  CksvarParams m;
  m.p = 3;
  m.k = 1;
  m.phi0_plus = Mat::col_vec({1, 0, 0});
  m.phi0_minus = Mat::col_vec({1, 0, 0});
  m.Phi0_x = Mat(3, 2, {0, 0, 1, 0, 0, 1});
  // levels form: Phi_1 = I* + alpha [beta_y+, beta_y-, beta_x']
  Mat phi1 = canonical_selector(3);
  phi1 = phi1 + alpha * beta_star_t;
  m.lag_phi_plus = {phi1.col(0)};
  m.lag_phi_minus = {phi1.col(1)};
  m.lag_Phi_x = {phi1.block(0, 2, 3, 2)};
  m.c = Mat(3, 1);
  m.Sigma_u = Mat::identity(3);

  const CointCaseTwoSpec spec = check_case_ii(m, 2);
  CHECK(spec.r == 2);
  CHECK(spec.q == 1);
  CHECK(spec.stability_verified);
  CHECK(spec.jsr.upper == doctest::Approx(0.5).epsilon(1e-9));

  // Pi^{+-} = alpha beta^{+-}' with beta rows (beta_y, I_2)
  const Mat beta_plus(3, 2, {0.2, -0.1, 1, 0, 0, 1});
  const Mat beta_minus(3, 2, {0.1, 0.0, 1, 0, 0, 1});
  CHECK(max_abs(spec.Pi_plus - alpha * transpose(beta_plus)) <= 1e-10);
  CHECK(max_abs(spec.Pi_minus - alpha * transpose(beta_minus)) <= 1e-10);
  CHECK(max_abs(spec.beta(+1) - beta_plus) <= 1e-9);
  CHECK(max_abs(spec.beta(-1) - beta_minus) <= 1e-9);
  CHECK(spec.theta_plus(0, 0) == doctest::Approx(0.2));
  CHECK(spec.theta_plus(1, 0) == doctest::Approx(-0.1));

  const auto [cp, cm] = build_companion(spec, m);
  CHECK(max_abs(cp - 0.5 * Mat::identity(2)) <= 1e-9);
  CHECK(max_abs(cm - 0.5 * Mat::identity(2)) <= 1e-9);

  // simulated paths keep the two equilibrium errors stable
  Rng rng(77);
  const SimulatedPath sim = simulate_path(m, 4000, {}, rng);
  const SeriesMatrix zstar = build_zstar(sim.path);
  double mean0 = 0.0, mean1 = 0.0;
  for (int t = 0; t < zstar.n; ++t) {
    double xi0 = 0.0, xi1 = 0.0;
    for (int i = 0; i < 4; ++i) {
      xi0 += beta_star_t(0, i) * zstar(t, i);
      xi1 += beta_star_t(1, i) * zstar(t, i);
    }
    mean0 += xi0;
    mean1 += xi1;
  }
  CHECK(std::abs(mean0 / zstar.n) < 0.5);  // c = 0: equilibrium errors centre on zero
  CHECK(std::abs(mean1 / zstar.n) < 0.5);
}

TEST_CASE("rank mismatch for pure random walks") {
  CksvarParams p = mc_design(McDesign::linear).params;
  // remove the adjustment: Phi_1 = I*, so Pi = 0
  p.lag_phi_plus = {Mat::col_vec({1.0, 0.0})};
  p.lag_phi_minus = {Mat::col_vec({1.0, 0.0})};
  p.lag_Phi_x = {Mat(2, 1, {0.0, 1.0})};
  p.c = Mat(2, 1);
  try {
    check_case_ii(p, 1);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Error::Code::rank_mismatch);
  }
  const CointCaseTwoSpec spec = check_case_ii(p, 0);  // r = 0 is the truth
  CHECK(spec.r == 0);
  CHECK(spec.stability_verified);
}

TEST_CASE("deterministic-term restriction") {
  const DesignSpec d = mc_design(McDesign::nonlinear);
  CHECK(check_det_restriction(d.coint, d.params.c));          // c = 2 alpha
  CHECK(check_det_restriction(d.coint, Mat(2, 1)));           // c = 0
  CHECK_FALSE(check_det_restriction(d.coint, Mat::col_vec({0.1, -0.5})));  // orthogonal to alpha
}

TEST_CASE("parameter files round-trip") {
  const CksvarParams p = k2_params(-0.5);
  const std::string text = params_to_text(p);
  const CksvarParams back = parse_params_text(text);
  CHECK(back.p == p.p);
  CHECK(back.k == p.k);
  CHECK(max_abs(back.Phi0() - p.Phi0()) == 0.0);
  CHECK(max_abs(back.Phi_lag(2) - p.Phi_lag(2)) == 0.0);
  CHECK(max_abs(back.Sigma_u - p.Sigma_u) == 0.0);

  CHECK_THROWS_AS(parse_params_text("p = 2\nk = 0\n"), Error);  // missing keys
}

TEST_CASE("nonzero threshold folds into the intercept") {
  CksvarParams p = mc_design(McDesign::linear).params;
  p.b_threshold = 1.5;
  const CksvarParams shifted = normalize_threshold(p);
  CHECK(shifted.b_threshold == 0.0);
  // phi+(1) + phi-(1) = (phi0+ + phi0-) - (phi1+ + phi1-)
  Mat expect = p.c - 1.5 * (p.phi0_plus + p.phi0_minus - p.lag_phi_plus[0] - p.lag_phi_minus[0]);
  CHECK(max_abs(shifted.c - expect) <= 1e-14);
}
