#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "cksvar/mat.hpp"
#include "cksvar/model.hpp"

namespace cksvar {

struct JsrBracket {
  double lower = 0.0;
  double upper = 0.0;
  int depth = 0;  // maximum product length examined
};

/// Case-(ii) cointegration structure, stated in the canonical frame. The
/// alpha/beta factorization is identified only up to an invertible r x r
/// mixing; compare Pi_plus / Pi_minus across specs, never the factors.
struct CointCaseTwoSpec {
  int p = 0;
  int k = 0;
  int r = 0;
  int q = 0;  // p - r
  Mat alpha;         // p x r
  Mat beta_y_plus;   // 1 x r
  Mat beta_y_minus;  // 1 x r
  Mat beta_x;        // (p-1) x r, leading r x r block normalized to I when possible
  Mat theta_plus;    // (p-1) x 1, solves Pi_x theta = pi
  Mat theta_minus;
  Mat Pi_plus;   // p x p
  Mat Pi_minus;  // p x p
  Mat Pi_x;      // p x (p-1)
  std::vector<Mat> Gamma;  // k-1 canonical three-blocks, p x (p+1)
  JsrBracket jsr;
  bool stability_verified = false;  // jsr.upper < 1
  double det_sign_plus = 0.0;       // det(alpha_perp' Gamma(1;+-1) beta_perp(+-1))
  double det_sign_minus = 0.0;

  /// beta(+1) / beta(-1): p x r with first row beta_y and remainder beta_x.
  Mat beta(int sign) const;
};

/// Companion matrices (I + bbeta(+1)' balpha, I + bbeta(-1)' balpha) of
/// dimension r + (k-1)(p+1), whose joint spectral radius governs stability of
/// the equilibrium-error recursion. Pure block assembly from canonical-frame
/// blocks; rank conditions on the factors are enforced by check_case_ii.
std::pair<Mat, Mat> build_companion(const CointCaseTwoSpec& spec, const CksvarParams& params);

/// Bracket the joint spectral radius by exhaustive products up to max_depth:
/// lower = max over products of spectral_radius^{1/len}; upper = min over
/// lengths m of (max over length-m products of ||.||_2)^{1/m}. Throws
/// product_budget_exceeded when the enumeration would exceed `budget`.
JsrBracket jsr_bracket(const std::vector<Mat>& mats, int max_depth,
                       std::size_t budget = std::size_t{1} << 16);

/// Validate the case-(ii) configuration at cointegrating rank r and derive
/// its decomposition from the canonical form of `params`. Throws
/// rank_mismatch / sign_condition; an inconclusive stability bracket is
/// reported via stability_verified = false, not an error.
CointCaseTwoSpec check_case_ii(const CksvarParams& params, int r, int jsr_max_depth = 8);

/// True iff c lies in span(Pi_plus) and span(Pi_minus), up to relative
/// residual 1e-8 (c = 0 trivially passes). Rules out deterministic trends.
bool check_det_restriction(const CointCaseTwoSpec& spec, const Mat& c);

}  // namespace cksvar
