#pragma once

#include <string>
#include <vector>

#include "cksvar/mat.hpp"

namespace cksvar {

/// Structural parameterization of a two-regime piecewise-affine VAR(k) in p
/// variables: the first series enters with sign-dependent coefficients, the
/// remaining p-1 enter linearly. The regime threshold is normalized to zero
/// at construction; a nonzero threshold is folded into the data and intercept
/// by normalize_threshold.
struct CksvarParams {
  int p = 0;
  int k = 0;
  Mat phi0_plus;   // p x 1
  Mat phi0_minus;  // p x 1
  Mat Phi0_x;      // p x (p-1)
  std::vector<Mat> lag_phi_plus;   // k entries, p x 1
  std::vector<Mat> lag_phi_minus;  // k entries, p x 1
  std::vector<Mat> lag_Phi_x;      // k entries, p x (p-1)
  Mat c;        // p x 1
  Mat Sigma_u;  // p x p, symmetric PD (zero allowed only for degenerate tests)
  double b_threshold = 0.0;

  /// Contemporaneous three-block [phi0+, phi0-, Phi0_x], p x (p+1).
  Mat Phi0() const;
  /// Lag-i three-block, i in 1..k.
  Mat Phi_lag(int i) const;
  /// [phi0_s, Phi0_x] for s = +1/-1, p x p.
  Mat Phi0_pm(int sign) const;
  Mat Phi_lag_pm(int i, int sign) const;

  void validate() const;  // dimensions and finiteness
};

/// The canonical contemporaneous selector: [1 1 0; 0 0 I_{p-1}], p x (p+1).
Mat canonical_selector(int p);

/// Fold a nonzero threshold b into the intercept, shifting the first series
/// by -b. Returns params with b_threshold == 0.
CksvarParams normalize_threshold(const CksvarParams& params);

struct CoherencyDiagnostics {
  bool ok = false;
  double det_plus = 0.0;   // det [phi0+, Phi0_x]
  double det_minus = 0.0;  // det [phi0-, Phi0_x]
  double det_xx = 0.0;
  double schur_plus = 0.0;   // phi0_yy+ - phi0_yx' Phi0_xx^-1 phi0_xy+
  double schur_minus = 0.0;
  std::string reason;  // empty when ok
};

/// Unique-solution conditions: sgn det [phi0+,Phi0_x] = sgn det [phi0-,Phi0_x]
/// != 0, Phi0_xx invertible, and both Schur complements strictly positive.
CoherencyDiagnostics check_coherency(const CksvarParams& params);

struct CanonicalForm {
  Mat P_inv;  // (p+1) x (p+1): maps (y+, y-, x) to canonical variables
  Mat P;
  Mat Q;  // p x p: premultiplies the structural equations
  CksvarParams params_tilde;
};

/// Transform to the canonical form with contemporaneous selector
/// canonical_selector(p). Throws coherency_violated when check_coherency
/// fails.
CanonicalForm to_canonical(const CksvarParams& params);

/// key = value parameter files; matrices as row-major bracketed lists.
CksvarParams read_params_file(const std::string& path);
void write_params_file(const std::string& path, const CksvarParams& params);
CksvarParams parse_params_text(const std::string& text);
std::string params_to_text(const CksvarParams& params);

}  // namespace cksvar
