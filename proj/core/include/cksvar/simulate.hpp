#pragma once

#include <vector>

#include "cksvar/coint.hpp"
#include "cksvar/mat.hpp"
#include "cksvar/model.hpp"
#include "cksvar/rng.hpp"
#include "cksvar/series.hpp"

namespace cksvar {

/// Solve the piecewise-linear structural equation for one period:
/// rhs = c + lag terms + u_t is given; the branch whose solved first
/// component is sign-consistent is returned. Coherency guarantees exactly
/// one branch is consistent; violations beyond tolerance 1e-10 raise
/// coherency_paradox.
Mat solve_step(const CksvarParams& params, const Mat& rhs);

struct SimulatedPath {
  SeriesMatrix path;         // n x p, rows t = 1..n
  SeriesMatrix innovations;  // n x p, u_t aligned with path rows
};

/// Simulate n observations. `init` supplies z_{-k+1},...,z_0 (oldest first);
/// missing entries default to zero, matching the z_0 = 0 convention.
/// Innovations are Sigma_u-correlated Gaussians (Cholesky of Sigma_u applied
/// to standard normals drawn row by row). Deterministic given (seed, params,
/// n, init). With burn_in > 0, n + burn_in steps are generated and the first
/// burn_in are dropped.
SimulatedPath simulate_path(const CksvarParams& params, int n, const std::vector<Mat>& init,
                            Rng& rng, int burn_in = 0);

/// Same recursion with caller-supplied innovations (row t = u_{t+1}).
SimulatedPath simulate_path_with_innovations(const CksvarParams& params,
                                             const std::vector<Mat>& init,
                                             const SeriesMatrix& innovations);

enum class McDesign { linear, nonlinear };

const char* design_name(McDesign d);
McDesign design_from_name(const std::string& name);

struct DesignSpec {
  CksvarParams params;     // canonical bivariate VECM-in-levels form
  CointCaseTwoSpec coint;  // validated case-(ii) decomposition, r = 1
  Mat beta_star;           // (p+1) x r: rows (beta_y+, beta_y-, beta_x)
};

/// The two benchmark designs: a bivariate system with one common trend,
/// adjustment alpha = (0.5, 0.1)', intercept c = 2 alpha, unit innovation
/// covariance, and split-level cointegrating vector (beta_y+, beta_y-, 1)
/// with beta_y+ = -1 and beta_y- = -1 (linear) or -0.5 (nonlinear).
DesignSpec mc_design(McDesign design);

/// Retention rule: both regimes occupied for at least ceil(threshold * n)
/// observations.
bool retained(const OccupationStats& stats, double threshold);

}  // namespace cksvar
