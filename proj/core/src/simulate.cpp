#include "cksvar/simulate.hpp"

#include <cmath>
#include <deque>

#include "cksvar/error.hpp"
#include "cksvar/pencil.hpp"

namespace cksvar {

namespace {

constexpr double kBranchTol = 1e-10;

std::vector<double> split_vec(const Mat& z) {
  // (y+, y-, x) from z = (y, x); y == 0 belongs to the + regime
  std::vector<double> out(z.rows + 1, 0.0);
  const double y = z(0, 0);
  if (y >= 0.0)
    out[0] = y;
  else
    out[1] = y;
  for (int i = 1; i < z.rows; ++i) out[i + 1] = z(i, 0);
  return out;
}

}  // namespace

Mat solve_step(const CksvarParams& params, const Mat& rhs) {
  if (rhs.rows != params.p || rhs.cols != 1)
    throw Error(Error::Code::dimension_mismatch, "solve_step: rhs must be p x 1");
  const Mat z_plus = lu_solve(params.Phi0_pm(+1), rhs);
  const Mat z_minus = lu_solve(params.Phi0_pm(-1), rhs);
  const double y_plus = z_plus(0, 0);
  const double y_minus = z_minus(0, 0);
  const bool ok_plus = y_plus >= 0.0;
  const bool ok_minus = y_minus < 0.0;
  if (ok_plus && !ok_minus) return z_plus;
  if (ok_minus && !ok_plus) return z_minus;
  // both or neither consistent: admissible only as a y ~ 0 boundary event,
  // where the two branch solutions coincide
  if (ok_plus && ok_minus) {
    if (std::abs(y_minus) <= kBranchTol) return z_plus;  // minus solution is the artifact
    if (std::abs(y_plus) <= kBranchTol) {
      Mat z = z_plus;  // boundary; zero belongs to the + regime
      z(0, 0) = 0.0;
      return z;
    }
  } else if (std::min(std::abs(y_plus), std::abs(y_minus)) <= kBranchTol) {
    Mat z = z_plus;
    z(0, 0) = 0.0;
    return z;
  }
  throw Error(Error::Code::coherency_paradox,
              ok_plus ? "solve_step: both branches sign-consistent"
                      : "solve_step: no branch sign-consistent");
}

namespace {

SimulatedPath run_recursion(const CksvarParams& params, const std::vector<Mat>& init,
                            const SeriesMatrix& innovations, int burn_in) {
  const int p = params.p;
  const int k = params.k;
  const int total = innovations.n;
  const int n = total - burn_in;
  if (n < 1) throw Error(Error::Code::invalid_argument, "simulate_path: n >= 1 required");
  if (static_cast<int>(init.size()) > k)
    throw Error(Error::Code::invalid_argument, "simulate_path: more initial values than lags");

  // lag buffer, most recent first: z_{t-1}, z_{t-2}, ..., z_{t-k} as split vectors
  std::deque<std::vector<double>> lags;
  for (int i = static_cast<int>(init.size()) - 1; i >= 0; --i) {
    if (init[i].rows != p || init[i].cols != 1)
      throw Error(Error::Code::dimension_mismatch, "simulate_path: init entries must be p x 1");
    lags.push_back(split_vec(init[i]));
  }
  while (static_cast<int>(lags.size()) < k) lags.push_back(std::vector<double>(p + 1, 0.0));

  std::vector<Mat> lag_blocks;
  lag_blocks.reserve(k);
  for (int i = 1; i <= k; ++i) lag_blocks.push_back(params.Phi_lag(i));

  SimulatedPath out;
  out.path = SeriesMatrix(n, p);
  out.innovations = SeriesMatrix(n, p);
  Mat rhs(p, 1);
  for (int t = 0; t < total; ++t) {
    for (int i = 0; i < p; ++i) rhs(i, 0) = params.c(i, 0) + innovations(t, i);
    for (int i = 1; i <= k; ++i) {
      const Mat& block = lag_blocks[i - 1];
      const std::vector<double>& zs = lags[i - 1];
      for (int row = 0; row < p; ++row) {
        double s = 0.0;
        for (int col = 0; col < p + 1; ++col) s += block(row, col) * zs[col];
        rhs(row, 0) += s;
      }
    }
    const Mat z = solve_step(params, rhs);
    if (k > 0) {
      lags.pop_back();
      lags.push_front(split_vec(z));
    }
    if (t >= burn_in) {
      for (int i = 0; i < p; ++i) {
        out.path(t - burn_in, i) = z(i, 0);
        out.innovations(t - burn_in, i) = innovations(t, i);
      }
    }
  }
  return out;
}

}  // namespace

SimulatedPath simulate_path(const CksvarParams& params, int n, const std::vector<Mat>& init,
                            Rng& rng, int burn_in) {
  params.validate();
  if (n < 1) throw Error(Error::Code::invalid_argument, "simulate_path: n >= 1 required");
  if (burn_in < 0) throw Error(Error::Code::invalid_argument, "simulate_path: burn_in >= 0");
  const int p = params.p;
  const int total = n + burn_in;

  // Sigma_u = 0 is tolerated for degenerate-dynamics tests only
  Mat chol_u(p, p);
  if (max_abs(params.Sigma_u) > 0.0) chol_u = cholesky(params.Sigma_u);

  SeriesMatrix innovations(total, p);
  std::vector<double> eps(p);
  for (int t = 0; t < total; ++t) {
    for (int i = 0; i < p; ++i) eps[i] = rng.next_normal();
    for (int i = 0; i < p; ++i) {
      double s = 0.0;
      for (int j = 0; j <= i; ++j) s += chol_u(i, j) * eps[j];
      innovations(t, i) = s;
    }
  }
  return run_recursion(params, init, innovations, burn_in);
}

SimulatedPath simulate_path_with_innovations(const CksvarParams& params,
                                             const std::vector<Mat>& init,
                                             const SeriesMatrix& innovations) {
  params.validate();
  if (innovations.d != params.p)
    throw Error(Error::Code::dimension_mismatch, "simulate_path: innovations must have p columns");
  return run_recursion(params, init, innovations, 0);
}

const char* design_name(McDesign d) { return d == McDesign::linear ? "linear" : "nonlinear"; }

McDesign design_from_name(const std::string& name) {
  if (name == "linear") return McDesign::linear;
  if (name == "nonlinear") return McDesign::nonlinear;
  throw Error(Error::Code::invalid_argument, "unknown design: " + name);
}

DesignSpec mc_design(McDesign design) {
  const double beta_y_plus = -1.0;
  const double beta_y_minus = design == McDesign::linear ? -1.0 : -0.5;
  const Mat alpha = Mat::col_vec({0.5, 0.1});

  DesignSpec out;
  CksvarParams& m = out.params;
  m.p = 2;
  m.k = 1;
  m.phi0_plus = Mat::col_vec({1.0, 0.0});
  m.phi0_minus = Mat::col_vec({1.0, 0.0});
  m.Phi0_x = Mat(2, 1, {0.0, 1.0});
  // levels form of dz_t = c + alpha beta*' z*_{t-1} + u_t
  Mat phi1 = canonical_selector(2);
  const Mat beta_star_t(1, 3, {beta_y_plus, beta_y_minus, 1.0});
  phi1 = phi1 + alpha * beta_star_t;
  m.lag_phi_plus = {phi1.col(0)};
  m.lag_phi_minus = {phi1.col(1)};
  m.lag_Phi_x = {phi1.col(2)};
  m.c = 2.0 * alpha;
  m.Sigma_u = Mat::identity(2);

  out.coint = check_case_ii(m, 1);
  out.beta_star = transpose(beta_star_t);
  return out;
}

bool retained(const OccupationStats& stats, double threshold) {
  if (threshold < 0.0 || threshold > 0.5)
    throw Error(Error::Code::invalid_argument, "retained: threshold must lie in [0, 0.5]");
  const int n = stats.count_plus + stats.count_minus;
  // epsilon guard so thresholds like 0.15 * 200 resolve to the intended count
  const int need = static_cast<int>(std::ceil(threshold * n - 1e-9));
  return std::min(stats.count_plus, stats.count_minus) >= need;
}

}  // namespace cksvar
