#include "cksvar/coint.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "cksvar/error.hpp"
#include "cksvar/pencil.hpp"

namespace cksvar {

namespace {

constexpr double kRankTol = 1e-8;  // relative singular-value threshold

struct ThinFactor {
  std::vector<double> singular_values;  // descending
  Mat right;                            // V, cols aligned with singular values
  int rank = 0;
};

// Singular structure of m via the symmetric eigenproblem of m'm.
ThinFactor thin_factor(const Mat& m) {
  ThinFactor f;
  const Mat mtm = transpose(m) * m;
  if (mtm.rows == 0) return f;
  SymEigResult e = sym_eig(mtm);
  const int n = mtm.rows;
  f.singular_values.resize(n);
  f.right = Mat(n, n);
  for (int j = 0; j < n; ++j) {
    const int src = n - 1 - j;  // descending
    f.singular_values[j] = std::sqrt(std::max(e.values[src], 0.0));
    for (int i = 0; i < n; ++i) f.right(i, j) = e.vectors(i, src);
  }
  const double top = f.singular_values.empty() ? 0.0 : f.singular_values[0];
  for (double s : f.singular_values)
    if (s > kRankTol * top) ++f.rank;
  if (top == 0.0) f.rank = 0;
  return f;
}

int numeric_rank(const Mat& m) { return thin_factor(m).rank; }

// Orthonormal basis of the orthogonal complement of span(a) in R^{a.rows},
// assuming rank(a) == rank_a.
Mat orth_complement(const Mat& a, int rank_a) {
  const int n = a.rows;
  const int q = n - rank_a;
  if (q == 0) return Mat(n, 0);
  if (rank_a == 0) return Mat::identity(n);
  SymEigResult e = sym_eig(a * transpose(a));  // null space = small eigenvalues
  Mat out(n, q);
  for (int j = 0; j < q; ++j)
    for (int i = 0; i < n; ++i) out(i, j) = e.vectors(i, j);
  return out;
}

// Spectral radius of a small general square matrix: characteristic polynomial
// by Faddeev-LeVerrier, roots by Durand-Kerner.
double spectral_radius(const Mat& a) {
  const int n = a.rows;
  if (n == 0) return 0.0;
  if (n == 1) return std::abs(a(0, 0));
  std::vector<double> coef(n + 1, 0.0);  // monic: lambda^n + coef[1] l^{n-1} + ... + coef[n]
  coef[0] = 1.0;
  Mat m = Mat::identity(n);
  for (int k = 1; k <= n; ++k) {
    m = a * m;
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += m(i, i);
    coef[k] = -tr / k;
    for (int i = 0; i < n; ++i) m(i, i) += coef[k];
  }
  using C = std::complex<double>;
  double scale = 1.0;
  for (int k = 1; k <= n; ++k) scale = std::max(scale, std::abs(coef[k]));
  std::vector<C> z(n);
  const C seed(0.4, 0.9);
  C zk(1.0, 0.0);
  for (int i = 0; i < n; ++i) {
    zk *= seed;
    z[i] = (1.0 + scale) * zk;
  }
  auto eval = [&](C x) {
    C p(coef[0], 0.0);
    for (int k = 1; k <= n; ++k) p = p * x + coef[k];
    return p;
  };
  for (int iter = 0; iter < 400; ++iter) {
    double delta = 0.0;
    for (int i = 0; i < n; ++i) {
      C denom(1.0, 0.0);
      for (int j = 0; j < n; ++j)
        if (j != i) denom *= (z[i] - z[j]);
      if (std::abs(denom) < 1e-300) denom = C(1e-300, 0.0);
      const C step = eval(z[i]) / denom;
      z[i] -= step;
      delta = std::max(delta, std::abs(step));
    }
    if (delta < 1e-14 * (1.0 + scale)) break;
  }
  double rho = 0.0;
  for (const C& r : z) rho = std::max(rho, std::abs(r));
  return rho;
}

double spectral_norm(const Mat& a) {
  if (a.rows == 0 || a.cols == 0) return 0.0;
  SymEigResult e = sym_eig(transpose(a) * a);
  return std::sqrt(std::max(e.values.back(), 0.0));
}

// S_p(y): maps z = (y, x) to the split vector (y+, y-, x); (p+1) x p.
Mat split_selector(int p, int sign) {
  Mat s(p + 1, p);
  s(sign >= 0 ? 0 : 1, 0) = 1.0;
  for (int i = 1; i < p; ++i) s(1 + i, i) = 1.0;
  return s;
}

Mat pm_block(const Mat& three_block, int sign) {
  const int p = three_block.rows;
  Mat out(p, p);
  out.set_block(0, 0, three_block.col(sign >= 0 ? 0 : 1));
  out.set_block(0, 1, three_block.block(0, 2, p, three_block.cols - 2));
  return out;
}

}  // namespace

Mat CointCaseTwoSpec::beta(int sign) const {
  Mat b(p, r);
  b.set_block(0, 0, sign >= 0 ? beta_y_plus : beta_y_minus);  // 1 x r first row
  b.set_block(1, 0, beta_x);
  return b;
}

std::pair<Mat, Mat> build_companion(const CointCaseTwoSpec& spec, const CksvarParams& params) {
  const int p = spec.p;
  const int k = params.k;
  const int r = spec.r;
  if (k < 1) throw Error(Error::Code::invalid_argument, "build_companion: k >= 1 required");
  if (static_cast<int>(spec.Gamma.size()) != k - 1)
    throw Error(Error::Code::dimension_mismatch, "build_companion: Gamma block count != k-1");

  const int nr = k * (p + 1) - 1;
  const int nc = r + (k - 1) * (p + 1);
  Mat balpha(nr, nc);
  balpha.set_block(0, 0, spec.alpha);
  for (int i = 1; i <= k - 1; ++i) {
    balpha.set_block(0, r + (i - 1) * (p + 1), spec.Gamma[i - 1]);
    balpha.set_block(p + (i - 1) * (p + 1), r + (i - 1) * (p + 1), Mat::identity(p + 1));
  }

  auto bbeta_t = [&](int sign) {
    Mat bt(nc, nr);
    bt.set_block(0, 0, transpose(spec.beta(sign)));
    for (int j = 1; j <= k - 1; ++j) {
      const int row = r + (j - 1) * (p + 1);
      if (j == 1)
        bt.set_block(row, 0, split_selector(p, sign));
      else
        bt.set_block(row, p + (j - 2) * (p + 1), Mat::identity(p + 1));
      bt.set_block(row, p + (j - 1) * (p + 1), -1.0 * Mat::identity(p + 1));
    }
    return bt;
  };

  const Mat eye = Mat::identity(nc);
  return {eye + bbeta_t(+1) * balpha, eye + bbeta_t(-1) * balpha};
}

JsrBracket jsr_bracket(const std::vector<Mat>& mats, int max_depth, std::size_t budget) {
  if (mats.empty() || max_depth < 1)
    throw Error(Error::Code::invalid_argument, "jsr_bracket: need matrices and max_depth >= 1");
  const int dim = mats[0].rows;
  for (const Mat& m : mats)
    if (m.rows != dim || m.cols != dim)
      throw Error(Error::Code::dimension_mismatch, "jsr_bracket: matrices must share dimension");

  std::size_t total = 0, level = 1;
  for (int m = 1; m <= max_depth; ++m) {
    level *= mats.size();
    total += level;
    if (total > budget)
      throw Error(Error::Code::product_budget_exceeded,
                  "jsr_bracket: product count exceeds budget at depth " + std::to_string(m));
  }

  JsrBracket out;
  out.depth = max_depth;
  out.lower = 0.0;
  out.upper = std::numeric_limits<double>::infinity();
  std::vector<Mat> current{Mat::identity(dim)};
  for (int m = 1; m <= max_depth; ++m) {
    std::vector<Mat> next;
    next.reserve(current.size() * mats.size());
    double norm_max = 0.0;
    for (const Mat& prod : current) {
      for (const Mat& a : mats) {
        Mat q = a * prod;
        out.lower = std::max(out.lower, std::pow(spectral_radius(q), 1.0 / m));
        norm_max = std::max(norm_max, spectral_norm(q));
        next.push_back(std::move(q));
      }
    }
    out.upper = std::min(out.upper, std::pow(norm_max, 1.0 / m));
    current = std::move(next);
  }
  if (dim == 0) {  // empty recursion: nothing to destabilize
    out.lower = 0.0;
    out.upper = 0.0;
  }
  return out;
}

CointCaseTwoSpec check_case_ii(const CksvarParams& params, int r, int jsr_max_depth) {
  const CanonicalForm cf = to_canonical(params);
  const CksvarParams& ct = cf.params_tilde;
  const int p = ct.p;
  const int k = ct.k;
  if (r < 0 || r > p - 1)
    throw Error(Error::Code::invalid_argument, "check_case_ii: r must lie in {0,...,p-1}");

  CointCaseTwoSpec spec;
  spec.p = p;
  spec.k = k;
  spec.r = r;
  spec.q = p - r;

  // Pi^{+-} = -Phi~^{+-}(1), shared x-block Pi^x
  Mat phi1_plus = ct.Phi0_pm(+1);
  Mat phi1_minus = ct.Phi0_pm(-1);
  for (int i = 1; i <= k; ++i) {
    phi1_plus = phi1_plus - ct.Phi_lag_pm(i, +1);
    phi1_minus = phi1_minus - ct.Phi_lag_pm(i, -1);
  }
  spec.Pi_plus = -1.0 * phi1_plus;
  spec.Pi_minus = -1.0 * phi1_minus;
  spec.Pi_x = spec.Pi_plus.block(0, 1, p, p - 1);

  const ThinFactor fx = thin_factor(spec.Pi_x);
  if (fx.rank != r)
    throw Error(Error::Code::rank_mismatch, "check_case_ii: rank(Pi_x) = " +
                                                std::to_string(fx.rank) + ", requested r = " +
                                                std::to_string(r));
  if (numeric_rank(spec.Pi_plus) != r || numeric_rank(spec.Pi_minus) != r)
    throw Error(Error::Code::rank_mismatch, "check_case_ii: rank(Pi^{+-}) != r");

  const Mat pi_plus = spec.Pi_plus.col(0);
  const Mat pi_minus = spec.Pi_minus.col(0);
  const double pi_scale = std::max({1.0, max_abs(spec.Pi_plus), max_abs(spec.Pi_minus)});

  if (r > 0) {
    Mat vr(p - 1, r);
    for (int j = 0; j < r; ++j)
      for (int i = 0; i < p - 1; ++i) vr(i, j) = fx.right(i, j);
    spec.alpha = spec.Pi_x * vr;  // = U_r diag(sigma_r)
    spec.beta_x = vr;
    // prefer beta_x with identity leading block; fall back to the orthonormal V_r
    const Mat lead = spec.beta_x.block(0, 0, r, r);
    if (std::abs(det(lead)) > 1e-8) {
      spec.beta_x = spec.beta_x * inverse(lead);
      spec.alpha = spec.alpha * transpose(lead);
    }
    const Mat ata_inv = inverse(transpose(spec.alpha) * spec.alpha);
    auto solve_beta_y = [&](const Mat& pi) {
      const Mat by_t = ata_inv * (transpose(spec.alpha) * pi);  // r x 1
      if (max_abs(spec.alpha * by_t - pi) > kRankTol * pi_scale)
        throw Error(Error::Code::rank_mismatch,
                    "check_case_ii: Pi^{+-} does not factor through a common alpha");
      return transpose(by_t);  // 1 x r
    };
    spec.beta_y_plus = solve_beta_y(pi_plus);
    spec.beta_y_minus = solve_beta_y(pi_minus);

    // theta^{+-}: minimum-norm solution of Pi_x theta = pi through the thin factor
    Mat pinv(p - 1, p);  // V_r diag(1/sigma^2) V_r' Pi_x'
    {
      Mat vs(p - 1, r);
      for (int j = 0; j < r; ++j) {
        const double s2 = fx.singular_values[j] * fx.singular_values[j];
        for (int i = 0; i < p - 1; ++i) vs(i, j) = vr(i, j) / s2;
      }
      pinv = vs * transpose(vr) * transpose(spec.Pi_x);
    }
    auto solve_theta = [&](const Mat& pi) {
      const Mat theta = pinv * pi;
      if (max_abs(spec.Pi_x * theta - pi) > kRankTol * pi_scale)
        throw Error(Error::Code::rank_mismatch,
                    "check_case_ii: pi^{+-} is outside span(Pi_x)");
      return theta;
    };
    spec.theta_plus = solve_theta(pi_plus);
    spec.theta_minus = solve_theta(pi_minus);
  } else {
    spec.alpha = Mat(p, 0);
    spec.beta_x = Mat(p - 1, 0);
    spec.beta_y_plus = Mat(1, 0);
    spec.beta_y_minus = Mat(1, 0);
    spec.theta_plus = Mat(p - 1, 1);
    spec.theta_minus = Mat(p - 1, 1);
  }

  for (int i = 1; i <= k - 1; ++i) {
    Mat g(p, p + 1);
    for (int j = i + 1; j <= k; ++j) g = g - ct.Phi_lag(j);
    spec.Gamma.push_back(g);
  }

  // sign condition: sgn det(alpha_perp' Gamma(1;y) beta_perp(y)) equal and nonzero
  const Mat alpha_perp = orth_complement(spec.alpha, r);
  const Mat beta_x_perp = orth_complement(spec.beta_x, r);
  auto gamma_one = [&](int sign) {
    Mat g = Mat::identity(p);  // canonical Phi0^{+-}
    for (const Mat& gi : spec.Gamma) g = g - pm_block(gi, sign);
    return g;
  };
  auto beta_perp = [&](int sign) {
    Mat b(p, spec.q);
    b(0, 0) = 1.0;
    const Mat& theta = sign >= 0 ? spec.theta_plus : spec.theta_minus;
    b.set_block(1, 0, -1.0 * theta);
    b.set_block(1, 1, beta_x_perp);
    return b;
  };
  spec.det_sign_plus = det(transpose(alpha_perp) * gamma_one(+1) * beta_perp(+1));
  spec.det_sign_minus = det(transpose(alpha_perp) * gamma_one(-1) * beta_perp(-1));
  if (spec.det_sign_plus == 0.0 || spec.det_sign_minus == 0.0 ||
      (spec.det_sign_plus > 0.0) != (spec.det_sign_minus > 0.0))
    throw Error(Error::Code::sign_condition,
                "check_case_ii: det(alpha_perp' Gamma(1;y) beta_perp(y)) sign condition fails");

  const auto companions = build_companion(spec, ct);
  spec.jsr = jsr_bracket({companions.first, companions.second}, jsr_max_depth);
  spec.stability_verified = spec.jsr.upper < 1.0;
  return spec;
}

bool check_det_restriction(const CointCaseTwoSpec& spec, const Mat& c) {
  if (c.rows != spec.p || c.cols != 1)
    throw Error(Error::Code::dimension_mismatch, "check_det_restriction: c must be p x 1");
  const double cnorm = frobenius_norm(c);
  if (cnorm == 0.0) return true;
  auto residual_small = [&](const Mat& pi) {
    // least-squares residual of c on the columns of pi, via the thin factor
    const ThinFactor f = thin_factor(pi);
    Mat proj(spec.p, 1);
    for (int j = 0; j < f.rank; ++j) {
      Mat u(spec.p, 1);  // u_j = pi v_j / sigma_j
      for (int i = 0; i < spec.p; ++i) {
        double s = 0.0;
        for (int l = 0; l < pi.cols; ++l) s += pi(i, l) * f.right(l, j);
        u(i, 0) = s / f.singular_values[j];
      }
      double coef = 0.0;
      for (int i = 0; i < spec.p; ++i) coef += u(i, 0) * c(i, 0);
      proj = proj + coef * u;
    }
    return frobenius_norm(c - proj) <= 1e-8 * cnorm;
  };
  return residual_small(spec.Pi_plus) && residual_small(spec.Pi_minus);
}

}  // namespace cksvar
