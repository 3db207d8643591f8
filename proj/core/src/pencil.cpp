#include "cksvar/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cksvar/error.hpp"

namespace cksvar {

namespace {

constexpr double kSymmetryTol = 1e-10;  // relative to max |entry|
constexpr int kMaxJacobiSweeps = 64;
constexpr double kPivotRatioFlag = 1e-12;

void require_symmetric(const Mat& m, const char* who) {
  if (m.rows != m.cols)
    throw Error(Error::Code::dimension_mismatch, std::string(who) + ": square matrix required");
  const double scale = max_abs(m);
  if (symmetry_gap(m) > kSymmetryTol * std::max(1.0, scale))
    throw Error(Error::Code::invalid_argument, std::string(who) + ": matrix not symmetric");
}

}  // namespace

Mat cholesky(const Mat& m) {
  require_symmetric(m, "cholesky");
  const int n = m.rows;
  Mat l(n, n);
  for (int j = 0; j < n; ++j) {
    double d = m(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d <= 0.0)
      throw Error(Error::Code::not_positive_definite,
                  "cholesky: pivot <= 0 at index " + std::to_string(j));
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

SymEigResult sym_eig(const Mat& m) {
  require_symmetric(m, "sym_eig");
  const int n = m.rows;
  Mat a = m;
  // enforce exact symmetry so rotations stay consistent
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = v;
      a(j, i) = v;
    }
  Mat v = Mat::identity(n);

  const double scale = std::max(max_abs(a), 1e-300);
  const double stop = 1e-15 * scale;
  bool converged = (n <= 1);
  for (int sweep = 0; sweep < kMaxJacobiSweeps && !converged; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off = std::max(off, std::abs(a(i, j)));
    if (off <= stop) {
      converged = true;
      break;
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= stop * 1e-2) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off = std::max(off, std::abs(a(i, j)));
    if (off > stop)
      throw Error(Error::Code::no_convergence, "sym_eig: Jacobi sweeps exhausted");
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });
  SymEigResult out;
  out.values.resize(n);
  out.vectors = Mat(n, n);
  for (int j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (int i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

PencilResult gen_eig_pencil(const Mat& a, const Mat& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw Error(Error::Code::dimension_mismatch, "gen_eig_pencil: dimension mismatch");
  require_symmetric(a, "gen_eig_pencil(a)");
  const Mat l = cholesky(b);  // not_positive_definite propagates
  const int n = a.rows;

  PencilResult out;
  if (n == 0) return out;

  double pmin = l(0, 0), pmax = l(0, 0);
  for (int i = 1; i < n; ++i) {
    pmin = std::min(pmin, l(i, i));
    pmax = std::max(pmax, l(i, i));
  }
  out.condition_flag = (pmin < kPivotRatioFlag * pmax);

  // C = L^-1 a L^-T by two triangular solves
  Mat x(n, n);  // x = L^-1 a
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      double s = a(i, j);
      for (int k = 0; k < i; ++k) s -= l(i, k) * x(k, j);
      x(i, j) = s / l(i, i);
    }
  }
  Mat c(n, n);  // c = x L^-T, i.e. solve c L^T = x row by row
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = x(i, j);
      for (int k = 0; k < j; ++k) s -= c(i, k) * l(j, k);
      c(i, j) = s / l(j, j);
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (c(i, j) + c(j, i));
      c(i, j) = v;
      c(j, i) = v;
    }

  SymEigResult eig = sym_eig(c);
  // roundoff tolerance scales with the largest eigenvalue magnitude
  double top = 0.0;
  for (double v : eig.values) top = std::max(top, std::abs(v));
  const double clamp = 1e-10 * std::max(1.0, top);
  for (double& v : eig.values) {
    if (v < 0.0) {
      if (v < -clamp)
        throw Error(Error::Code::not_positive_definite,
                    "gen_eig_pencil: pencil eigenvalue significantly negative; a is not PSD");
      v = 0.0;
    }
  }
  out.eigenvalues = std::move(eig.values);
  return out;
}

}  // namespace cksvar
