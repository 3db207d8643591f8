#pragma once

#include <vector>

#include "cksvar/mat.hpp"

namespace cksvar {

struct SymEigResult {
  std::vector<double> values;  // ascending
  Mat vectors;                 // orthonormal columns, vectors.col(i) <-> values[i]
};

struct PencilResult {
  std::vector<double> eigenvalues;  // ascending, one per pencil dimension
  bool condition_flag = false;      // definite factor was ill-conditioned
};

/// Cholesky factor L with L L' = m, for symmetric positive definite m.
/// Throws not_positive_definite when a pivot is <= 0.
Mat cholesky(const Mat& m);

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Intended for the tiny dimensions used here (<= ~50); robustness over speed.
SymEigResult sym_eig(const Mat& m);

/// All solutions of det(lambda * b - a) = 0 for symmetric a (PSD) and b (PD),
/// via b = L L' reduction to a standard symmetric problem on L^-1 a L^-T.
/// Eigenvalues in [-1e-10 * scale, 0) are clamped to zero; condition_flag is
/// set when min/max Cholesky pivot of b falls below 1e-12.
PencilResult gen_eig_pencil(const Mat& a, const Mat& b);

}  // namespace cksvar
