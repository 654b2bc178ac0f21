/* Copyright 2026 The qchannel Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Dense real symmetric matrix utilities: eigendecomposition, PSD matrix
// functions, the generalized symmetric eigenproblem and null-space bases of
// homogeneous linear constraint sets.

#ifndef QCHANNEL_MATFUN_HPP_
#define QCHANNEL_MATFUN_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qchannel/errors.hpp"

namespace qchannel {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
/// Rectangular real matrix (constraint rows, elimination bases).
using RectMatrix = Eigen::MatrixXd;

inline bool all_finite(const Matrix& a) { return a.allFinite(); }

inline double max_abs(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

/// Square real matrix that is symmetric by construction: the input is
/// replaced with (A + A^T) / 2, so entries(i, j) == entries(j, i) exactly.
class SymMatrix {
 public:
  SymMatrix() = default;

  explicit SymMatrix(const Matrix& a) {
    if (a.rows() != a.cols()) {
      fail(ErrorCode::kBadShape, "SymMatrix requires a square matrix, got " +
                                     std::to_string(a.rows()) + "x" +
                                     std::to_string(a.cols()));
    }
    if (!a.allFinite()) fail(ErrorCode::kNonFinite, "SymMatrix entries");
    m_ = 0.5 * (a + a.transpose());
  }

  static SymMatrix identity(Eigen::Index dim) {
    return SymMatrix(Matrix::Identity(dim, dim));
  }
  static SymMatrix zero(Eigen::Index dim) {
    return SymMatrix(Matrix::Zero(dim, dim));
  }

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

 private:
  Matrix m_;
};

/// Eigenpairs in ascending eigenvalue order. Column i of `vectors` belongs to
/// values(i).
struct Spectrum {
  Vector values;
  Matrix vectors;
};

namespace detail {

// Makes each eigenvector's largest-magnitude component positive so results
// are reproducible regardless of the solver's sign choice.
inline void normalize_signs(Matrix& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::Index imax = 0;
    vectors.col(c).cwiseAbs().maxCoeff(&imax);
    if (vectors(imax, c) < 0) vectors.col(c) *= -1.0;
  }
}

inline double spectral_scale(const Vector& values) {
  return values.size() == 0 ? 0.0 : values.cwiseAbs().maxCoeff();
}

}  // namespace detail

inline Spectrum eigh(const SymMatrix& a) {
  if (!a.matrix().allFinite()) fail(ErrorCode::kNonFinite, "eigh input");
  if (a.dim() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::kNonFinite, "eigh: eigensolver did not converge");
  }
  Spectrum out{solver.eigenvalues(), solver.eigenvectors()};
  detail::normalize_signs(out.vectors);
  return out;
}

inline Matrix reconstruct(const Spectrum& spec) {
  return spec.vectors * spec.values.asDiagonal() * spec.vectors.transpose();
}

namespace detail {

// Applies f to the spectrum of a PSD matrix after checking it really is PSD
// up to the tolerated negative slack.
template <typename F>
SymMatrix psd_function(const SymMatrix& a, const char* what, F&& f) {
  Spectrum spec = eigh(a);
  if (spec.values.size() == 0) return a;
  const double scale = spectral_scale(spec.values);
  const double min_eig = spec.values.minCoeff();
  if (min_eig < -1e-8 * std::max(scale, 1e-300)) {
    fail(ErrorCode::kNotPSD, std::string(what) + ": min eigenvalue " +
                                 std::to_string(min_eig));
  }
  for (Eigen::Index i = 0; i < spec.values.size(); ++i) {
    spec.values(i) = f(spec.values(i));
  }
  return SymMatrix(reconstruct(spec));
}

}  // namespace detail

/// Principal square root of a PSD matrix. Slightly negative eigenvalues
/// (round-off) are replaced by `floor` before the root is taken, and so are
/// eigenvalues within 64 ulp of zero relative to the largest one; their
/// roots (~1e-8) would otherwise swamp fidelity sums of rank-deficient
/// states.
inline SymMatrix sqrtm_psd(const SymMatrix& a, double floor = 0.0) {
  const double scale = a.dim() == 0 ? 0.0 : max_abs(a.matrix()) * a.dim();
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * scale;
  return detail::psd_function(a, "sqrtm_psd", [floor, noise](double v) {
    return std::sqrt(v <= noise ? floor : v);
  });
}

/// Matrix logarithm of a PSD matrix with eigenvalues clamped to
/// `eigen_floor` from below.
inline SymMatrix logm_psd(const SymMatrix& a, double eigen_floor = 1e-12) {
  return detail::psd_function(a, "logm_psd", [eigen_floor](double v) {
    return std::log(std::max(v, eigen_floor));
  });
}

/// a^p for PSD a, with a^0 = 1. Eigenvalues at the sqrtm_psd noise level
/// are treated as zero, so powm_psd(a, 0.5) agrees with sqrtm_psd(a).
inline SymMatrix powm_psd(const SymMatrix& a, double p) {
  const double scale = a.dim() == 0 ? 0.0 : max_abs(a.matrix()) * a.dim();
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * scale;
  return detail::psd_function(a, "powm_psd", [p, noise](double v) {
    if (p == 0.0) return 1.0;
    return v <= noise ? 0.0 : std::pow(v, p);
  });
}

/// G^{-1/2} on the positive branch. Throws DegenerateGram when the smallest
/// eigenvalue is not above degeneracy_tol times the largest one.
inline SymMatrix inv_sqrt(const SymMatrix& g, double degeneracy_tol = 1e-12) {
  Spectrum spec = eigh(g);
  if (spec.values.size() == 0) return g;
  const double lo = spec.values.minCoeff();
  const double hi = spec.values.maxCoeff();
  if (!(hi > 0.0) || !(lo > degeneracy_tol * hi)) {
    fail(ErrorCode::kDegenerateGram,
         "Gram eigenvalues [" + std::to_string(lo) + ", " + std::to_string(hi) +
             "] of dimension " + std::to_string(g.dim()));
  }
  spec.values = spec.values.cwiseSqrt().cwiseInverse();
  return SymMatrix(reconstruct(spec));
}

/// Generalized problem num * v = mu * den * v with den SPD. Eigenvectors are
/// den-orthonormal, eigenvalues ascending.
inline Spectrum gen_sym_eig(const SymMatrix& num, const SymMatrix& den) {
  if (num.dim() != den.dim()) {
    fail(ErrorCode::kBadShape, "gen_sym_eig dimension mismatch");
  }
  if (num.dim() == 0) return {};
  Spectrum den_spec = eigh(den);
  const double lo = den_spec.values.minCoeff();
  const double hi = den_spec.values.maxCoeff();
  if (!(hi > 0.0) || !(lo > 1e-12 * hi)) {
    fail(ErrorCode::kDegenerateGram, "gen_sym_eig: denominator is not SPD");
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> solver(
      num.matrix(), den.matrix(), Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::kDegenerateGram, "gen_sym_eig: solver failed");
  }
  Spectrum out{solver.eigenvalues(), solver.eigenvectors()};
  detail::normalize_signs(out.vectors);
  return out;
}

/// Basis of {x : constraints * x = 0} from a fully pivoted LU factorization.
/// Columns are linearly independent; their count is cols - rank. An empty
/// constraint set yields the identity.
inline RectMatrix null_space_basis(const RectMatrix& constraints,
                                   double rank_tol = 1e-11) {
  const Eigen::Index dim = constraints.cols();
  if (constraints.rows() == 0 || max_abs(constraints) == 0.0) {
    return RectMatrix::Identity(dim, dim);
  }
  if (!constraints.allFinite()) {
    fail(ErrorCode::kNonFinite, "null_space_basis constraints");
  }
  Eigen::FullPivLU<RectMatrix> lu(constraints);
  lu.setThreshold(rank_tol);
  if (lu.rank() == dim) return RectMatrix(dim, 0);
  return lu.kernel();
}

/// Numerical rank used when counting retained constraints.
inline Eigen::Index constraint_rank(const RectMatrix& constraints,
                                    double rank_tol = 1e-11) {
  if (constraints.rows() == 0 || max_abs(constraints) == 0.0) return 0;
  Eigen::FullPivLU<RectMatrix> lu(constraints);
  lu.setThreshold(rank_tol);
  return lu.rank();
}

}  // namespace qchannel

#endif  // QCHANNEL_MATFUN_HPP_
