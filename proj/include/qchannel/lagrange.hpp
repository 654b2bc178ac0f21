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

// Lagrange multipliers of the quadratic constraints, fitted so that the
// variation of the Lagrangian at a given iterate is as small as possible.

#ifndef QCHANNEL_LAGRANGE_HPP_
#define QCHANNEL_LAGRANGE_HPP_

#include <optional>
#include <vector>

#include "qchannel/constraints.hpp"
#include "qchannel/superop.hpp"

namespace qchannel {

/// lambda couples rows (sum_s B_s B_s^T = 1), lambda_tp couples columns
/// (sum_s B_s^T B_s = 1) and nu couples Kraus blocks (Tr B_s B_t^T = 0).
struct LagrangeMultipliers {
  Matrix lambda;                    // D x D symmetric, zero when unused
  std::optional<Matrix> lambda_tp;  // n x n symmetric, trace modes only
  Matrix nu;                        // N_s x N_s symmetric, zero diagonal

  static LagrangeMultipliers zero(int n_s, int d_out, int d_in,
                                  ConstraintMode mode) {
    LagrangeMultipliers lm;
    lm.lambda = Matrix::Zero(d_out, d_out);
    if (mode != ConstraintMode::kOrthogonality) {
      lm.lambda_tp = Matrix::Zero(d_in, d_in);
    }
    lm.nu = Matrix::Zero(n_s, n_s);
    return lm;
  }

  /// Tr lambda + Tr lambda_tp; equals the total fidelity at a stationary
  /// feasible point.
  double trace() const {
    return lambda.trace() + (lambda_tp ? lambda_tp->trace() : 0.0);
  }
};

namespace detail {

inline Eigen::Index tri_index(int i, int j) {  // j <= i
  return static_cast<Eigen::Index>(i) * (i + 1) / 2 + j;
}

// Multiplier part of the variation: sum_j' lambda_{jj'} b_{s,j'k}
// + sum_k' b_{s,jk'} lambda_tp_{k'k} + sum_s' nu_{ss'} b_{s',jk}.
inline Vector multiplier_action(const MappingOperator& b,
                                const LagrangeMultipliers& lm) {
  std::vector<Matrix> out;
  for (int s = 0; s < b.n_s(); ++s) {
    Matrix acc = lm.lambda * b.block(s);
    if (lm.lambda_tp) acc += b.block(s) * *lm.lambda_tp;
    for (int t = 0; t < b.n_s(); ++t) {
      if (t != s && lm.nu(s, t) != 0.0) acc += lm.nu(s, t) * b.block(t);
    }
    out.push_back(std::move(acc));
  }
  return MappingOperator(std::move(out)).flatten();
}

inline Vector superop_action(const Superoperator& s, const MappingOperator& b) {
  Vector out(b.flat_size());
  const Eigen::Index blk = static_cast<Eigen::Index>(b.d_out()) * b.d_in();
  const Vector flat = b.flatten();
  for (int k = 0; k < b.n_s(); ++k) {
    out.segment(k * blk, blk) = s.matrix() * flat.segment(k * blk, blk);
  }
  return out;
}

// Projector onto the complement of the external rows, or nothing.
inline std::optional<Matrix> external_projector(const ConstraintSet* external,
                                                Eigen::Index width) {
  if (external == nullptr || external->empty()) return std::nullopt;
  if (external->width() != width) {
    fail(ErrorCode::kBadShape, "external constraints width mismatch");
  }
  const RectMatrix& c = external->rows();
  const Matrix ortho = inv_sqrt(SymMatrix(c * c.transpose())).matrix() * c;
  return Matrix(Matrix::Identity(width, width) - ortho.transpose() * ortho);
}

}  // namespace detail

/// The Lagrangian variation S b - (multiplier terms), flattened, with any
/// component along external constraint rows removed (those rows carry their
/// own multipliers).
inline Vector lagrange_variation(const Superoperator& s,
                                 const MappingOperator& b,
                                 const LagrangeMultipliers& lm,
                                 const ConstraintSet* external = nullptr) {
  detail::check_shape(s, b);
  Vector r = detail::superop_action(s, b) - detail::multiplier_action(b, lm);
  if (auto p = detail::external_projector(external, b.flat_size())) r = *p * r;
  return r;
}

/// L2 norm of lagrange_variation.
inline double residual(const Superoperator& s, const MappingOperator& b,
                       const LagrangeMultipliers& lm,
                       const ConstraintSet* external = nullptr) {
  return lagrange_variation(s, b, lm, external).norm();
}

/// Least-squares multipliers at b. Unknowns are the independent entries of
/// lambda (index i(i+1)/2 + j, j <= i), lambda_tp likewise and nu
/// (index s(s-1)/2 + s', s' < s).
///
/// With both row and column constraints, lambda = cI and lambda_tp = -cI act
/// identically, so the last diagonal entry of lambda_tp is pinned to zero.
/// At a square orthogonal b every row condition is also a column condition
/// and the system stays singular; solve uses the minimum-norm solution there.
/// A rank-deficient system throws SingularSystem unless `min_norm` is set,
/// in which case the minimum-norm solution is returned.
inline LagrangeMultipliers lagrange_multipliers(
    const Superoperator& s, const MappingOperator& b,
    ConstraintMode mode = ConstraintMode::kOrthogonality,
    const ConstraintSet* external = nullptr, bool min_norm = false) {
  detail::check_shape(s, b);
  const int n_s = b.n_s();
  const int dd = b.d_out();
  const int n = b.d_in();
  const bool rows = mode != ConstraintMode::kTracePreserving;
  const bool cols = mode != ConstraintMode::kOrthogonality;
  const Eigen::Index n_lambda = rows ? detail::tri_index(dd, 0) : 0;
  Eigen::Index n_tp = cols ? detail::tri_index(n, 0) : 0;
  if (rows && cols) --n_tp;
  const Eigen::Index n_nu = detail::tri_index(n_s - 1, 0);
  const Eigen::Index unknowns = n_lambda + n_tp + n_nu;

  LagrangeMultipliers lm = LagrangeMultipliers::zero(n_s, dd, n, mode);
  if (unknowns == 0) return lm;

  const Eigen::Index width = b.flat_size();
  auto at = [dd, n](int sb, int j, int k) -> Eigen::Index {
    return (static_cast<Eigen::Index>(sb) * dd + j) * n + k;
  };
  Matrix a = Matrix::Zero(width, unknowns);
  if (rows) {
    for (int i = 0; i < dd; ++i)
      for (int j = 0; j <= i; ++j) {
        const Eigen::Index c = detail::tri_index(i, j);
        for (int sb = 0; sb < n_s; ++sb)
          for (int k = 0; k < n; ++k) {
            a(at(sb, i, k), c) += b.block(sb)(j, k);
            if (i != j) a(at(sb, j, k), c) += b.block(sb)(i, k);
          }
      }
  }
  if (cols) {
    for (int k = 0; k < n; ++k)
      for (int kp = 0; kp <= k; ++kp) {
        const Eigen::Index r = detail::tri_index(k, kp);
        if (r >= n_tp) continue;
        const Eigen::Index c = n_lambda + r;
        for (int sb = 0; sb < n_s; ++sb)
          for (int j = 0; j < dd; ++j) {
            a(at(sb, j, k), c) += b.block(sb)(j, kp);
            if (k != kp) a(at(sb, j, kp), c) += b.block(sb)(j, k);
          }
      }
  }
  for (int sb = 1; sb < n_s; ++sb)
    for (int t = 0; t < sb; ++t) {
      const Eigen::Index c = n_lambda + n_tp + detail::tri_index(sb - 1, t);
      for (int j = 0; j < dd; ++j)
        for (int k = 0; k < n; ++k) {
          a(at(sb, j, k), c) += b.block(t)(j, k);
          a(at(t, j, k), c) += b.block(sb)(j, k);
        }
    }

  Vector rhs = detail::superop_action(s, b);
  if (auto p = detail::external_projector(external, width)) {
    a = *p * a;
    rhs = *p * rhs;
  }

  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
  cod.setThreshold(1e-12);
  if (cod.rank() < unknowns && !min_norm) {
    fail(ErrorCode::kSingularSystem,
         "multiplier system has rank " + std::to_string(cod.rank()) + " of " +
             std::to_string(unknowns));
  }
  const Vector x = cod.solve(rhs);

  if (rows) {
    for (int i = 0; i < dd; ++i)
      for (int j = 0; j <= i; ++j)
        lm.lambda(i, j) = lm.lambda(j, i) = x(detail::tri_index(i, j));
  }
  if (cols) {
    Matrix& tp = *lm.lambda_tp;
    for (int k = 0; k < n; ++k)
      for (int kp = 0; kp <= k; ++kp) {
        const Eigen::Index r = detail::tri_index(k, kp);
        tp(k, kp) = tp(kp, k) = r < n_tp ? x(n_lambda + r) : 0.0;
      }
  }
  for (int sb = 1; sb < n_s; ++sb)
    for (int t = 0; t < sb; ++t)
      lm.nu(sb, t) = lm.nu(t, sb) =
          x(n_lambda + n_tp + detail::tri_index(sb - 1, t));
  return lm;
}

/// n_s = 1 closed form lambda = sym(U (S U)^T); matches the least-squares
/// multipliers whenever U has orthonormal rows.
inline Matrix lambda_closed_form(const Superoperator& s,
                                 const MappingOperator& u) {
  detail::check_shape(s, u);
  if (u.n_s() != 1) fail(ErrorCode::kBadShape, "closed form needs n_s = 1");
  const Matrix su = apply_superop(s, u).block(0);
  const Matrix l = u.block(0) * su.transpose();
  return 0.5 * (l + l.transpose());
}

}  // namespace qchannel

#endif  // QCHANNEL_LAGRANGE_HPP_
