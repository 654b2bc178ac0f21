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

// Adjustments that move an iterate onto the quadratic constraint surfaces.
// The orthogonal and trace-preserving ones change the channel (minimal
// disturbance G^{-1/2} maps); the canonical one is a pure gauge transform.

#ifndef QCHANNEL_ADJUST_HPP_
#define QCHANNEL_ADJUST_HPP_

#include <vector>

#include "qchannel/constraints.hpp"

namespace qchannel {

/// b_s -> G^{-1/2} b_s with G = sum_s B_s B_s^T; the same left factor for
/// every Kraus block.
inline MappingOperator adjust_orthogonal(const MappingOperator& b,
                                         double degeneracy_tol = 1e-12) {
  const Matrix r = inv_sqrt(SymMatrix(row_gram(b)), degeneracy_tol).matrix();
  std::vector<Matrix> blocks;
  blocks.reserve(b.n_s());
  for (const Matrix& blk : b.blocks()) blocks.push_back(r * blk);
  MappingOperator out(std::move(blocks));
  out.flags = b.flags;
  out.flags.orthonormal_rows = true;
  return out;
}

/// b_s -> b_s G^{-1/2} with G = sum_s B_s^T B_s. Throws DegenerateGram when
/// the stack is too shallow to preserve the trace (n_s < n - D + 1).
inline MappingOperator adjust_trace_preserving(const MappingOperator& b,
                                               double degeneracy_tol = 1e-12) {
  const Matrix r = inv_sqrt(SymMatrix(column_gram(b)), degeneracy_tol).matrix();
  std::vector<Matrix> blocks;
  blocks.reserve(b.n_s());
  for (const Matrix& blk : b.blocks()) blocks.push_back(blk * r);
  MappingOperator out(std::move(blocks));
  out.flags = b.flags;
  out.flags.trace_preserving = true;
  return out;
}

/// Rotates the Kraus stack into the eigenbasis of G_{ss'} = Tr B_s B_s'^T,
/// which zeroes all cross-traces and leaves every sum_s B_s X B_s^T (hence
/// any total fidelity) unchanged. Output blocks are ordered by decreasing
/// norm; zero Gram eigenvalues give zero blocks.
inline MappingOperator adjust_canonical(const MappingOperator& b) {
  const int n_s = b.n_s();
  if (n_s == 1) return b;
  const Spectrum spec = eigh(SymMatrix(kraus_gram(b)));
  std::vector<Matrix> blocks;
  blocks.reserve(n_s);
  for (int s = 0; s < n_s; ++s) {
    const Eigen::Index col = n_s - 1 - s;
    Matrix acc = Matrix::Zero(b.d_out(), b.d_in());
    for (int sp = 0; sp < n_s; ++sp) acc += spec.vectors(sp, col) * b.block(sp);
    blocks.push_back(std::move(acc));
  }
  MappingOperator out(std::move(blocks));
  out.flags = b.flags;
  out.flags.canonical = true;
  return out;
}

struct ExternalAdjustment {
  MappingOperator b;
  double quadratic_residual = 0.0;  // orthonormality (or trace) violation
  double external_residual = 0.0;   // ConstraintSet::max_violation
};

/// Alternates the quadratic adjustment with removal of the projections on
/// the (orthonormalized) external constraint rows for `inner_iterations`
/// rounds. The last step of every round is the projection, so the external
/// rows hold to round-off and the quadratic constraints approximately.
inline ExternalAdjustment adjust_with_external(
    const MappingOperator& b, const ConstraintSet& external,
    int inner_iterations,
    ConstraintMode mode = ConstraintMode::kOrthogonality) {
  auto quadratic = [mode](const MappingOperator& x) {
    MappingOperator y = x;
    if (mode != ConstraintMode::kTracePreserving) y = adjust_orthogonal(y);
    if (mode != ConstraintMode::kOrthogonality) y = adjust_trace_preserving(y);
    return y;
  };
  auto quadratic_residual = [mode](const MappingOperator& x) {
    double r = 0.0;
    if (mode != ConstraintMode::kTracePreserving)
      r = std::max(r, orthonormality_violation(x));
    if (mode != ConstraintMode::kOrthogonality)
      r = std::max(r, trace_preservation_violation(x));
    return r;
  };

  if (external.empty()) {
    MappingOperator y = quadratic(b);
    return {y, quadratic_residual(y), 0.0};
  }
  if (external.width() != b.flat_size()) {
    fail(ErrorCode::kBadShape, "external constraints width mismatch");
  }
  if (inner_iterations < 1) inner_iterations = 1;

  // Orthonormal rows: C~ = G^{-1/2} C with G_{dd'} = C_d . C_d'.
  const RectMatrix& c = external.rows();
  const Matrix ortho =
      inv_sqrt(SymMatrix(c * c.transpose())).matrix() * c;

  MappingOperator y = b;
  for (int it = 0; it < inner_iterations; ++it) {
    y = quadratic(y);
    Vector flat = y.flatten();
    flat -= ortho.transpose() * (ortho * flat);
    MappingOperator next =
        MappingOperator::from_flat(flat, y.n_s(), y.d_out(), y.d_in());
    next.flags = y.flags;
    y = std::move(next);
  }
  return {y, quadratic_residual(y), external.max_violation(y)};
}

}  // namespace qchannel

#endif  // QCHANNEL_ADJUST_HPP_
