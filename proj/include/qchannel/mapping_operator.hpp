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

#ifndef QCHANNEL_MAPPING_OPERATOR_HPP_
#define QCHANNEL_MAPPING_OPERATOR_HPP_

#include <string>
#include <utility>
#include <vector>

#include "qchannel/matfun.hpp"

namespace qchannel {

/// Which quadratic constraints a MappingOperator claims to satisfy. Checked
/// by MappingOperator::check_flags.
struct OperatorFlags {
  bool orthonormal_rows = false;  // sum_s B_s B_s^T = 1
  bool canonical = false;         // Tr B_s B_t^T = 0 for s != t
  bool trace_preserving = false;  // sum_s B_s^T B_s = 1
};

/// A stack of n_s real d_out x d_in blocks b_{s,jk}: the Kraus operators of
/// a channel. n_s == 1 is the (partially) unitary case.
///
/// The flattened form used by every quadratic form in the library orders
/// components as s * d_out * d_in + j * d_in + k, i.e. block by block and
/// row by row inside each block.
class MappingOperator {
 public:
  MappingOperator() = default;

  MappingOperator(int n_s, int d_out, int d_in)
      : d_out_(d_out), d_in_(d_in), blocks_(n_s, Matrix::Zero(d_out, d_in)) {
    if (n_s < 1 || d_out < 1 || d_in < 1) {
      fail(ErrorCode::kBadShape, "MappingOperator dimensions must be positive");
    }
  }

  explicit MappingOperator(std::vector<Matrix> blocks) {
    if (blocks.empty()) fail(ErrorCode::kBadShape, "empty Kraus stack");
    d_out_ = static_cast<int>(blocks.front().rows());
    d_in_ = static_cast<int>(blocks.front().cols());
    for (const Matrix& b : blocks) {
      if (b.rows() != d_out_ || b.cols() != d_in_) {
        fail(ErrorCode::kBadShape, "Kraus blocks must share one shape");
      }
      if (!b.allFinite()) fail(ErrorCode::kNonFinite, "Kraus block entries");
    }
    blocks_ = std::move(blocks);
  }

  static MappingOperator single(const Matrix& u) {
    return MappingOperator(std::vector<Matrix>{u});
  }

  /// Inverse of flatten().
  static MappingOperator from_flat(const Vector& flat, int n_s, int d_out,
                                   int d_in) {
    if (flat.size() != static_cast<Eigen::Index>(n_s) * d_out * d_in) {
      fail(ErrorCode::kBadShape, "flat vector size does not match shape");
    }
    MappingOperator b(n_s, d_out, d_in);
    Eigen::Index idx = 0;
    for (int s = 0; s < n_s; ++s)
      for (int j = 0; j < d_out; ++j)
        for (int k = 0; k < d_in; ++k) b.blocks_[s](j, k) = flat(idx++);
    return b;
  }

  int n_s() const { return static_cast<int>(blocks_.size()); }
  int d_out() const { return d_out_; }
  int d_in() const { return d_in_; }
  Eigen::Index flat_size() const {
    return static_cast<Eigen::Index>(n_s()) * d_out_ * d_in_;
  }

  const Matrix& block(int s) const { return blocks_.at(s); }
  Matrix& block(int s) { return blocks_.at(s); }
  const std::vector<Matrix>& blocks() const { return blocks_; }

  Vector flatten() const {
    Vector flat(flat_size());
    Eigen::Index idx = 0;
    for (const Matrix& b : blocks_)
      for (int j = 0; j < d_out_; ++j)
        for (int k = 0; k < d_in_; ++k) flat(idx++) = b(j, k);
    return flat;
  }

  /// Sum of squares of all components.
  double squared_norm() const {
    double acc = 0.0;
    for (const Matrix& b : blocks_) acc += b.squaredNorm();
    return acc;
  }

  MappingOperator scaled(double factor) const {
    MappingOperator out = *this;
    for (Matrix& b : out.blocks_) b *= factor;
    return out;
  }

  OperatorFlags flags;

  /// Throws BadSpec when a set flag's constraint is violated beyond tol.
  void check_flags(double tol = 1e-10) const;

 private:
  int d_out_ = 0;
  int d_in_ = 0;
  std::vector<Matrix> blocks_;
};

/// G_{jj'} = sum_{s,k} b_{s,jk} b_{s,j'k}
inline Matrix row_gram(const MappingOperator& b) {
  Matrix g = Matrix::Zero(b.d_out(), b.d_out());
  for (const Matrix& blk : b.blocks()) g.noalias() += blk * blk.transpose();
  return g;
}

/// G_{kk'} = sum_{s,j} b_{s,jk} b_{s,jk'}
inline Matrix column_gram(const MappingOperator& b) {
  Matrix g = Matrix::Zero(b.d_in(), b.d_in());
  for (const Matrix& blk : b.blocks()) g.noalias() += blk.transpose() * blk;
  return g;
}

/// G_{ss'} = Tr B_s B_{s'}^T
inline Matrix kraus_gram(const MappingOperator& b) {
  const int n_s = b.n_s();
  Matrix g(n_s, n_s);
  for (int s = 0; s < n_s; ++s)
    for (int t = 0; t <= s; ++t)
      g(s, t) = g(t, s) = b.block(s).cwiseProduct(b.block(t)).sum();
  return g;
}

inline double orthonormality_violation(const MappingOperator& b) {
  return max_abs(row_gram(b) - Matrix::Identity(b.d_out(), b.d_out()));
}

inline double trace_preservation_violation(const MappingOperator& b) {
  return max_abs(column_gram(b) - Matrix::Identity(b.d_in(), b.d_in()));
}

/// Largest |Tr B_s B_t^T| over s != t.
inline double canonical_violation(const MappingOperator& b) {
  Matrix g = kraus_gram(b);
  g.diagonal().setZero();
  return max_abs(g);
}

inline void MappingOperator::check_flags(double tol) const {
  if (flags.orthonormal_rows && orthonormality_violation(*this) > tol) {
    fail(ErrorCode::kBadSpec, "orthonormal_rows flag set but rows are not");
  }
  if (flags.canonical && canonical_violation(*this) > tol) {
    fail(ErrorCode::kBadSpec, "canonical flag set but cross-traces nonzero");
  }
  if (flags.trace_preserving && trace_preservation_violation(*this) > tol) {
    fail(ErrorCode::kBadSpec, "trace_preserving flag set but violated");
  }
}

/// sum_s B_s a B_s^T
inline Matrix apply_channel(const MappingOperator& b, const Matrix& a) {
  if (a.rows() != b.d_in() || a.cols() != b.d_in()) {
    fail(ErrorCode::kBadShape, "apply_channel: input is " +
                                   std::to_string(a.rows()) + "x" +
                                   std::to_string(a.cols()) + ", channel takes " +
                                   std::to_string(b.d_in()));
  }
  Matrix out = Matrix::Zero(b.d_out(), b.d_out());
  for (const Matrix& blk : b.blocks()) out.noalias() += blk * a * blk.transpose();
  if (a == a.transpose()) out = 0.5 * (out + out.transpose()).eval();
  return out;
}

}  // namespace qchannel

#endif  // QCHANNEL_MAPPING_OPERATOR_HPP_
