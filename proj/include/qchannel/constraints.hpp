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

#ifndef QCHANNEL_CONSTRAINTS_HPP_
#define QCHANNEL_CONSTRAINTS_HPP_

#include <string_view>
#include <vector>

#include "qchannel/mapping_operator.hpp"

namespace qchannel {

enum class ConstraintOrigin {
  kOffdiag,        // sum_{s,k} b_{s,jk} b_{s,j'k} = 0, j != j'
  kDiagEq,         // row norms equal to each other
  kKrausOffdiag,   // Tr B_s B_t^T = 0
  kTracePreserve,  // sum_s B_s^T B_s = 1, linearized the same way
  kExternal,       // caller supplied, never regenerated
};

inline std::string_view origin_name(ConstraintOrigin o) {
  switch (o) {
    case ConstraintOrigin::kOffdiag: return "offdiag";
    case ConstraintOrigin::kDiagEq: return "diag_eq";
    case ConstraintOrigin::kKrausOffdiag: return "kraus_offdiag";
    case ConstraintOrigin::kTracePreserve: return "trace_preserve";
    case ConstraintOrigin::kExternal: return "external";
  }
  return "unknown";
}

enum class ConstraintMode { kOrthogonality, kTracePreserving, kBoth };
enum class Gauge { kCanonical, kNone };

/// Homogeneous linear constraints sum_{s,jk} C_{d;s,jk} b_{s,jk} = 0, one
/// flattened row per d (same component order as MappingOperator::flatten).
class ConstraintSet {
 public:
  ConstraintSet() = default;
  explicit ConstraintSet(Eigen::Index width) : rows_(0, width) {}

  Eigen::Index width() const { return rows_.cols(); }
  Eigen::Index size() const { return rows_.rows(); }
  bool empty() const { return rows_.rows() == 0; }

  const RectMatrix& rows() const { return rows_; }
  const std::vector<ConstraintOrigin>& origins() const { return origins_; }

  void add(const Vector& row, ConstraintOrigin origin) {
    if (rows_.cols() == 0 && rows_.rows() == 0) rows_.resize(0, row.size());
    if (row.size() != rows_.cols()) {
      fail(ErrorCode::kBadShape, "constraint row width mismatch");
    }
    if (!row.allFinite()) fail(ErrorCode::kNonFinite, "constraint row");
    rows_.conservativeResize(rows_.rows() + 1, Eigen::NoChange);
    rows_.row(rows_.rows() - 1) = row.transpose();
    origins_.push_back(origin);
  }

  void append(const ConstraintSet& other) {
    for (Eigen::Index d = 0; d < other.size(); ++d) {
      add(other.rows_.row(d).transpose(), other.origins_[d]);
    }
  }

  /// Only the rows carrying the given origin.
  ConstraintSet select(ConstraintOrigin origin) const {
    ConstraintSet out(width());
    for (Eigen::Index d = 0; d < size(); ++d) {
      if (origins_[d] == origin) out.add(rows_.row(d).transpose(), origin);
    }
    return out;
  }

  std::size_t count(ConstraintOrigin origin) const {
    std::size_t c = 0;
    for (ConstraintOrigin o : origins_) c += (o == origin);
    return c;
  }

  /// max_d |C_d . b| / |C_d|
  double max_violation(const MappingOperator& b) const {
    if (empty()) return 0.0;
    const Vector flat = b.flatten();
    double worst = 0.0;
    for (Eigen::Index d = 0; d < size(); ++d) {
      const double norm = rows_.row(d).norm();
      if (norm == 0.0) continue;
      worst = std::max(worst, std::abs(rows_.row(d).dot(flat)) / norm);
    }
    return worst;
  }

 private:
  RectMatrix rows_;
  std::vector<ConstraintOrigin> origins_;
};

/// Convergence-helper constraints: the first variation of the quadratic
/// constraints at the current iterate b, which restricts the next eigenstep
/// to the local tangent directions plus b itself.
///
/// Row counts: orthogonality gives D(D-1)/2 offdiag and D-1 diag_eq rows,
/// trace preservation gives n(n-1)/2 + n-1 rows, and the canonical gauge adds
/// N_s(N_s-1)/2 rows. Redundant rows are harmless; elimination keeps only
/// the rank.
inline ConstraintSet helper_constraints(const MappingOperator& b,
                                        ConstraintMode mode,
                                        Gauge gauge = Gauge::kCanonical) {
  const int n_s = b.n_s();
  const int dd = b.d_out();
  const int n = b.d_in();
  const Eigen::Index width = b.flat_size();
  auto at = [dd, n](int s, int j, int k) -> Eigen::Index {
    return (static_cast<Eigen::Index>(s) * dd + j) * n + k;
  };
  ConstraintSet out(width);

  if (mode != ConstraintMode::kTracePreserving) {
    for (int j = 0; j < dd; ++j) {
      for (int jp = 0; jp < j; ++jp) {
        Vector row = Vector::Zero(width);
        for (int s = 0; s < n_s; ++s)
          for (int k = 0; k < n; ++k) {
            row(at(s, j, k)) = b.block(s)(jp, k);
            row(at(s, jp, k)) = b.block(s)(j, k);
          }
        out.add(row, ConstraintOrigin::kOffdiag);
      }
    }
    for (int j = 1; j < dd; ++j) {
      Vector row = Vector::Zero(width);
      for (int s = 0; s < n_s; ++s)
        for (int k = 0; k < n; ++k) {
          row(at(s, j, k)) = b.block(s)(j, k);
          row(at(s, j - 1, k)) = -b.block(s)(j - 1, k);
        }
      out.add(row, ConstraintOrigin::kDiagEq);
    }
  }

  if (mode != ConstraintMode::kOrthogonality) {
    for (int k = 0; k < n; ++k) {
      for (int kp = 0; kp < k; ++kp) {
        Vector row = Vector::Zero(width);
        for (int s = 0; s < n_s; ++s)
          for (int j = 0; j < dd; ++j) {
            row(at(s, j, k)) = b.block(s)(j, kp);
            row(at(s, j, kp)) = b.block(s)(j, k);
          }
        out.add(row, ConstraintOrigin::kTracePreserve);
      }
    }
    for (int k = 1; k < n; ++k) {
      Vector row = Vector::Zero(width);
      for (int s = 0; s < n_s; ++s)
        for (int j = 0; j < dd; ++j) {
          row(at(s, j, k)) = b.block(s)(j, k);
          row(at(s, j, k - 1)) = -b.block(s)(j, k - 1);
        }
      out.add(row, ConstraintOrigin::kTracePreserve);
    }
  }

  if (gauge == Gauge::kCanonical) {
    for (int s = 0; s < n_s; ++s) {
      for (int sp = 0; sp < s; ++sp) {
        Vector row = Vector::Zero(width);
        for (int j = 0; j < dd; ++j)
          for (int k = 0; k < n; ++k) {
            row(at(s, j, k)) = b.block(sp)(j, k);
            row(at(sp, j, k)) = b.block(s)(j, k);
          }
        out.add(row, ConstraintOrigin::kKrausOffdiag);
      }
    }
  }
  return out;
}

}  // namespace qchannel

#endif  // QCHANNEL_CONSTRAINTS_HPP_
