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

#ifndef QCHANNEL_SUPEROP_HPP_
#define QCHANNEL_SUPEROP_HPP_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qchannel/states.hpp"

namespace qchannel {

/// How a dataset record (rho, varrho, omega) contributes to S.
struct SuperopKind {
  enum class Tag {
    kPlain,            // omega varrho (x) rho
    kSqrt,             // omega sqrt(varrho) (x) sqrt(rho)
    kLogEntropy,       // omega varrho (x) ln rho
    kVecNormalized,    // omega / (|varrho|_F |rho|_F) varrho (x) rho
    kNrho2Normalized,  // omega / Tr varrho^2 varrho (x) rho
    kPureVectors,      // omega (f (x) x)(f (x) x)^T
    kPower,            // omega varrho^p (x) rho^q, p + q = 1
  };
  Tag tag = Tag::kPlain;
  double p = 1.0;
  double q = 1.0;

  static SuperopKind plain() { return {Tag::kPlain}; }
  static SuperopKind sqrt() { return {Tag::kSqrt}; }
  static SuperopKind log_entropy() { return {Tag::kLogEntropy}; }
  static SuperopKind vec_normalized() { return {Tag::kVecNormalized}; }
  static SuperopKind nrho2_normalized() { return {Tag::kNrho2Normalized}; }
  static SuperopKind pure_vectors() { return {Tag::kPureVectors}; }

  /// Requires p, q >= 0 and p + q = 1.
  static SuperopKind power(double p, double q) {
    if (p < 0.0 || q < 0.0 || std::abs(p + q - 1.0) > 1e-12) {
      fail(ErrorCode::kBadSpec, "power kind needs p, q >= 0 with p + q = 1");
    }
    return {Tag::kPower, p, q};
  }

  /// Reports built from log_entropy are not observation counts.
  bool counts_observations() const { return tag != Tag::kLogEntropy; }
};

inline std::string kind_name(const SuperopKind& k) {
  using T = SuperopKind::Tag;
  switch (k.tag) {
    case T::kPlain: return "plain";
    case T::kSqrt: return "sqrt";
    case T::kLogEntropy: return "log_entropy";
    case T::kVecNormalized: return "vec_normalized";
    case T::kNrho2Normalized: return "nrho2_normalized";
    case T::kPureVectors: return "pure_vectors";
    case T::kPower:
      return "power(" + std::to_string(k.p) + "," + std::to_string(k.q) + ")";
  }
  return "unknown";
}

inline SuperopKind parse_kind(std::string_view name) {
  using T = SuperopKind::Tag;
  for (T t : {T::kPlain, T::kSqrt, T::kLogEntropy, T::kVecNormalized,
              T::kNrho2Normalized, T::kPureVectors}) {
    if (kind_name({t}) == name) return {t};
  }
  if (name.rfind("power(", 0) == 0 && name.back() == ')') {
    const std::string body(name.substr(6, name.size() - 7));
    const auto comma = body.find(',');
    if (comma != std::string::npos) {
      return SuperopKind::power(std::stod(body.substr(0, comma)),
                                std::stod(body.substr(comma + 1)));
    }
  }
  fail(ErrorCode::kBadSpec, "unknown superoperator kind '" + std::string(name) + "'");
}

/// Superoperator matching a closeness proxy, when one exists.
inline SuperopKind kind_for_proxy(Closeness proxy) {
  switch (proxy) {
    case Closeness::kRhoSigma: return SuperopKind::plain();
    case Closeness::kSqrt: return SuperopKind::sqrt();
    case Closeness::kVec: return SuperopKind::vec_normalized();
    case Closeness::kNrho2: return SuperopKind::nrho2_normalized();
    case Closeness::kKl: return SuperopKind::log_entropy();
    default:
      fail(ErrorCode::kBadSpec, "closeness '" +
                                    std::string(closeness_name(proxy)) +
                                    "' is not quadratic in the channel");
  }
}

/// S_{jk;j'k'} stored as a symmetric (Dn) x (Dn) matrix over the flattened
/// index j * n + k.
class Superoperator {
 public:
  Superoperator() = default;
  Superoperator(int d_out, int d_in, SuperopKind kind, const Matrix& m)
      : d_out_(d_out), d_in_(d_in), kind_(kind) {
    if (m.rows() != static_cast<Eigen::Index>(d_out) * d_in) {
      fail(ErrorCode::kBadShape, "superoperator matrix size");
    }
    m_ = SymMatrix(m).matrix();
  }

  int d_out() const { return d_out_; }
  int d_in() const { return d_in_; }
  Eigen::Index flat_dim() const { return m_.rows(); }
  const SuperopKind& kind() const { return kind_; }
  const Matrix& matrix() const { return m_; }

  /// S_{jk;j'k'}
  double operator()(int j, int k, int jp, int kp) const {
    return m_(j * d_in_ + k, jp * d_in_ + kp);
  }

 private:
  int d_out_ = 0;
  int d_in_ = 0;
  SuperopKind kind_;
  Matrix m_;
};

namespace detail {

// a (x) b with index (j * b.rows() + k, j' * b.rows() + k').
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Pairwise reduction over [lo, hi); fixed split points keep the result
// independent of how the terms are scheduled.
template <typename Term>
Matrix pairwise_sum(std::size_t lo, std::size_t hi, Eigen::Index dim,
                    const Term& term) {
  if (hi - lo == 0) return Matrix::Zero(dim, dim);
  if (hi - lo == 1) return term(lo);
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(lo, mid, dim, term) + pairwise_sum(mid, hi, dim, term);
}

}  // namespace detail

inline Superoperator build_superop(const MappingDataset& dataset,
                                   SuperopKind kind) {
  using T = SuperopKind::Tag;
  const int n = dataset.n();
  const int dd = dataset.d();
  const Eigen::Index dim = static_cast<Eigen::Index>(dd) * n;
  auto term = [&](std::size_t l) -> Matrix {
    const MappingRecord& rec = dataset[l];
    const Matrix& v = rec.varrho.matrix();
    const Matrix& r = rec.rho.matrix();
    switch (kind.tag) {
      case T::kPlain:
      case T::kPureVectors:
        return rec.omega * detail::kron(v, r);
      case T::kSqrt:
        return rec.omega * detail::kron(sqrtm_psd(rec.varrho.sym()).matrix(),
                                        sqrtm_psd(rec.rho.sym()).matrix());
      case T::kLogEntropy:
        return rec.omega * detail::kron(v, logm_psd(rec.rho.sym()).matrix());
      case T::kVecNormalized:
        return rec.omega / (v.norm() * r.norm()) * detail::kron(v, r);
      case T::kNrho2Normalized:
        return rec.omega / v.squaredNorm() * detail::kron(v, r);
      case T::kPower:
        return rec.omega *
               detail::kron(powm_psd(rec.varrho.sym(), kind.p).matrix(),
                            powm_psd(rec.rho.sym(), kind.q).matrix());
    }
    return Matrix::Zero(dim, dim);
  };
  return Superoperator(dd, n, kind,
                       detail::pairwise_sum(0, dataset.size(), dim, term));
}

/// Pure-state form sum_l omega_l (f_l (x) x_l)(f_l (x) x_l)^T.
inline Superoperator build_superop_from_vectors(const std::vector<Vector>& f,
                                                const std::vector<Vector>& x,
                                                const std::vector<double>& omega) {
  if (f.empty() || f.size() != x.size() || f.size() != omega.size()) {
    fail(ErrorCode::kBadShape, "build_superop_from_vectors: list sizes");
  }
  const Eigen::Index dd = f.front().size();
  const Eigen::Index n = x.front().size();
  auto term = [&](std::size_t l) -> Matrix {
    if (f[l].size() != dd || x[l].size() != n) {
      fail(ErrorCode::kBadShape, "build_superop_from_vectors: vector sizes");
    }
    Vector fx(dd * n);
    for (Eigen::Index j = 0; j < dd; ++j) fx.segment(j * n, n) = f[l](j) * x[l];
    return omega[l] * fx * fx.transpose();
  };
  return Superoperator(static_cast<int>(dd), static_cast<int>(n),
                       SuperopKind::pure_vectors(),
                       detail::pairwise_sum(0, f.size(), dd * n, term));
}

namespace detail {

inline void check_shape(const Superoperator& s, const MappingOperator& b) {
  if (b.d_out() != s.d_out() || b.d_in() != s.d_in()) {
    fail(ErrorCode::kBadShape, "operator shape does not match superoperator");
  }
}

inline Vector flat_block(const MappingOperator& b, int s) {
  const Matrix& blk = b.block(s);
  Vector v(blk.size());
  for (Eigen::Index j = 0; j < blk.rows(); ++j)
    v.segment(j * blk.cols(), blk.cols()) = blk.row(j).transpose();
  return v;
}

}  // namespace detail

/// sum_s <B_s|S|B_s>
inline double total_fidelity(const Superoperator& s, const MappingOperator& b) {
  detail::check_shape(s, b);
  double acc = 0.0;
  for (int k = 0; k < b.n_s(); ++k) {
    const Vector v = detail::flat_block(b, k);
    acc += v.dot(s.matrix() * v);
  }
  return acc;
}

/// (S U)_{jk} = sum S_{jk;j'k'} u_{j'k'} for a single-block operator.
inline MappingOperator apply_superop(const Superoperator& s,
                                     const MappingOperator& u) {
  detail::check_shape(s, u);
  if (u.n_s() != 1) fail(ErrorCode::kBadShape, "apply_superop needs n_s = 1");
  return MappingOperator::from_flat(s.matrix() * u.flatten(), 1, u.d_out(),
                                    u.d_in());
}

/// <A|S|B> for single-block operators.
inline double inner(const Superoperator& s, const MappingOperator& a,
                    const MappingOperator& b) {
  detail::check_shape(s, a);
  detail::check_shape(s, b);
  if (a.n_s() != 1 || b.n_s() != 1) {
    fail(ErrorCode::kBadShape, "inner needs n_s = 1 operators");
  }
  return a.flatten().dot(s.matrix() * b.flatten());
}

/// S ~ sum_s (1 / F_s) |S U_s><U_s S|
inline Superoperator approx_from_hierarchy(
    const std::vector<std::pair<MappingOperator, double>>& levels,
    const Superoperator& s, double tol = 1e-12) {
  Matrix acc = Matrix::Zero(s.flat_dim(), s.flat_dim());
  for (const auto& [u, f] : levels) {
    if (!(f > tol)) {
      fail(ErrorCode::kBadLevel, "level fidelity " + std::to_string(f) +
                                     " is not positive");
    }
    const Vector su = s.matrix() * u.flatten();
    acc.noalias() += (1.0 / f) * su * su.transpose();
  }
  return Superoperator(s.d_out(), s.d_in(), s.kind(), acc);
}

}  // namespace qchannel

#endif  // QCHANNEL_SUPEROP_HPP_
