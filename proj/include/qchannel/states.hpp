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

// Density matrices, channels and the closeness measures between an observed
// output state and the state a channel produces.

#ifndef QCHANNEL_STATES_HPP_
#define QCHANNEL_STATES_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qchannel/adjust.hpp"
#include "qchannel/rng.hpp"

namespace qchannel {

inline constexpr double kDensityTol = 1e-10;

/// Real symmetric PSD matrix with unit trace. Construction validates and
/// symmetrizes; it never renormalizes.
class DensityMatrix {
 public:
  DensityMatrix() = default;

  explicit DensityMatrix(const Matrix& a, double tol = kDensityTol) {
    SymMatrix sym(a);
    if (sym.dim() < 1) fail(ErrorCode::kBadShape, "empty density matrix");
    const double tr = sym.matrix().trace();
    if (std::abs(tr - 1.0) > tol) {
      fail(ErrorCode::kBadDensity, "trace is " + std::to_string(tr));
    }
    const Spectrum spec = eigh(sym);
    if (spec.values.minCoeff() < -tol) {
      fail(ErrorCode::kBadDensity,
           "min eigenvalue " + std::to_string(spec.values.minCoeff()));
    }
    m_ = sym.matrix();
  }

  /// Divides a PSD matrix by its trace first; for generators only.
  static DensityMatrix normalized(const Matrix& a) {
    const double tr = a.trace();
    if (!(tr > 0.0)) fail(ErrorCode::kBadDensity, "nonpositive trace");
    return DensityMatrix(a / tr);
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  SymMatrix sym() const { return SymMatrix(m_); }

 private:
  Matrix m_;
};

/// rho = sum_{r < n_r} v_r v_r^T / Norm with Gaussian v_r.
inline DensityMatrix random_density(int n, int n_r, Rng& rng) {
  if (n < 1) fail(ErrorCode::kBadShape, "random_density: n must be >= 1");
  if (n_r < 1 || n_r > n) {
    fail(ErrorCode::kBadRank, "random_density: rank " + std::to_string(n_r) +
                                  " outside [1, " + std::to_string(n) + "]");
  }
  Matrix acc = Matrix::Zero(n, n);
  for (int r = 0; r < n_r; ++r) {
    const Vector v = rng.gaussian(n, 1).col(0);
    acc.noalias() += v * v.transpose();
  }
  return DensityMatrix::normalized(acc);
}

/// Partial unitary with orthonormal rows: Q factor of a Gaussian n x D
/// matrix, signs fixed by diag(R) so the distribution is Haar.
inline MappingOperator random_partial_unitary(int d_out, int d_in, Rng& rng) {
  if (d_out < 1 || d_in < 1 || d_out > d_in) {
    fail(ErrorCode::kBadShape, "random_partial_unitary needs 1 <= d_out <= d_in");
  }
  const Matrix g = rng.gaussian(d_in, d_out);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d_in, d_out);
  const Matrix r = qr.matrixQR();
  for (int c = 0; c < d_out; ++c) {
    if (r(c, c) < 0) q.col(c) *= -1.0;
  }
  MappingOperator u = MappingOperator::single(q.transpose());
  u.flags.orthonormal_rows = true;
  return u;
}

/// Gaussian blocks pushed onto sum_s B_s^T B_s = 1. DegenerateGram when
/// n_s is below min_kraus_rank(d_out, d_in).
inline MappingOperator random_kraus_channel(int d_out, int d_in, int n_s,
                                            Rng& rng) {
  if (n_s < 1 || d_out < 1 || d_in < 1) {
    fail(ErrorCode::kBadShape, "random_kraus_channel dimensions");
  }
  std::vector<Matrix> blocks;
  blocks.reserve(n_s);
  for (int s = 0; s < n_s; ++s) blocks.push_back(rng.gaussian(d_out, d_in));
  return adjust_trace_preserving(MappingOperator(std::move(blocks)));
}

inline int min_kraus_rank(int d_out, int d_in) {
  return std::max(1, d_in - d_out + 1);
}

/// D = 1 channel with B_s = <e_s|, mapping any a to [[Tr a]].
inline MappingOperator trace_channel(int n) {
  if (n < 1) fail(ErrorCode::kBadShape, "trace_channel: n must be >= 1");
  std::vector<Matrix> blocks;
  for (int s = 0; s < n; ++s) {
    Matrix b = Matrix::Zero(1, n);
    b(0, s) = 1.0;
    blocks.push_back(std::move(b));
  }
  MappingOperator out(std::move(blocks));
  out.flags.trace_preserving = true;
  out.flags.canonical = true;
  return out;
}

/// Columns of basis_in are |x_k>, columns of basis_out are |f_j>.
struct RankOneChannelSpec {
  Matrix basis_in;   // n x n
  Matrix basis_out;  // D x D
  Matrix m;          // D x n, unit column norms
};

/// B_{s = j n + k} = m_{jk} |f_j><x_k|
inline MappingOperator rank_one_channel(const RankOneChannelSpec& spec) {
  const Eigen::Index dd = spec.basis_out.rows();
  const Eigen::Index n = spec.basis_in.rows();
  if (spec.basis_in.cols() != n || spec.basis_out.cols() != dd ||
      spec.m.rows() != dd || spec.m.cols() != n || n == 0 || dd == 0) {
    fail(ErrorCode::kBadShape, "rank_one_channel: inconsistent spec shapes");
  }
  if (max_abs(spec.basis_in.transpose() * spec.basis_in -
              Matrix::Identity(n, n)) > 1e-10 ||
      max_abs(spec.basis_out.transpose() * spec.basis_out -
              Matrix::Identity(dd, dd)) > 1e-10) {
    fail(ErrorCode::kBadSpec, "rank_one_channel: bases must be orthonormal");
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const double norm2 = spec.m.col(k).squaredNorm();
    if (std::abs(norm2 - 1.0) > 1e-10) {
      fail(ErrorCode::kBadSpec, "rank_one_channel: column " +
                                    std::to_string(k) + " has squared norm " +
                                    std::to_string(norm2));
    }
  }
  std::vector<Matrix> blocks;
  blocks.reserve(dd * n);
  for (Eigen::Index j = 0; j < dd; ++j)
    for (Eigen::Index k = 0; k < n; ++k)
      blocks.push_back(spec.m(j, k) * spec.basis_out.col(j) *
                       spec.basis_in.col(k).transpose());
  MappingOperator out(std::move(blocks));
  out.flags.trace_preserving = true;
  return out;
}

/// A -> sum_s weights[s] U_s A U_s^T; `weights` already hold the |w_s|^2.
struct MixedUnitaryChannel {
  std::vector<double> weights;
  std::vector<MappingOperator> unitaries;

  Matrix apply(const Matrix& a) const {
    if (unitaries.empty()) fail(ErrorCode::kZeroWeights, "empty mixture");
    Matrix out = Matrix::Zero(unitaries.front().d_out(),
                              unitaries.front().d_out());
    for (std::size_t s = 0; s < unitaries.size(); ++s) {
      out += weights[s] * apply_channel(unitaries[s], a);
    }
    return out;
  }

  /// Equivalent Kraus stack sqrt(weight_s) U_s.
  MappingOperator as_kraus() const {
    std::vector<Matrix> blocks;
    for (std::size_t s = 0; s < unitaries.size(); ++s) {
      blocks.push_back(std::sqrt(weights[s]) * unitaries[s].block(0));
    }
    return MappingOperator(std::move(blocks));
  }
};

struct MappingRecord {
  DensityMatrix rho;     // input, dim n
  DensityMatrix varrho;  // observed output, dim D
  double omega = 1.0;
};

class MappingDataset {
 public:
  MappingDataset(int n, int d) : n_(n), d_(d) {
    if (n < 1 || d < 1) fail(ErrorCode::kBadShape, "dataset dimensions");
  }

  int n() const { return n_; }
  int d() const { return d_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const std::vector<MappingRecord>& records() const { return records_; }
  const MappingRecord& operator[](std::size_t i) const { return records_[i]; }

  void add(MappingRecord rec) {
    if (rec.rho.dim() != n_ || rec.varrho.dim() != d_) {
      fail(ErrorCode::kBadShape, "record dims differ from dataset dims");
    }
    if (!(rec.omega > 0.0) || !std::isfinite(rec.omega)) {
      fail(ErrorCode::kBadSpec, "record weight must be positive");
    }
    records_.push_back(std::move(rec));
  }

  double total_weight() const {
    double w = 0.0;
    for (const auto& r : records_) w += r.omega;
    return w;
  }

 private:
  int n_;
  int d_;
  std::vector<MappingRecord> records_;
};

/// Closeness measures F(varrho, sigma). kSqrt is a dataset-level measure
/// (it needs the channel, not sigma) and is only accepted by
/// total_fidelity_dataset.
enum class Closeness {
  kRhoSigma,     // Tr varrho sigma
  kProp,         // Tr sqrt(sqrt(varrho) sigma sqrt(varrho))
  kPropOverlap,  // Tr sqrt(varrho) sqrt(sigma)
  kCorr,         // Tr varrho sigma / (|varrho|_F |sigma|_F)
  kVec,          // Tr varrho sigma / (|varrho|_F |rho|_F)
  kNrho2,        // Tr varrho sigma / Tr varrho^2
  kKl,           // Tr varrho (ln varrho - ln sigma)
  kSqrt,         // Tr sqrt(varrho) Phi(sqrt(rho))
};

inline std::string_view closeness_name(Closeness k) {
  switch (k) {
    case Closeness::kRhoSigma: return "rho_sigma";
    case Closeness::kProp: return "prop";
    case Closeness::kPropOverlap: return "prop_overlap";
    case Closeness::kCorr: return "corr";
    case Closeness::kVec: return "vec";
    case Closeness::kNrho2: return "nrho2";
    case Closeness::kKl: return "kl";
    case Closeness::kSqrt: return "sqrt";
  }
  return "unknown";
}

inline Closeness parse_closeness(std::string_view name) {
  for (Closeness k : {Closeness::kRhoSigma, Closeness::kProp,
                      Closeness::kPropOverlap, Closeness::kCorr,
                      Closeness::kVec, Closeness::kNrho2, Closeness::kKl,
                      Closeness::kSqrt}) {
    if (closeness_name(k) == name) return k;
  }
  if (name == "log") return Closeness::kKl;
  fail(ErrorCode::kBadSpec, "unknown closeness kind '" + std::string(name) + "'");
}

inline double closeness(Closeness kind, const DensityMatrix& varrho,
                        const Matrix& sigma,
                        const DensityMatrix* rho = nullptr) {
  const Matrix& v = varrho.matrix();
  if (sigma.rows() != v.rows() || sigma.cols() != v.cols()) {
    fail(ErrorCode::kBadShape, "closeness: sigma dimension mismatch");
  }
  const double overlap = v.cwiseProduct(sigma).sum();  // Tr v sigma, v symmetric
  switch (kind) {
    case Closeness::kRhoSigma:
      return overlap;
    case Closeness::kProp: {
      // Tr sqrt(sqrt(v) sigma sqrt(v)) is the trace norm of sqrt(sigma) sqrt(v).
      const SymMatrix rv = sqrtm_psd(varrho.sym());
      const SymMatrix rs = sqrtm_psd(SymMatrix(sigma));
      const Eigen::JacobiSVD<Matrix> svd(rs.matrix() * rv.matrix());
      return svd.singularValues().sum();
    }
    case Closeness::kPropOverlap: {
      const SymMatrix rv = sqrtm_psd(varrho.sym());
      const SymMatrix rs = sqrtm_psd(SymMatrix(sigma));
      return rv.matrix().cwiseProduct(rs.matrix()).sum();
    }
    case Closeness::kCorr:
      return overlap / (v.norm() * sigma.norm());
    case Closeness::kVec:
      if (rho == nullptr) fail(ErrorCode::kBadSpec, "closeness vec needs rho");
      return overlap / (v.norm() * rho->matrix().norm());
    case Closeness::kNrho2:
      return overlap / v.squaredNorm();
    case Closeness::kKl: {
      const Matrix lv = logm_psd(varrho.sym()).matrix();
      const Matrix ls = logm_psd(SymMatrix(sigma)).matrix();
      return v.cwiseProduct(lv - ls).sum();
    }
    case Closeness::kSqrt:
      fail(ErrorCode::kBadSpec,
           "closeness sqrt is defined through the channel; use "
           "total_fidelity_dataset");
  }
  return 0.0;
}

/// Weight of varrho outside the support of sigma, <v|varrho|v> summed over
/// sigma eigenvectors with eigenvalue <= floor. Nonzero values make the KL
/// measure infinite before regularization.
inline double kl_support_violation(const DensityMatrix& varrho,
                                   const Matrix& sigma, double floor = 1e-12) {
  const Spectrum spec = eigh(SymMatrix(sigma));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < spec.values.size(); ++i) {
    if (spec.values(i) <= floor) {
      const Vector g = spec.vectors.col(i);
      acc += g.dot(varrho.matrix() * g);
    }
  }
  return acc;
}

/// sum_l omega_l F(varrho_l, Phi(rho_l)) for the channel Phi given by b.
inline double total_fidelity_dataset(Closeness kind,
                                     const MappingDataset& dataset,
                                     const MappingOperator& channel) {
  if (channel.d_in() != dataset.n() || channel.d_out() != dataset.d()) {
    fail(ErrorCode::kBadShape, "channel shape does not match dataset");
  }
  double acc = 0.0;
  for (const MappingRecord& rec : dataset.records()) {
    if (kind == Closeness::kSqrt) {
      const Matrix sv = sqrtm_psd(rec.varrho.sym()).matrix();
      const Matrix out =
          apply_channel(channel, sqrtm_psd(rec.rho.sym()).matrix());
      acc += rec.omega * sv.cwiseProduct(out).sum();
    } else {
      acc += rec.omega * closeness(kind, rec.varrho,
                                   apply_channel(channel, rec.rho.matrix()),
                                   &rec.rho);
    }
  }
  return acc;
}

}  // namespace qchannel

#endif  // QCHANNEL_STATES_HPP_
