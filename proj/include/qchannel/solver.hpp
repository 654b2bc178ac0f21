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

// Iterative eigenvalue solver for
//
//   max sum_s <B_s|S|B_s>  subject to  sum_s B_s B_s^T = 1 (and/or
//   sum_s B_s^T B_s = 1), Tr B_s B_t^T = 0, C . b = 0.
//
// Each iteration eliminates the linear constraints (first variations of the
// quadratic ones at the current iterate plus any external rows), solves the
// reduced generalized eigenproblem of S - multipliers, takes the largest
// eigenvalue, pushes the eigenvector back onto the constraint surface and
// refits the multipliers.

#ifndef QCHANNEL_SOLVER_HPP_
#define QCHANNEL_SOLVER_HPP_

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "qchannel/adjust.hpp"
#include "qchannel/lagrange.hpp"

namespace qchannel {

struct SolverConfig {
  int n_s = 1;
  int max_iterations = 200;
  double convergence_rel_tol = 1e-9;
  double mu_tol = 1e-8;
  double constraint_tol = 1e-10;
  int adjust_inner_iterations = 5;
  Gauge gauge = Gauge::kCanonical;
  ConstraintMode constraint_mode = ConstraintMode::kOrthogonality;
  /// Start from this iterate instead of the top eigenvector of S.
  std::optional<MappingOperator> initial;
  /// Used only to perturb a degenerate starting point.
  std::uint64_t seed = 1;
  bool record_trace = false;

  void validate() const {
    if (n_s < 1 || max_iterations < 1 || !(convergence_rel_tol > 0.0) ||
        !(mu_tol > 0.0) || !(constraint_tol > 0.0) ||
        adjust_inner_iterations < 1 || adjust_inner_iterations > 100) {
      fail(ErrorCode::kBadSpec, "SolverConfig out of range");
    }
  }
};

struct TraceRow {
  int iteration = 0;
  double fidelity = 0.0;
  double mu_selected = 0.0;
  double residual = 0.0;
  double max_constraint_violation = 0.0;
};

struct Solution {
  MappingOperator b;
  LagrangeMultipliers multipliers;
  double fidelity = 0.0;
  double mu_selected = 0.0;
  double residual = 0.0;
  double constraint_violation = 0.0;
  int iterations = 0;
  Eigen::Index reduced_dim = 0;  // N_V of the last eigenproblem
  bool converged = false;
  std::vector<TraceRow> trace;
};

struct ReducedProblem {
  SymMatrix num;
  SymMatrix den;
};

/// Flattened Lagrangian matrix over the whole Kraus stack:
/// delta_ss' S - lambda (x) 1 - 1 (x) lambda_tp - nu (x) 1.
inline Matrix lagrangian_matrix(const Superoperator& s,
                                const LagrangeMultipliers& lm, int n_s) {
  const int dd = s.d_out();
  const int n = s.d_in();
  const Eigen::Index blk = static_cast<Eigen::Index>(dd) * n;
  Matrix out = Matrix::Zero(n_s * blk, n_s * blk);
  Matrix diag = s.matrix();
  if (lm.lambda.size() > 0) {
    diag -= detail::kron(lm.lambda, Matrix::Identity(n, n));
  }
  if (lm.lambda_tp) diag -= detail::kron(Matrix::Identity(dd, dd), *lm.lambda_tp);
  for (int a = 0; a < n_s; ++a) {
    out.block(a * blk, a * blk, blk, blk) = diag;
    for (int c = 0; c < n_s; ++c) {
      if (c != a && lm.nu.size() > 0 && lm.nu(a, c) != 0.0) {
        out.block(a * blk, c * blk, blk, blk) -=
            lm.nu(a, c) * Matrix::Identity(blk, blk);
      }
    }
  }
  return out;
}

/// num = M^T L M and den = M^T M for the elimination basis M.
inline ReducedProblem reduced_problem(const Superoperator& s,
                                      const LagrangeMultipliers& lm,
                                      const RectMatrix& m, int n_s) {
  const Matrix l = lagrangian_matrix(s, lm, n_s);
  if (m.rows() != l.rows()) {
    fail(ErrorCode::kBadShape, "elimination basis has wrong row count");
  }
  return {SymMatrix(m.transpose() * l * m), SymMatrix(m.transpose() * m)};
}

struct EigStep {
  double mu = 0.0;  // largest generalized eigenvalue
  MappingOperator b;
};

/// Largest-eigenvalue state of the reduced problem, mapped back through M
/// and rescaled to sum |b|^2 = norm2.
inline EigStep eig_step(const ReducedProblem& rp, const RectMatrix& m,
                        int n_s, int d_out, int d_in, double norm2) {
  if (rp.num.dim() == 0) {
    fail(ErrorCode::kDegenerateGram, "constraints leave no free variables");
  }
  const Spectrum spec = gen_sym_eig(rp.num, rp.den);
  const Eigen::Index top = spec.values.size() - 1;
  Vector flat = m * spec.vectors.col(top);
  const double nrm = flat.norm();
  if (!(nrm > 0.0)) fail(ErrorCode::kDegenerateGram, "zero eigenvector");
  flat *= std::sqrt(norm2) / nrm;
  return {spec.values(top), MappingOperator::from_flat(flat, n_s, d_out, d_in)};
}

namespace detail {

inline double quadratic_violation(const MappingOperator& b,
                                  ConstraintMode mode, Gauge gauge) {
  double v = 0.0;
  if (mode != ConstraintMode::kTracePreserving)
    v = std::max(v, orthonormality_violation(b));
  if (mode != ConstraintMode::kOrthogonality)
    v = std::max(v, trace_preservation_violation(b));
  if (gauge == Gauge::kCanonical) v = std::max(v, canonical_violation(b));
  return v;
}

inline MappingOperator adjust_all(const MappingOperator& b,
                                  const ConstraintSet& external,
                                  const SolverConfig& cfg) {
  MappingOperator y =
      adjust_with_external(b, external, cfg.adjust_inner_iterations,
                           cfg.constraint_mode)
          .b;
  if (cfg.gauge == Gauge::kCanonical) y = adjust_canonical(y);
  return y;
}

}  // namespace detail

/// Runs the iteration. Non-convergence is reported through
/// Solution::converged with the best feasible iterate attached. For n_s > 1
/// the gauge freedom can make the top eigenvalue degenerate and stall it.
inline Solution solve(const Superoperator& s, const SolverConfig& cfg,
                      const ConstraintSet& external = ConstraintSet()) {
  cfg.validate();
  const int n_s = cfg.n_s;
  const int dd = s.d_out();
  const int n = s.d_in();
  const ConstraintMode mode = cfg.constraint_mode;
  if (mode == ConstraintMode::kOrthogonality && dd > n) {
    fail(ErrorCode::kBadShape, "orthonormal rows need D <= n");
  }
  if (mode == ConstraintMode::kBoth && dd != n) {
    fail(ErrorCode::kBadSpec,
         "row and column constraints together force D = n (equal traces)");
  }
  const Eigen::Index width = static_cast<Eigen::Index>(n_s) * dd * n;
  if (!external.empty() && external.width() != width) {
    fail(ErrorCode::kBadShape, "external constraints width mismatch");
  }
  const double norm2 = mode == ConstraintMode::kTracePreserving ? n : dd;
  const double mu_scale = norm2;  // mu reported for sum |b|^2 = norm2
  // Gauge rotations (n_s > 1) and the overlap of row and column conditions
  // on square operators (kBoth) leave the multipliers underdetermined.
  const bool min_norm = n_s > 1 || mode == ConstraintMode::kBoth;
  const ConstraintSet* ext = external.empty() ? nullptr : &external;

  Solution sol;
  LagrangeMultipliers lm = LagrangeMultipliers::zero(n_s, dd, n, mode);
  ConstraintSet rows(width);
  rows.append(external);
  std::optional<MappingOperator> prev;
  double prev_f = std::numeric_limits<double>::quiet_NaN();

  if (cfg.initial) {
    if (cfg.initial->n_s() != n_s || cfg.initial->d_out() != dd ||
        cfg.initial->d_in() != n) {
      fail(ErrorCode::kBadShape, "initial iterate shape");
    }
    MappingOperator b = detail::adjust_all(*cfg.initial, external, cfg);
    lm = lagrange_multipliers(s, b, mode, ext, min_norm);
    rows = helper_constraints(b, mode, n_s > 1 ? cfg.gauge : Gauge::kNone);
    rows.append(external);
    prev = b;
    prev_f = total_fidelity(s, b);
  }

  std::optional<Solution> best;
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    const RectMatrix m = null_space_basis(rows.rows());
    const ReducedProblem rp = reduced_problem(s, lm, m, n_s);
    EigStep step = eig_step(rp, m, n_s, dd, n, norm2);
    if (prev && step.b.flatten().dot(prev->flatten()) < 0.0) {
      step.b = step.b.scaled(-1.0);
    }

    MappingOperator b;
    try {
      b = detail::adjust_all(step.b, external, cfg);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateGram || prev) throw;
      // Degenerate start: tilt the top eigenvector toward a random point.
      Rng rng(cfg.seed);
      Vector noise = Vector::Zero(width);
      for (Eigen::Index i = 0; i < width; ++i) noise(i) = rng.normal();
      noise *= 1e-3 * std::sqrt(norm2) / noise.norm();
      b = detail::adjust_all(
          MappingOperator::from_flat(step.b.flatten() + noise, n_s, dd, n),
          external, cfg);
    }

    lm = lagrange_multipliers(s, b, mode, ext, min_norm);
    const double f = total_fidelity(s, b);
    const double viol = std::max(detail::quadratic_violation(
                                     b, mode, n_s > 1 ? cfg.gauge : Gauge::kNone),
                                 external.max_violation(b));

    sol.b = b;
    sol.multipliers = lm;
    sol.fidelity = f;
    sol.mu_selected = mu_scale * step.mu;
    sol.residual = residual(s, b, lm, ext);
    sol.constraint_violation = viol;
    sol.iterations = it;
    sol.reduced_dim = m.cols();
    if (cfg.record_trace) {
      sol.trace.push_back({it, f, sol.mu_selected, sol.residual, viol});
    }
    if (viol <= cfg.constraint_tol && (!best || f > best->fidelity)) best = sol;

    const bool f_settled =
        prev && std::abs(f - prev_f) <=
                    cfg.convergence_rel_tol * std::max(std::abs(f), 1e-300);
    if (f_settled && std::abs(sol.mu_selected) <= cfg.mu_tol * (1.0 + std::abs(f)) &&
        viol <= cfg.constraint_tol) {
      sol.converged = true;
      return sol;
    }

    rows = helper_constraints(b, mode, n_s > 1 ? cfg.gauge : Gauge::kNone);
    rows.append(external);
    prev = b;
    prev_f = f;
  }
  if (best) {
    std::vector<TraceRow> trace = std::move(sol.trace);
    sol = *best;
    sol.trace = std::move(trace);
    sol.iterations = cfg.max_iterations;
  }
  sol.converged = false;
  return sol;
}

/// Runs solve from the default start and from `restarts` random partial
/// unitaries (n_s = 1 only) and keeps the converged run with the largest
/// fidelity. The nonconvex problem has local maxima; a few restarts make
/// the reported maximum much more reliable.
inline Solution solve_multistart(const Superoperator& s, SolverConfig cfg,
                                 const ConstraintSet& external,
                                 int restarts) {
  Solution best = solve(s, cfg, external);
  if (cfg.n_s != 1 || s.d_out() > s.d_in()) return best;
  Rng rng(derive_seed(cfg.seed, 0x5eed));
  for (int r = 0; r < restarts; ++r) {
    cfg.initial = random_partial_unitary(s.d_out(), s.d_in(), rng);
    Solution cand;
    try {
      cand = solve(s, cfg, external);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateGram) throw;
      continue;
    }
    if (cand.converged &&
        (!best.converged || cand.fidelity > best.fidelity)) {
      best = std::move(cand);
    }
  }
  return best;
}

}  // namespace qchannel

#endif  // QCHANNEL_SOLVER_HPP_
