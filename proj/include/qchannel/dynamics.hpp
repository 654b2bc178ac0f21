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

// Time evolution of a converged unitary solution when the superoperator is
// replaced by its multiplier matrix (lambda acting on rows). In the lambda
// eigenbasis every row picks up its own phase exp(-i lambda_p t / hbar).
// Complex values are carried as explicit (re, im) pairs.

#ifndef QCHANNEL_DYNAMICS_HPP_
#define QCHANNEL_DYNAMICS_HPP_

#include <cmath>
#include <vector>

#include "qchannel/solver.hpp"

namespace qchannel {

struct ComplexOperator {
  Matrix re;
  Matrix im;

  /// Complex row Gram (re + i im)(re + i im)^dagger split into parts.
  Matrix gram_re() const { return re * re.transpose() + im * im.transpose(); }
  Matrix gram_im() const { return im * re.transpose() - re * im.transpose(); }

  double unitarity_violation() const {
    const Eigen::Index d = re.rows();
    return std::max(max_abs(gram_re() - Matrix::Identity(d, d)),
                    max_abs(gram_im()));
  }
};

struct GroundStateEvolution {
  Vector lambda_eigs;  // ascending
  Matrix beta;         // columns are lambda eigenvectors
  Matrix v0;           // beta^T u, rows in the eigenbasis
  double hbar = 1.0;
};

/// Diagonalizes the multiplier matrix of a converged square solution.
inline GroundStateEvolution prepare_evolution(const Solution& solution,
                                              double hbar = 1.0) {
  if (!solution.converged) {
    fail(ErrorCode::kNotConverged, "evolution needs a converged solution");
  }
  const MappingOperator& b = solution.b;
  if (b.n_s() != 1 || b.d_out() != b.d_in()) {
    fail(ErrorCode::kBadShape, "evolution needs a square n_s = 1 solution");
  }
  if (!(hbar > 0.0)) fail(ErrorCode::kBadSpec, "hbar must be positive");
  const Spectrum spec = eigh(SymMatrix(solution.multipliers.lambda));
  return {spec.values, spec.vectors, spec.vectors.transpose() * b.block(0),
          hbar};
}

/// Rows of the eigenbasis solution at time t.
inline ComplexOperator evolve(const GroundStateEvolution& g, double t) {
  ComplexOperator out{g.v0, Matrix::Zero(g.v0.rows(), g.v0.cols())};
  for (Eigen::Index p = 0; p < g.v0.rows(); ++p) {
    const double phase = g.lambda_eigs(p) * t / g.hbar;
    out.re.row(p) = std::cos(phase) * g.v0.row(p);
    out.im.row(p) = -std::sin(phase) * g.v0.row(p);
  }
  return out;
}

/// Rotates an eigenbasis operator back: u = beta v.
inline ComplexOperator to_original_basis(const GroundStateEvolution& g,
                                         const ComplexOperator& v) {
  return {g.beta * v.re, g.beta * v.im};
}

/// Re sum_{ij} lambda_ij <u_i(t)|u_j(t)> in the original basis; equals
/// Tr lambda for every t.
inline double multiplier_energy(const GroundStateEvolution& g,
                                const Matrix& lambda, double t) {
  const ComplexOperator u = to_original_basis(g, evolve(g, t));
  return lambda.cwiseProduct(u.gram_re()).sum();
}

/// (Dn) x (Dn) complex matrix with entries
/// v0_pk v0_p'k' exp(-i (lambda_p - lambda_p') t / hbar) at (p n + k, p' n + k').
struct ComplexTensor {
  Matrix re;
  Matrix im;
};

inline ComplexTensor density_tensor_pure(const GroundStateEvolution& g,
                                         double t) {
  const Eigen::Index d = g.v0.rows();
  const Eigen::Index n = g.v0.cols();
  ComplexTensor out{Matrix(d * n, d * n), Matrix(d * n, d * n)};
  for (Eigen::Index p = 0; p < d; ++p)
    for (Eigen::Index q = 0; q < d; ++q) {
      const double phase = -(g.lambda_eigs(p) - g.lambda_eigs(q)) * t / g.hbar;
      const Matrix outer = g.v0.row(p).transpose() * g.v0.row(q);
      out.re.block(p * n, q * n, n, n) = std::cos(phase) * outer;
      out.im.block(p * n, q * n, n, n) = std::sin(phase) * outer;
    }
  return out;
}

/// |S Y - Y S|_F for Y = |U><U| over the flattened index.
inline double liouville_commutator_residual(const Superoperator& s,
                                            const Solution& solution) {
  if (solution.b.n_s() != 1) {
    fail(ErrorCode::kBadShape, "commutator residual needs n_s = 1");
  }
  const Vector u = solution.b.flatten();
  const Vector su = s.matrix() * u;
  return (su * u.transpose() - u * su.transpose()).norm();
}

/// Same commutator with S U replaced by (lambda (x) 1) U, which holds at a
/// stationary point.
inline double liouville_commutator_closed_form(const Solution& solution) {
  const Matrix& ub = solution.b.block(0);
  const Vector u = solution.b.flatten();
  const Vector lu =
      MappingOperator::single(solution.multipliers.lambda * ub).flatten();
  return (lu * u.transpose() - u * lu.transpose()).norm();
}

/// Heat-like variant: row p scaled by exp(lambda_p t / kappa).
inline Matrix evolve_dissipative(const GroundStateEvolution& g, double t,
                                 double kappa) {
  if (!(kappa > 0.0)) fail(ErrorCode::kBadSpec, "kappa must be positive");
  Matrix out = g.v0;
  for (Eigen::Index p = 0; p < g.v0.rows(); ++p) {
    const double expo = g.lambda_eigs(p) * t / kappa;
    if (expo > 700.0) {
      fail(ErrorCode::kOverflow, "exponent " + std::to_string(expo) + " > 700");
    }
    out.row(p) *= std::exp(expo);
  }
  return out;
}

}  // namespace qchannel

#endif  // QCHANNEL_DYNAMICS_HPP_
