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

#include <cmath>

#include "test_util.hpp"

namespace qchannel {
namespace {

using testing::expect_error;

Solution converged_solution(int n, std::uint64_t seed, Superoperator* out_s = nullptr) {
  Rng rng(seed);
  const MappingOperator k = random_kraus_channel(n, n, 3, rng);
  Superoperator s = build_superop(map_dataset(k, 2, 10 * n * n, rng),
                                  SuperopKind::plain());
  Solution sol = solve(s, SolverConfig{});
  if (out_s) *out_s = s;
  return sol;
}

// Hand-built converged solution with a given multiplier matrix.
Solution manual_solution(const Matrix& lambda, std::uint64_t seed) {
  Rng rng(seed);
  Solution sol;
  sol.b = random_partial_unitary(static_cast<int>(lambda.rows()),
                                 static_cast<int>(lambda.rows()), rng);
  sol.multipliers.lambda = lambda;
  sol.converged = true;
  return sol;
}

Matrix diag(std::initializer_list<double> v) {
  Vector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d(i++) = x;
  return d.asDiagonal();
}

TEST(PrepareEvolutionTest, DiagonalLambdaKeepsBasis) {
  const Solution sol = manual_solution(diag({1.0, 2.0, 3.0}), 1);
  const GroundStateEvolution g = prepare_evolution(sol);
  EXPECT_LE(max_abs(g.beta - Matrix::Identity(3, 3)), 0.0);
  EXPECT_LE(max_abs(g.v0 - sol.b.block(0)), 0.0);
}

TEST(PrepareEvolutionTest, DiagonalizesConvergedLambda) {
  const Solution sol = converged_solution(4, 2);
  ASSERT_TRUE(sol.converged);
  const GroundStateEvolution g = prepare_evolution(sol);
  const Matrix rotated = g.beta.transpose() * sol.multipliers.lambda * g.beta;
  Matrix off = rotated;
  off.diagonal().setZero();
  EXPECT_LE(max_abs(off), 1e-10 * std::max(1.0, max_abs(rotated)));
  EXPECT_NEAR(g.lambda_eigs.sum(), sol.multipliers.lambda.trace(), 1e-12 * sol.fidelity);
  EXPECT_LE(max_abs(g.v0 * g.v0.transpose() - Matrix::Identity(4, 4)), 1e-10);
}

TEST(PrepareEvolutionTest, RejectsBadInput) {
  Solution sol = manual_solution(diag({1.0, 2.0}), 3);
  sol.converged = false;
  expect_error(ErrorCode::kNotConverged, [&] { prepare_evolution(sol); });
  sol.converged = true;
  Rng rng(3);
  sol.b = random_partial_unitary(2, 3, rng);
  expect_error(ErrorCode::kBadShape, [&] { prepare_evolution(sol); });
  sol.b = random_partial_unitary(2, 2, rng);
  expect_error(ErrorCode::kBadSpec, [&] { prepare_evolution(sol, 0.0); });
}

TEST(EvolveTest, StartsAtSolution) {
  const GroundStateEvolution g = prepare_evolution(converged_solution(3, 4));
  const ComplexOperator v = evolve(g, 0.0);
  EXPECT_LE(max_abs(v.re - g.v0), 0.0);
  EXPECT_LE(max_abs(v.im), 0.0);
}

TEST(EvolveTest, FullPhasePeriod) {
  const GroundStateEvolution g =
      prepare_evolution(manual_solution(diag({2 * M_PI, 4 * M_PI}), 5));
  const ComplexOperator v = evolve(g, 1.0);
  EXPECT_LE(max_abs(v.re - g.v0), 1e-12);
  EXPECT_LE(max_abs(v.im), 1e-12);
}

TEST(EvolveTest, UnitarityOverTimeGrid) {
  const GroundStateEvolution g = prepare_evolution(converged_solution(4, 6));
  for (int i = 0; i <= 100; ++i) {
    const ComplexOperator v = evolve(g, 0.1 * i);
    EXPECT_LE(v.unitarity_violation(), 1e-12) << 0.1 * i;
    const ComplexOperator u = to_original_basis(g, v);
    EXPECT_LE(u.unitarity_violation(), 1e-12);
    // Magnitudes in the eigenbasis never change.
    const Matrix mag = (v.re.array().square() + v.im.array().square()).sqrt();
    EXPECT_LE(max_abs(mag - g.v0.cwiseAbs()), 1e-12);
  }
}

TEST(EvolveTest, FiniteDifferenceDerivative) {
  const GroundStateEvolution g = prepare_evolution(converged_solution(3, 7), 0.7);
  const double d = 1e-5;
  for (double t : {0.0, 0.35, 2.0}) {
    const ComplexOperator plus = evolve(g, t + d);
    const ComplexOperator minus = evolve(g, t - d);
    const ComplexOperator now = evolve(g, t);
    // du/dt = -(i / hbar) lambda_p u: re' = lambda im / hbar, im' = -lambda re / hbar.
    const Matrix l = g.lambda_eigs.asDiagonal();
    const Matrix dre = (plus.re - minus.re) / (2 * d);
    const Matrix dim = (plus.im - minus.im) / (2 * d);
    const double scale = std::pow(g.lambda_eigs.cwiseAbs().maxCoeff() / g.hbar, 3);
    const double tol = scale * d * d + 1e-9;
    EXPECT_LE(max_abs(dre - l * now.im / g.hbar), tol);
    EXPECT_LE(max_abs(dim + l * now.re / g.hbar), tol);
  }
}

TEST(EvolveTest, MultiplierEnergyIsConstant) {
  const Solution sol = converged_solution(4, 8);
  const GroundStateEvolution g = prepare_evolution(sol);
  for (int i = 0; i <= 20; ++i) {
    EXPECT_NEAR(multiplier_energy(g, sol.multipliers.lambda, 0.5 * i),
                sol.multipliers.lambda.trace(), 1e-10 * std::max(1.0, sol.fidelity));
  }
}

TEST(DensityTensorTest, DiagonalBlocksAreConstant) {
  const GroundStateEvolution g = prepare_evolution(converged_solution(3, 9));
  const ComplexTensor t0 = density_tensor_pure(g, 0.0);
  EXPECT_LE(max_abs(t0.im), 0.0);
  const Vector flat = MappingOperator::single(g.v0).flatten();
  EXPECT_LE(max_abs(t0.re - flat * flat.transpose()), 1e-15);
  for (double t : {0.3, 1.7, 9.9}) {
    const ComplexTensor tt = density_tensor_pure(g, t);
    for (int p = 0; p < 3; ++p) {
      EXPECT_LE(max_abs(tt.re.block(p * 3, p * 3, 3, 3) - t0.re.block(p * 3, p * 3, 3, 3)),
                1e-12);
      EXPECT_LE(max_abs(tt.im.block(p * 3, p * 3, 3, 3)), 1e-12);
    }
  }
}

TEST(DensityTensorTest, CommonPeriodRepeats) {
  // Integer eigenvalues: every phase difference has period 2 pi.
  const GroundStateEvolution g =
      prepare_evolution(manual_solution(diag({1.0, 2.0, 4.0}), 10));
  const ComplexTensor a = density_tensor_pure(g, 0.4);
  const ComplexTensor b = density_tensor_pure(g, 0.4 + 2 * M_PI);
  EXPECT_LE(max_abs(a.re - b.re), 1e-12);
  EXPECT_LE(max_abs(a.im - b.im), 1e-12);
}

TEST(LiouvilleTest, IdentitySuperoperatorCommutes) {
  const Solution sol = manual_solution(diag({1.0, 1.0, 1.0}), 11);
  const Superoperator s(3, 3, SuperopKind::plain(), 2.5 * Matrix::Identity(9, 9));
  EXPECT_LE(liouville_commutator_residual(s, sol), 1e-14);
}

TEST(LiouvilleTest, GenericSolutionDoesNotCommute) {
  Superoperator s;
  const Solution sol = converged_solution(4, 12, &s);
  ASSERT_TRUE(sol.converged);
  const double r = liouville_commutator_residual(s, sol);
  EXPECT_GT(r, 1e-6 * s.matrix().norm());
  EXPECT_NEAR(r, liouville_commutator_closed_form(sol), 1e-10 * std::max(1.0, r));
}

TEST(DissipativeTest, Cases) {
  const GroundStateEvolution g =
      prepare_evolution(manual_solution(diag({-1.5, -0.5, 2.0}), 13));
  EXPECT_LE(max_abs(evolve_dissipative(g, 0.0, 1.0) - g.v0), 0.0);
  double prev0 = g.v0.row(0).norm(), prev1 = g.v0.row(1).norm();
  for (int i = 1; i <= 50; ++i) {
    const Matrix x = evolve_dissipative(g, 0.1 * i, 1.0);
    EXPECT_LT(x.row(0).norm(), prev0);
    EXPECT_LT(x.row(1).norm(), prev1);
    prev0 = x.row(0).norm();
    prev1 = x.row(1).norm();
  }
  EXPECT_LE(max_abs(evolve_dissipative(g, 3.0, 2.0) - evolve_dissipative(g, 0.75, 0.5)),
            1e-12);
  expect_error(ErrorCode::kOverflow, [&] { evolve_dissipative(g, 400.0, 1.0); });
  expect_error(ErrorCode::kBadSpec, [&] { evolve_dissipative(g, 1.0, 0.0); });
}

}  // namespace
}  // namespace qchannel
