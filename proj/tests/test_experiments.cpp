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

#include <map>

#include "test_util.hpp"

namespace qchannel {
namespace {

using testing::expect_error;

std::map<Closeness, std::vector<double>> by_proxy(const std::vector<Fig1Row>& rows) {
  std::map<Closeness, std::vector<double>> out;
  for (const Fig1Row& r : rows) out[r.proxy].push_back(r.fidelity);
  return out;
}

TEST(Fig1Test, UnitaryChannelProperties) {
  const int n = 6, m = 60;
  const auto rows = fig1_sweep(n, n, 1, m, 3);
  ASSERT_EQ(rows.size(), static_cast<std::size_t>(4 * n));
  auto cols = by_proxy(rows);
  for (int i = 0; i < n; ++i) {
    EXPECT_NEAR(cols[Closeness::kSqrt][i], m, 1e-8 * m);
    EXPECT_NEAR(cols[Closeness::kVec][i], m, 1e-8 * m);
    EXPECT_NEAR(cols[Closeness::kProp][i], m, 1e-8 * m);
  }
  EXPECT_NEAR(cols[Closeness::kRhoSigma][0], m, 1e-8 * m);
  for (int i = 1; i < n; ++i) {
    EXPECT_LT(cols[Closeness::kRhoSigma][i], cols[Closeness::kRhoSigma][i - 1]);
  }
}

TEST(Fig1Test, KrausChannelBelowM) {
  const int n = 5, m = 50;
  auto cols = by_proxy(fig1_sweep(n, n, 4, m, 4));
  for (int i = 0; i < n; ++i) {
    for (Closeness c : {Closeness::kRhoSigma, Closeness::kSqrt, Closeness::kVec}) {
      EXPECT_LT(cols[c][i], 0.99 * m) << closeness_name(c) << " N_r=" << i + 1;
    }
    EXPECT_LE(cols[Closeness::kRhoSigma][i], cols[Closeness::kSqrt][i]);
    EXPECT_NEAR(cols[Closeness::kProp][i], m, 1e-8 * m);
  }
}

TEST(Fig1Test, ParallelMatchesSequential) {
  const auto a = fig1_sweep(4, 3, 2, 20, 5, true);
  const auto b = fig1_sweep(4, 3, 2, 20, 5, false);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].fidelity, b[i].fidelity);
}

TEST(Table1Test, SmallInstanceProperties) {
  const int m = 60;
  const Table1Result res = table1_experiment(4, 4, 2, m, 2, 6, SolverConfig{});
  EXPECT_TRUE(res.warnings.empty());
  ASSERT_EQ(res.rows.size(), 8u);
  for (std::size_t i = 0; i < res.rows.size(); i += 2) {
    const Table1Row& r0 = res.rows[i];
    const Table1Row& r1 = res.rows[i + 1];
    EXPECT_EQ(r0.level, 0);
    EXPECT_GE(r0.f_level, r0.f_exact - 1e-8 * r0.f_level) << closeness_name(r0.proxy);
    EXPECT_GE(r0.f_level, r1.f_level - 1e-9);
    if (r0.proxy == Closeness::kSqrt) {
      EXPECT_NEAR(r0.f_prop_level, r0.f_level, 1e-6 * m);
      EXPECT_NEAR(r1.f_prop_level, r1.f_level, 1e-6 * m);
    }
    EXPECT_GE(r0.f_prop_uhlmann_level, r0.f_prop_level - 1e-9);
  }
}

TEST(GeneratorTest, Errors) {
  Rng rng(7);
  expect_error(ErrorCode::kBadSpec,
               [&] { map_dataset(random_partial_unitary(2, 2, rng), 1, 0, rng); });
  expect_error(ErrorCode::kBadRank, [&] { random_mixed_unitary(2, 2, 0, rng); });
}

// For a maximally mixed input the sqrt proxy of a stack reduces to
// sqrt(n) Tr varrho^{3/2}, which is >= 1 and equals 1 only for unital maps.
TEST(SqrtProxyTest, MaximallyMixedInputAboveOneForNonUnitalChannel) {
  Rng rng(77);
  const int n = 5;
  const MappingOperator k = random_kraus_channel(n, n, 2, rng);
  const Matrix rho = Matrix::Identity(n, n) / n;
  MappingDataset ds(n, n);
  ds.add({DensityMatrix(rho), DensityMatrix(apply_channel(k, rho)), 1.0});
  const Eigen::SelfAdjointEigenSolver<Matrix> es(apply_channel(k, rho));
  double expected = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) expected += std::pow(es.eigenvalues()(i), 1.5);
  expected *= std::sqrt(static_cast<double>(n));
  const double f = total_fidelity_dataset(Closeness::kSqrt, ds, k);
  EXPECT_NEAR(f, expected, 1e-12);
  EXPECT_GT(f, 1.0);
  // A mixed unitary channel is unital and sits exactly at the bound.
  const MappingOperator u = random_mixed_unitary(n, n, 2, rng).as_kraus();
  MappingDataset du(n, n);
  du.add({DensityMatrix(rho), DensityMatrix(apply_channel(u, rho)), 1.0});
  EXPECT_NEAR(total_fidelity_dataset(Closeness::kSqrt, du, u), 1.0, 1e-12);
}

}  // namespace
}  // namespace qchannel
