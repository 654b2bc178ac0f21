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

// Recovers a random 6x6 orthogonal matrix from 60 mixed-state observations
// with the sqrt proxy, then builds a short hierarchy on a two-term mixture.

#include <iomanip>
#include <iostream>
#include <memory>

#include "qchannel/experiments.hpp"

int main() {
  using namespace qchannel;
  Rng rng(2026);
  const int n = 6;

  const MappingOperator truth = random_partial_unitary(n, n, rng);
  const MappingDataset ds = map_dataset(truth, /*n_r=*/3, /*m=*/60, rng);
  const Superoperator s = build_superop(ds, SuperopKind::sqrt());
  const Solution sol = solve(s, SolverConfig{});

  const double err = std::min(max_abs(sol.b.block(0) - truth.block(0)),
                              max_abs(sol.b.block(0) + truth.block(0)));
  std::cout << std::setprecision(12)
            << "converged:  " << std::boolalpha << sol.converged << "\n"
            << "iterations: " << sol.iterations << "\n"
            << "F / M:      " << sol.fidelity / ds.size() << "\n"
            << "max |U - U_true| (up to sign): " << err << "\n\n";

  MixedUnitaryChannel mix = random_mixed_unitary(n, n, 2, rng);
  const MappingDataset pure = map_dataset(mix.as_kraus(), 1, 150, rng);
  auto sp = std::make_shared<const Superoperator>(
      build_superop(pure, SuperopKind::sqrt()));
  const Hierarchy h = build_hierarchy(sp, 3, SolverConfig{});
  std::cout << "mixture weights: " << mix.weights[0] << " " << mix.weights[1]
            << "\n";
  for (std::size_t i = 0; i < h.size(); ++i) {
    std::cout << "level " << i << ": F = " << h.levels[i].fidelity << "\n";
  }
  std::cout << "exact channel:  F = "
            << total_fidelity(*sp, mix.as_kraus()) << "\n";
  return 0;
}
