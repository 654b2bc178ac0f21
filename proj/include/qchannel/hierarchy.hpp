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

// Sequence of partially unitary operators U^[0], U^[1], ... of decreasing
// fidelity, each the best one S-orthogonal to all earlier levels, and the
// mixed unitary channels assembled from them.

#ifndef QCHANNEL_HIERARCHY_HPP_
#define QCHANNEL_HIERARCHY_HPP_

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qchannel/solver.hpp"

namespace qchannel {

enum class HierarchyConstraint {
  kSuperopOrthogonal,  // <U|S|U^[s']> = 0
  kPlainOrthogonal,    // <U|U^[s']> = 0
};

struct HierarchyOptions {
  /// Requests above the cap are truncated with a warning.
  int level_cap = 7;
  HierarchyConstraint variant = HierarchyConstraint::kSuperopOrthogonal;
  /// Extra random starts per level; see solve_multistart.
  int restarts = 4;
};

struct HierarchyLevel {
  MappingOperator u;  // n_s = 1, orthonormal rows
  Matrix lambda;      // D x D
  double fidelity = 0.0;
  int iterations = 0;
};

struct Hierarchy {
  std::shared_ptr<const Superoperator> superop;
  std::vector<HierarchyLevel> levels;
  std::vector<std::string> warnings;
  /// False when a level failed; `levels` then holds the ones before it.
  bool complete = true;
  std::string failure;

  std::size_t size() const { return levels.size(); }

  /// <U^[s]|S|U^[s']>; diagonal F^[s] and zero elsewhere by construction.
  Matrix gram() const {
    const auto k = static_cast<Eigen::Index>(levels.size());
    Matrix g(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index b = 0; b <= a; ++b)
        g(a, b) = g(b, a) = inner(*superop, levels[a].u, levels[b].u);
    return g;
  }

  /// <U^[s]|U^[s']>, reported only; these need not vanish.
  Matrix plain_overlaps() const {
    const auto k = static_cast<Eigen::Index>(levels.size());
    Matrix g(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index b = 0; b <= a; ++b)
        g(a, b) = g(b, a) =
            levels[a].u.flatten().dot(levels[b].u.flatten());
    return g;
  }

  std::vector<std::pair<MappingOperator, double>> pairs() const {
    std::vector<std::pair<MappingOperator, double>> out;
    for (const auto& l : levels) out.emplace_back(l.u, l.fidelity);
    return out;
  }
};

/// Solves n_s = 1 problems level by level, adding one external row per
/// earlier level. A level that fails to converge (or throws) stops the build
/// and the partial hierarchy is returned with complete = false.
inline Hierarchy build_hierarchy(std::shared_ptr<const Superoperator> s,
                                 int levels, SolverConfig config,
                                 const HierarchyOptions& options = {}) {
  if (!s) fail(ErrorCode::kBadSpec, "build_hierarchy: null superoperator");
  const Eigen::Index dim = s->flat_dim();
  if (levels < 1 || levels > dim) {
    fail(ErrorCode::kBadLevel, "level count " + std::to_string(levels) +
                                   " outside [1, " + std::to_string(dim) + "]");
  }
  Hierarchy h;
  h.superop = s;
  if (levels > options.level_cap) {
    h.warnings.push_back("requested " + std::to_string(levels) +
                         " levels, truncated to " +
                         std::to_string(options.level_cap));
    levels = options.level_cap;
  }
  config.n_s = 1;
  config.initial.reset();

  ConstraintSet external(dim);
  for (int level = 0; level < levels; ++level) {
    Solution sol;
    try {
      SolverConfig level_cfg = config;
      level_cfg.seed = derive_seed(config.seed, static_cast<std::uint64_t>(level));
      sol = solve_multistart(*s, level_cfg, external, options.restarts);
    } catch (const Error& e) {
      h.complete = false;
      h.failure = "level " + std::to_string(level) + ": " + e.what();
      return h;
    }
    if (!sol.converged) {
      h.complete = false;
      h.failure = "level " + std::to_string(level) + " did not converge in " +
                  std::to_string(sol.iterations) + " iterations";
      return h;
    }
    const Vector u = sol.b.flatten();
    external.add(options.variant == HierarchyConstraint::kSuperopOrthogonal
                     ? Vector(s->matrix() * u)
                     : u,
                 ConstraintOrigin::kExternal);
    HierarchyLevel lvl{sol.b, sol.multipliers.lambda, sol.fidelity,
                       sol.iterations};
    lvl.u.flags.orthonormal_rows = true;
    h.levels.push_back(std::move(lvl));
  }
  return h;
}

struct HierarchyWeights {
  std::vector<double> w;
};

/// w_s = <V|S|U^[s]> / <U^[s]|S|U^[s]>
inline HierarchyWeights weights_from_operator(const Hierarchy& h,
                                              const MappingOperator& v) {
  if (h.levels.empty()) fail(ErrorCode::kBadLevel, "empty hierarchy");
  HierarchyWeights out;
  for (const auto& lvl : h.levels) {
    if (!(lvl.fidelity > 0.0)) {
      fail(ErrorCode::kBadLevel, "level fidelity is not positive");
    }
    out.w.push_back(inner(*h.superop, v, lvl.u) / lvl.fidelity);
  }
  return out;
}

/// Mixed unitary channel with weights |w_s|^2 / sum |w|^2.
inline MixedUnitaryChannel to_mixed_unitary(const Hierarchy& h,
                                            const HierarchyWeights& w) {
  if (w.w.size() != h.levels.size()) {
    fail(ErrorCode::kBadShape, "weight count differs from level count");
  }
  double total = 0.0;
  for (double x : w.w) total += x * x;
  if (!(total > 0.0)) fail(ErrorCode::kZeroWeights, "all weights are zero");
  MixedUnitaryChannel ch;
  for (std::size_t s = 0; s < w.w.size(); ++s) {
    ch.weights.push_back(w.w[s] * w.w[s] / total);
    ch.unitaries.push_back(h.levels[s].u);
  }
  return ch;
}

/// Upper bound k^2 - k + 1 on the number of unitaries in a mixed unitary
/// channel of Kraus rank k.
inline int mixed_unitary_rank_bound(int kraus_rank) {
  if (kraus_rank < 1) fail(ErrorCode::kBadRank, "Kraus rank must be >= 1");
  return kraus_rank * kraus_rank - kraus_rank + 1;
}

}  // namespace qchannel

#endif  // QCHANNEL_HIERARCHY_HPP_
