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

// Synthetic problems and the two sweep experiments: proxy fidelities of the
// generating channel versus input rank, and unitary hierarchies built for a
// mixed unitary channel.

#ifndef QCHANNEL_EXPERIMENTS_HPP_
#define QCHANNEL_EXPERIMENTS_HPP_

#include <cstdint>
#include <future>
#include <memory>
#include <string>
#include <vector>

#include "qchannel/qchannel.hpp"

namespace qchannel {

/// n_s = 1: random partial unitary. n_s > 1: random trace-preserving Kraus
/// stack (needs n_s >= min_kraus_rank).
inline MappingOperator random_channel(int d_out, int d_in, int n_s, Rng& rng) {
  if (n_s == 1) return random_partial_unitary(d_out, d_in, rng);
  return random_kraus_channel(d_out, d_in, n_s, rng);
}

/// n_s Haar partial unitaries with weights drawn uniformly from the simplex.
inline MixedUnitaryChannel random_mixed_unitary(int d_out, int d_in, int n_s,
                                                Rng& rng) {
  if (n_s < 1) fail(ErrorCode::kBadRank, "mixture needs n_s >= 1");
  MixedUnitaryChannel ch;
  double total = 0.0;
  for (int s = 0; s < n_s; ++s) {
    ch.weights.push_back(-std::log(1.0 - rng.uniform()));
    total += ch.weights.back();
  }
  for (double& w : ch.weights) w /= total;
  for (int s = 0; s < n_s; ++s) {
    ch.unitaries.push_back(random_partial_unitary(d_out, d_in, rng));
  }
  return ch;
}

/// m records rho -> Phi(rho) with random rank-n_r inputs. Outputs are
/// divided by their trace, which only matters for trace-decreasing maps.
inline MappingDataset map_dataset(const MappingOperator& channel, int n_r,
                                  int m, Rng& rng) {
  if (m < 1) fail(ErrorCode::kBadSpec, "observation count must be >= 1");
  MappingDataset ds(channel.d_in(), channel.d_out());
  for (int l = 0; l < m; ++l) {
    DensityMatrix rho = random_density(channel.d_in(), n_r, rng);
    DensityMatrix out =
        DensityMatrix::normalized(apply_channel(channel, rho.matrix()));
    ds.add({std::move(rho), std::move(out), 1.0});
  }
  return ds;
}

struct Fig1Row {
  int n_r = 0;
  Closeness proxy = Closeness::kRhoSigma;
  double fidelity = 0.0;
};

inline const std::vector<Closeness>& fig1_proxies() {
  static const std::vector<Closeness> kProxies = {
      Closeness::kRhoSigma, Closeness::kSqrt, Closeness::kVec, Closeness::kProp};
  return kProxies;
}

/// Total fidelity of the generating channel itself for N_r = 1..n. Every
/// N_r draws its inputs from its own derived seed, so the sweep points are
/// independent and run concurrently.
inline std::vector<Fig1Row> fig1_sweep(int n, int d, int n_s, int m,
                                       std::uint64_t seed,
                                       bool parallel = true) {
  Rng channel_rng(seed);
  const MappingOperator channel = random_channel(d, n, n_s, channel_rng);
  auto point = [&channel, m, seed](int n_r) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(n_r)));
    const MappingDataset ds = map_dataset(channel, n_r, m, rng);
    std::vector<Fig1Row> rows;
    for (Closeness p : fig1_proxies()) {
      rows.push_back({n_r, p, total_fidelity_dataset(p, ds, channel)});
    }
    return rows;
  };
  std::vector<std::future<std::vector<Fig1Row>>> futures;
  for (int n_r = 1; n_r <= n; ++n_r) {
    futures.push_back(std::async(
        parallel ? std::launch::async : std::launch::deferred, point, n_r));
  }
  std::vector<Fig1Row> out;
  for (auto& f : futures) {
    for (const Fig1Row& r : f.get()) out.push_back(r);
  }
  return out;
}

struct Table1Row {
  Closeness proxy = Closeness::kRhoSigma;
  double f_exact = 0.0;      // proxy total fidelity of the generating stack
  int level = 0;
  double f_level = 0.0;      // F^[level]
  double f_prop_level = 0.0; // overlap form Tr sqrt(varrho) sqrt(sigma)
  double f_prop_uhlmann_level = 0.0;
};

struct Table1Result {
  std::vector<Table1Row> rows;
  std::vector<std::string> warnings;
  MixedUnitaryChannel channel;
};

inline const std::vector<Closeness>& table1_proxies() {
  static const std::vector<Closeness> kProxies = {
      Closeness::kRhoSigma, Closeness::kVec, Closeness::kNrho2,
      Closeness::kSqrt};
  return kProxies;
}

/// Mixed unitary channel of n_s terms, m pure inputs, one hierarchy per
/// quadratic proxy.
inline Table1Result table1_experiment(int n, int d, int n_s, int m, int levels,
                                      std::uint64_t seed,
                                      const SolverConfig& config,
                                      const HierarchyOptions& options = {}) {
  Rng rng(seed);
  Table1Result res;
  res.channel = random_mixed_unitary(d, n, n_s, rng);
  const MappingOperator exact = res.channel.as_kraus();
  const MappingDataset ds = map_dataset(exact, 1, m, rng);
  for (Closeness proxy : table1_proxies()) {
    auto s = std::make_shared<const Superoperator>(
        build_superop(ds, kind_for_proxy(proxy)));
    const double f_exact = total_fidelity(*s, exact);
    const Hierarchy h = build_hierarchy(s, levels, config, options);
    for (const auto& w : h.warnings) res.warnings.push_back(w);
    if (!h.complete) {
      res.warnings.push_back(std::string(closeness_name(proxy)) +
                             ": partial hierarchy, " + h.failure);
    }
    for (std::size_t i = 0; i < h.levels.size(); ++i) {
      const MappingOperator& u = h.levels[i].u;
      res.rows.push_back(
          {proxy, f_exact, static_cast<int>(i), h.levels[i].fidelity,
           total_fidelity_dataset(Closeness::kPropOverlap, ds, u),
           total_fidelity_dataset(Closeness::kProp, ds, u)});
    }
  }
  return res;
}

}  // namespace qchannel

#endif  // QCHANNEL_EXPERIMENTS_HPP_
