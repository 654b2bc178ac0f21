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

// JSON documents for datasets, superoperators, solutions and hierarchies.
// Matrices are nested row-major arrays. Needs nlohmann/json.

#ifndef QCHANNEL_SERIALIZE_HPP_
#define QCHANNEL_SERIALIZE_HPP_

#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "qchannel/dynamics.hpp"
#include "qchannel/hierarchy.hpp"

namespace qchannel {

using Json = nlohmann::json;

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j.front().is_array()) {
    fail(ErrorCode::kBadShape, "matrix must be a nonempty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      fail(ErrorCode::kBadShape, "ragged matrix rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) fail(ErrorCode::kNonFinite, "non-numeric entry");
      m(i, c) = v.get<double>();
    }
  }
  if (!m.allFinite()) fail(ErrorCode::kNonFinite, "matrix entries");
  return m;
}

inline Json dataset_to_json(const MappingDataset& ds) {
  Json records = Json::array();
  for (const auto& r : ds.records()) {
    records.push_back({{"omega", r.omega},
                       {"rho", matrix_to_json(r.rho.matrix())},
                       {"varrho", matrix_to_json(r.varrho.matrix())}});
  }
  return {{"n", ds.n()}, {"D", ds.d()}, {"records", std::move(records)}};
}

/// Symmetrizes and validates every density matrix.
inline MappingDataset dataset_from_json(const Json& j) {
  try {
    MappingDataset ds(j.at("n").get<int>(), j.at("D").get<int>());
    for (const Json& r : j.at("records")) {
      ds.add({DensityMatrix(matrix_from_json(r.at("rho"))),
              DensityMatrix(matrix_from_json(r.at("varrho"))),
              r.value("omega", 1.0)});
    }
    return ds;
  } catch (const Json::exception& e) {
    fail(ErrorCode::kBadSpec, std::string("dataset document: ") + e.what());
  }
}

inline Json superop_to_json(const Superoperator& s) {
  Json data = Json::array();
  const Matrix& m = s.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  return {{"D", s.d_out()}, {"n", s.d_in()}, {"kind", kind_name(s.kind())},
          {"data", std::move(data)}};
}

inline Superoperator superop_from_json(const Json& j) {
  try {
    const int dd = j.at("D").get<int>();
    const int n = j.at("n").get<int>();
    const Eigen::Index dim = static_cast<Eigen::Index>(dd) * n;
    const Json& data = j.at("data");
    if (static_cast<Eigen::Index>(data.size()) != dim * dim) {
      fail(ErrorCode::kBadShape, "superoperator data length");
    }
    Matrix m(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
      for (Eigen::Index c = 0; c < dim; ++c)
        m(i, c) = data[static_cast<std::size_t>(i * dim + c)].get<double>();
    return Superoperator(dd, n, parse_kind(j.at("kind").get<std::string>()), m);
  } catch (const Json::exception& e) {
    fail(ErrorCode::kBadSpec, std::string("superoperator document: ") + e.what());
  }
}

inline Json operator_to_json(const MappingOperator& b) {
  Json blocks = Json::array();
  for (const Matrix& blk : b.blocks()) blocks.push_back(matrix_to_json(blk));
  return {{"n_s", b.n_s()}, {"D", b.d_out()}, {"n", b.d_in()},
          {"blocks", std::move(blocks)}};
}

inline MappingOperator operator_from_json(const Json& j) {
  std::vector<Matrix> blocks;
  for (const Json& blk : j.at("blocks")) blocks.push_back(matrix_from_json(blk));
  return MappingOperator(std::move(blocks));
}

inline Json solution_to_json(const Solution& s) {
  Json j = {{"operator", operator_to_json(s.b)},
            {"lambda", matrix_to_json(s.multipliers.lambda)},
            {"nu", matrix_to_json(s.multipliers.nu)},
            {"fidelity", s.fidelity},
            {"mu_selected", s.mu_selected},
            {"residual", s.residual},
            {"constraint_violation", s.constraint_violation},
            {"iterations", s.iterations},
            {"reduced_dim", s.reduced_dim},
            {"converged", s.converged}};
  if (s.multipliers.lambda_tp) {
    j["lambda_tp"] = matrix_to_json(*s.multipliers.lambda_tp);
  }
  return j;
}

inline Solution solution_from_json(const Json& j) {
  try {
    Solution s;
    s.b = operator_from_json(j.at("operator"));
    s.multipliers.lambda = matrix_from_json(j.at("lambda"));
    s.multipliers.nu = matrix_from_json(j.at("nu"));
    if (j.contains("lambda_tp")) {
      s.multipliers.lambda_tp = matrix_from_json(j.at("lambda_tp"));
    }
    s.fidelity = j.at("fidelity").get<double>();
    s.mu_selected = j.at("mu_selected").get<double>();
    s.residual = j.at("residual").get<double>();
    s.constraint_violation = j.value("constraint_violation", 0.0);
    s.iterations = j.at("iterations").get<int>();
    s.reduced_dim = j.value("reduced_dim", Eigen::Index{0});
    s.converged = j.at("converged").get<bool>();
    return s;
  } catch (const Json::exception& e) {
    fail(ErrorCode::kBadSpec, std::string("solution document: ") + e.what());
  }
}

inline Json hierarchy_to_json(const Hierarchy& h,
                              const HierarchyWeights* weights = nullptr) {
  Json levels = Json::array();
  for (const auto& l : h.levels) {
    levels.push_back({{"u", matrix_to_json(l.u.block(0))},
                      {"lambda", matrix_to_json(l.lambda)},
                      {"fidelity", l.fidelity},
                      {"iterations", l.iterations}});
  }
  Json j = {{"levels", std::move(levels)},
            {"complete", h.complete},
            {"warnings", h.warnings}};
  if (!h.complete) j["failure"] = h.failure;
  if (!h.levels.empty()) {
    j["gram"] = matrix_to_json(h.gram());
    j["plain_overlaps"] = matrix_to_json(h.plain_overlaps());
  }
  if (weights) j["weights"] = weights->w;
  return j;
}

inline Hierarchy hierarchy_from_json(const Json& j,
                                     std::shared_ptr<const Superoperator> s) {
  try {
    Hierarchy h;
    h.superop = std::move(s);
    for (const Json& l : j.at("levels")) {
      HierarchyLevel lvl{MappingOperator::single(matrix_from_json(l.at("u"))),
                         matrix_from_json(l.at("lambda")),
                         l.at("fidelity").get<double>(),
                         l.value("iterations", 0)};
      lvl.u.flags.orthonormal_rows = true;
      h.levels.push_back(std::move(lvl));
    }
    h.complete = j.value("complete", true);
    h.failure = j.value("failure", std::string());
    h.warnings = j.value("warnings", std::vector<std::string>{});
    return h;
  } catch (const Json::exception& e) {
    fail(ErrorCode::kBadSpec, std::string("hierarchy document: ") + e.what());
  }
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path + "' for reading");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    fail(ErrorCode::kIo, "'" + path + "': " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) fail(ErrorCode::kIo, "write to '" + path + "' failed");
}

inline void write_json_file(const std::string& path, const Json& j) {
  write_text_file(path, j.dump(1) + "\n");
}

}  // namespace qchannel

#endif  // QCHANNEL_SERIALIZE_HPP_
