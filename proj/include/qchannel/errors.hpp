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

#ifndef QCHANNEL_ERRORS_HPP_
#define QCHANNEL_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace qchannel {

enum class ErrorCode {
  kNonFinite,
  kNotPSD,
  kDegenerateGram,
  kBadShape,
  kBadRank,
  kBadSpec,
  kBadDensity,
  kSingularSystem,
  kBadLevel,
  kZeroWeights,
  kOverflow,
  kNotConverged,
  kIo,
};

inline std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kNotPSD: return "NotPSD";
    case ErrorCode::kDegenerateGram: return "DegenerateGram";
    case ErrorCode::kBadShape: return "BadShape";
    case ErrorCode::kBadRank: return "BadRank";
    case ErrorCode::kBadSpec: return "BadSpec";
    case ErrorCode::kBadDensity: return "BadDensity";
    case ErrorCode::kSingularSystem: return "SingularSystem";
    case ErrorCode::kBadLevel: return "BadLevel";
    case ErrorCode::kZeroWeights: return "ZeroWeights";
    case ErrorCode::kOverflow: return "Overflow";
    case ErrorCode::kNotConverged: return "NotConverged";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

// All library failures are reported through this one exception type; the
// code distinguishes them.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace qchannel

#endif  // QCHANNEL_ERRORS_HPP_
