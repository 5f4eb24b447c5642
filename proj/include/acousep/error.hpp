// acousep/error.hpp
//
// Copyright 2026 The acousep authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ACOUSEP_ERROR_HPP_
#define ACOUSEP_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace acousep {

// Root of the library's exception hierarchy.  Everything acousep throws on
// its own behalf derives from Error, so callers can distinguish library
// failures from std:: failures with a single catch clause.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A caller-supplied value is outside its documented domain (negative sample
// rate, zero-length block, depth outside [0, 1], ...).
class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what) : Error(what) {}
};

// A file or byte stream does not parse as the expected format.  Carries the
// byte offset at which parsing gave up, when known; offset() is npos when the
// failure is not tied to a specific position (e.g. truncated stream).
class FormatError : public Error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  FormatError(const std::string& what, std::size_t offset = npos)
      : Error(offset == npos ? what
                             : what + " (byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// A numerical procedure hit a degenerate input it cannot recover from:
// singular covariance after regularization, a mixing matrix with excessive
// condition number, non-finite samples where finite ones are required.
class DegeneracyError : public Error {
 public:
  explicit DegeneracyError(const std::string& what) : Error(what) {}
};

// A configuration object is internally inconsistent (band above Nyquist,
// empty class list, train fraction outside (0, 1), ...).
class ConfigurationError : public Error {
 public:
  explicit ConfigurationError(const std::string& what) : Error(what) {}
};

// Model training cannot proceed: fewer than two classes present, all feature
// dimensions constant, SMO failed to make progress.
class TrainingError : public Error {
 public:
  explicit TrainingError(const std::string& what) : Error(what) {}
};

// An experiment run exceeded its failed-trial budget or could not assemble a
// usable train/test split.
class ExperimentError : public Error {
 public:
  explicit ExperimentError(const std::string& what) : Error(what) {}
};

}  // namespace acousep

#endif  // ACOUSEP_ERROR_HPP_
