/*
 * Copyright 2026 The krrlev Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef KRRLEV_ERRORS_HPP
#define KRRLEV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace krrlev {

// Precondition violations (bad sizes, out-of-range parameters, non-finite
// input) are reported with std::invalid_argument / std::out_of_range.
// The types below cover the remaining failure classes.

/// A numerical procedure could not produce a meaningful result.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string &what) : std::runtime_error(what) {}
};

/// Every eigenvalue of the sampled overlap block fell below the
/// pseudo-inverse tolerance.
class DegenerateSketchError : public NumericalError {
public:
  explicit DegenerateSketchError(const std::string &what)
      : NumericalError(what) {}
};

class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string &what) : std::runtime_error(what) {}
};

class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

} // namespace krrlev

#endif
