// Copyright 2026 The omnipano Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace omnipano {

// Precondition violations on arguments (bad sizes, out-of-range values,
// dimension mismatches) are reported with std::invalid_argument. The types
// below cover the geometric failure modes callers usually want to handle.

/// A fisheye pixel lies outside the image circle.
class OutOfCircleError : public std::domain_error {
 public:
  explicit OutOfCircleError(const std::string& what) : std::domain_error(what) {}
};

/// The viewing ray is parallel to (or above) the ground plane.
class HorizonError : public std::domain_error {
 public:
  explicit HorizonError(const std::string& what) : std::domain_error(what) {}
};

class DegenerateBoxError : public std::domain_error {
 public:
  explicit DegenerateBoxError(const std::string& what) : std::domain_error(what) {}
};

/// Parameters are individually valid but the combination is not supported.
class UnsupportedConfiguration : public std::invalid_argument {
 public:
  explicit UnsupportedConfiguration(const std::string& what) : std::invalid_argument(what) {}
};

/// Required metadata (camera height, camera model) is missing.
class ConfigurationError : public std::runtime_error {
 public:
  explicit ConfigurationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace omnipano
