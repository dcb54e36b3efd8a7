// Copyright 2026 The Occlusynth Authors
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

#ifndef OCCLUSYNTH_ERROR_HPP_
#define OCCLUSYNTH_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace occlusynth {

/// Bad inputs: mismatched dimensions, broken invariants, malformed
/// configuration or annotation content. Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem and codec failures: unreadable files, write errors.
/// Maps to CLI exit code 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace occlusynth

#endif  // OCCLUSYNTH_ERROR_HPP_
