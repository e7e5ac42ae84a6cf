// Copyright 2026 The shadowpair Authors.
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

namespace shadowpair {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition (bad argument, coincident points).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Two masks with different width/height were combined.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A file or JSON document could not be parsed into the data model.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Parsed data violates a data-model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// The scene generator could not place its objects within the retry budget.
class PlacementError : public Error {
 public:
  using Error::Error;
};

}  // namespace shadowpair
