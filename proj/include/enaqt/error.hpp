// Copyright 2026 The enaqt-fcn Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace enaqt {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters or initial state failed validation.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// The generator has no inverse (no absorption channel, or a dark subspace).
class SingularGenerator : public Error {
 public:
  using Error::Error;
};

/// A closed-form expression was evaluated where its denominator vanishes.
class DegenerateDenominator : public Error {
 public:
  using Error::Error;
};

/// The full superoperator would exceed the configured site cap.
class DimensionCap : public Error {
 public:
  using Error::Error;
};

/// Time integration reached its horizon with population still left.
class HorizonExceeded : public Error {
 public:
  using Error::Error;
};

class NonConvergent : public Error {
 public:
  using Error::Error;
};

/// A physical invariant (Hermiticity, positivity, trace) was violated
/// along an evolution.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace enaqt
