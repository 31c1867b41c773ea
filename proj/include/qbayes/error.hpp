// Copyright 2026 The qbayes Authors
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

namespace qbayes {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes, dimension lists, masks or sample spaces do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A matrix expected to be Hermitian positive semidefinite is not.
class NotPsdError : public Error {
 public:
  using Error::Error;
};

/// A positive matrix is too close to singular to be inverted.
class SingularError : public Error {
 public:
  using Error::Error;
};

/// Conditioning on a predicate whose validity is (numerically) zero.
class ZeroValidityError : public Error {
 public:
  using Error::Error;
};

/// A classical marginal has a label with zero mass where full support is
/// required.
class SupportError : public Error {
 public:
  using Error::Error;
};

/// A value failed its type invariants (normalization, bounds, finiteness,
/// complete positivity, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace qbayes
