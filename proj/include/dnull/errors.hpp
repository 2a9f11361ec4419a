// Copyright 2026 The dnull Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace dnull {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Mismatched dimensions between states, operators or bases.
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// Invalid user input: bad configuration, broken invariants of inputs.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// The parameter cannot be recovered from the data / model (rank loss,
/// flat likelihood).
class IdentifiabilityError : public Error {
  public:
    using Error::Error;
};

/// A numerical routine failed to deliver a result of the required quality.
class NumericalError : public Error {
  public:
    using Error::Error;
};

} // namespace dnull
