// Copyright 2026 The qcoh developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QCOH_ERRORS_HPP
#define QCOH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qcoh {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatchError : Error {
  using Error::Error;
};

struct NonHermitianError : Error {
  using Error::Error;
};

struct NotPsdError : Error {
  using Error::Error;
};

struct SupportViolationError : Error {
  using Error::Error;
};

// Raised when an SDP-backed quantity cannot be certified (solver did not
// reach Optimal status).
struct SolverError : Error {
  using Error::Error;
};

// CLI-level failures, mapped to distinct process exit codes.
struct ParseError : Error {
  using Error::Error;
};

struct ValidationError : Error {
  using Error::Error;
};

}  // namespace qcoh

#endif  // QCOH_ERRORS_HPP
