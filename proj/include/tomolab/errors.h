// Copyright 2026 The tomolab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TOMOLAB_ERRORS_H
#define TOMOLAB_ERRORS_H

#include <stdexcept>
#include <string>

namespace tomolab {

/// A vector or matrix that should describe a qubit state does not.
struct InvalidStateError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An operation was called outside its documented domain.
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A closed-form quantity was requested for a protocol that has none.
struct UnsupportedAnalyticError : std::domain_error {
    using std::domain_error::domain_error;
};

}  // namespace tomolab

#endif
