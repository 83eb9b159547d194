//
// Copyright 2026 The DialogAug Authors
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
//

#ifndef DIALOGAUG_ERRORS_H_
#define DIALOGAUG_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dialogaug {

// Base class for every error raised by the library. The CLI maps the
// subclasses onto its exit-code contract: ParseError, ValidationError and
// ArgumentError exit with 1, IoError with 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input that does not parse as the declared format.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Input that parses but violates a data-model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Missing, unreadable or unwritable files.
class IoError : public Error {
 public:
  using Error::Error;
};

// Invalid argument to a library call (e.g. a non-positive variant count).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Transport-level failure talking to a rewrite backend. Always retryable.
class BackendError : public Error {
 public:
  using Error::Error;
};

}  // namespace dialogaug

#endif  // DIALOGAUG_ERRORS_H_
