// Copyright 2026 The dpmicro Authors
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

#ifndef DPMICRO_ERROR_H_
#define DPMICRO_ERROR_H_

#include <stdexcept>
#include <string>

namespace dpmicro {

// Base class for every error raised by the library. Callers that only need
// a diagnostic line can catch this and print what().
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (CSV cell, schema line, taxonomy edge).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dpmicro

#endif  // DPMICRO_ERROR_H_
