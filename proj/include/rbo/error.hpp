// Copyright 2026 The RBO Verifier Authors
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

namespace rbo {

// Base for every error raised by the library. The CLI maps all of these to
// exit status 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bit width outside [0, 64], or a concatenation that would exceed it.
class InvalidWidth : public Error {
 public:
  using Error::Error;
};

// Key sequence whose length is not a power of two.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Key sequence that is not ascending.
class OrderError : public Error {
 public:
  using Error::Error;
};

// Operation called outside its precondition (stepping a finished receiver,
// sublevel out of range, mismatched trace/decomposition, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Invalid sweep or CLI configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace rbo
