// Copyright 2026 The Woodpest Authors. All Rights Reserved.
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace woodpest {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied an argument outside the operation's domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Tensor extents do not conform.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed container (bad RIFF header, truncated chunk, bad checkpoint).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Well-formed container carrying an encoding we do not decode.
class UnsupportedFormatError : public FormatError {
 public:
  using FormatError::FormatError;
};

/// Dataset cannot satisfy a split/fold precondition.
class InvalidDatasetError : public Error {
 public:
  using Error::Error;
};

/// Loss or gradient went non-finite during training.
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace woodpest
