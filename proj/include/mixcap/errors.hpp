// Copyright 2026 The mixcap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace mixcap {

/// Base class for all mixcap errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File / WAV decoding errors.
struct IoError : Error {
  using Error::Error;
};
struct NotWavError : Error {
  using Error::Error;
};
struct UnsupportedEncodingError : Error {
  using Error::Error;
};
struct CorruptHeaderError : Error {
  using Error::Error;
};

// DSP errors.
struct ClipTooShortError : Error {
  using Error::Error;
};
struct RateMismatchError : Error {
  using Error::Error;
};
struct SilentInputError : Error {
  using Error::Error;
};

// Composition errors.
struct CorpusTooSmallError : Error {
  using Error::Error;
};
struct MissingSourceError : Error {
  using Error::Error;
};

// Caption backend errors.
struct BackendError : Error {
  using Error::Error;
};

/// Raised when a backend response cannot be parsed; keeps the raw
/// response text for auditing.
struct ParseError : Error {
  ParseError(const std::string& what, std::string raw_response)
      : Error(what), raw(std::move(raw_response)) {}
  std::string raw;
};

// Hard-negative errors.
struct NoInvertibleTransformsError : Error {
  using Error::Error;
};
struct NotEnoughEligibleError : Error {
  using Error::Error;
};

// Evaluation errors.
struct DimensionMismatchError : Error {
  using Error::Error;
};
struct MissingIdsError : Error {
  using Error::Error;
};

/// Precondition violations (bad arguments, malformed manifests, ...).
struct InvalidArgumentError : Error {
  using Error::Error;
};

}  // namespace mixcap
