// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace pdn {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Homomorphic-encryption layer.
class ParameterError : public Error { using Error::Error; };
class EncodingError : public Error { using Error::Error; };
class LevelError : public Error { using Error::Error; };
class ScaleError : public Error { using Error::Error; };
/// Raised when the modulus chain has no prime left to drop. Callers are
/// expected to recover by re-encrypting from the key holder.
class DepthError : public Error { using Error::Error; };
/// Malformed, truncated or otherwise undecodable byte buffer.
class FormatError : public Error { using Error::Error; };
class ParamsMismatchError : public FormatError { using FormatError::FormatError; };

// Tensor / numeric layer.
class InputError : public Error { using Error::Error; };
class ShapeError : public Error { using Error::Error; };
class ScheduleError : public Error { using Error::Error; };
class UndefinedMetricError : public Error { using Error::Error; };

// Protocol / session layer.
class ProtocolError : public Error { using Error::Error; };
class SessionError : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };

}  // namespace pdn
