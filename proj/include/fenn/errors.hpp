// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace fenn {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two fixed-point operands were combined without matching formats.
struct FormatMismatchError : Error { using Error::Error; };

// A real value does not fit the requested fixed-point format.
struct OutOfRangeError : Error { using Error::Error; };

// An instruction field (register index, immediate, shift) is out of range.
struct FieldOverflowError : Error { using Error::Error; };

// A 32-bit word does not decode to any implemented instruction.
struct IllegalInstructionError : Error { using Error::Error; };

// A label was referenced but never bound before finalize().
struct UnboundLabelError : Error { using Error::Error; };

// A label was bound twice.
struct DuplicateBindError : Error { using Error::Error; };

// A branch or jump target is outside the reach of its immediate.
struct BranchOutOfRangeError : Error { using Error::Error; };

// Two marked code regions overlap.
struct RegionOverlapError : Error { using Error::Error; };

// An RNG seed image contains an all-zero lane (the absorbing state).
struct ZeroLaneSeedError : Error { using Error::Error; };

// A program image does not fit the configured memory sizes.
struct ImageTooLargeError : Error { using Error::Error; };

// A kernel or experiment was configured with unusable parameters.
struct ConfigError : Error { using Error::Error; };

// NRMSE is undefined because the reference trace has zero range.
struct DegenerateRangeError : Error { using Error::Error; };

// A file could not be read, written, or parsed.
struct IoError : Error { using Error::Error; };

} // namespace fenn
