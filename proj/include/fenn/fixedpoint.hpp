// SPDX-License-Identifier: Apache-2.0
#pragma once

// 16-bit fixed-point arithmetic as implemented by the vector unit's lane
// datapath: two's-complement raw values tagged with a Q format, saturating
// and wrapping add/sub, and a fused multiply of the form
//
//     result = low16((A * B + R) >> shift)
//
// where the rounding increment R selects the rounding mode:
//   RoundToZero    R = 0                      (arithmetic shift == floor)
//   RoundToNearest R = 2^(shift-1)            (round half away from floor)
//   Stochastic     R = entropy & (2^shift - 1)
//
// "RoundToZero" keeps the conventional hardware name even though the
// arithmetic shift floors (rounds down) for negative products.

#include <cmath>
#include <cstdint>
#include <sstream>

#include "fenn/errors.hpp"

namespace fenn {

inline constexpr int16_t kFixMin = -32768;
inline constexpr int16_t kFixMax = 32767;

enum class RoundingMode : uint8_t {
    RoundToZero = 0,
    RoundToNearest = 1,
    Stochastic = 2,
};

inline const char* to_string(RoundingMode m)
{
    switch (m) {
    case RoundingMode::RoundToZero: return "round-to-zero";
    case RoundingMode::RoundToNearest: return "round-to-nearest";
    case RoundingMode::Stochastic: return "stochastic";
    }
    return "?";
}

// Q format descriptor: S(15-N).N, i.e. a sign bit, 15-N integer bits and
// N fractional bits. frac_bits must be in [0, 15].
struct QFormat {
    int frac_bits = 0;

    constexpr bool operator==(const QFormat&) const = default;

    // Value of one least-significant bit.
    double ulp() const { return std::ldexp(1.0, -frac_bits); }
    // Smallest / largest representable real value.
    double min_value() const { return std::ldexp(double(kFixMin), -frac_bits); }
    double max_value() const { return std::ldexp(double(kFixMax), -frac_bits); }
};

// Validating constructor; use for formats that come from config or files.
inline QFormat qformat(int frac_bits)
{
    if (frac_bits < 0 || frac_bits > 15) {
        std::ostringstream msg;
        msg << "QFormat frac_bits " << frac_bits << " outside [0, 15]";
        throw OutOfRangeError(msg.str());
    }
    return QFormat{frac_bits};
}

inline std::string to_string(QFormat f)
{
    return "S" + std::to_string(15 - f.frac_bits) + "." + std::to_string(f.frac_bits);
}

// A raw 16-bit value tagged with its format.
struct Fix16 {
    int16_t raw = 0;
    QFormat format{};

    constexpr bool operator==(const Fix16&) const = default;

    double to_real() const { return std::ldexp(double(raw), -format.frac_bits); }
};

// ---------------------------------------------------------------------------
// Raw-value operations (what a single SIMD lane computes).
// ---------------------------------------------------------------------------

constexpr int16_t sat_add_raw(int16_t a, int16_t b)
{
    const int32_t s = int32_t(a) + int32_t(b);
    if (s > kFixMax) return kFixMax;
    if (s < kFixMin) return kFixMin;
    return int16_t(s);
}

constexpr int16_t sat_sub_raw(int16_t a, int16_t b)
{
    const int32_t s = int32_t(a) - int32_t(b);
    if (s > kFixMax) return kFixMax;
    if (s < kFixMin) return kFixMin;
    return int16_t(s);
}

constexpr int16_t wrap_add_raw(int16_t a, int16_t b)
{
    return int16_t(uint16_t(uint32_t(int32_t(a) + int32_t(b))));
}

constexpr int16_t wrap_sub_raw(int16_t a, int16_t b)
{
    return int16_t(uint16_t(uint32_t(int32_t(a) - int32_t(b))));
}

// Rounding increment for (a * b + R) >> shift. For Stochastic the low
// `shift` bits of `entropy` are used; shift == 0 always gives R == 0.
constexpr int32_t rounding_increment(RoundingMode mode, int shift, uint16_t entropy)
{
    switch (mode) {
    case RoundingMode::RoundToZero:
        return 0;
    case RoundingMode::RoundToNearest:
        return shift > 0 ? (int32_t(1) << (shift - 1)) : 0;
    case RoundingMode::Stochastic:
        return int32_t(entropy) & ((int32_t(1) << shift) - 1);
    }
    return 0;
}

// The lane multiplier: widen to 32 bits, add the rounding increment,
// arithmetic-shift right, keep the low 16 bits (wrap-around on overflow).
// shift must be in [0, 15].
constexpr int16_t fx_mul_raw(int16_t a, int16_t b, int shift, RoundingMode mode,
                             uint16_t entropy = 0)
{
    const int32_t product = int32_t(a) * int32_t(b);
    const int32_t shifted = (product + rounding_increment(mode, shift, entropy)) >> shift;
    return int16_t(uint16_t(uint32_t(shifted)));
}

// ---------------------------------------------------------------------------
// Format-checked operations on tagged values.
// ---------------------------------------------------------------------------

namespace detail {

inline void require_same_format(const Fix16& a, const Fix16& b, const char* op)
{
    if (a.format != b.format) {
        std::ostringstream msg;
        msg << op << " requires matching formats, got " << to_string(a.format)
            << " and " << to_string(b.format);
        throw FormatMismatchError(msg.str());
    }
}

inline void require_shift(int shift)
{
    if (shift < 0 || shift > 15) {
        std::ostringstream msg;
        msg << "multiply shift " << shift << " outside [0, 15]";
        throw OutOfRangeError(msg.str());
    }
}

} // namespace detail

inline Fix16 sat_add(const Fix16& a, const Fix16& b)
{
    detail::require_same_format(a, b, "sat_add");
    return {sat_add_raw(a.raw, b.raw), a.format};
}

inline Fix16 sat_sub(const Fix16& a, const Fix16& b)
{
    detail::require_same_format(a, b, "sat_sub");
    return {sat_sub_raw(a.raw, b.raw), a.format};
}

inline Fix16 wrap_add(const Fix16& a, const Fix16& b)
{
    detail::require_same_format(a, b, "wrap_add");
    return {wrap_add_raw(a.raw, b.raw), a.format};
}

inline Fix16 wrap_sub(const Fix16& a, const Fix16& b)
{
    detail::require_same_format(a, b, "wrap_sub");
    return {wrap_sub_raw(a.raw, b.raw), a.format};
}

// Multiply with an explicit shift. The result has
// a.frac_bits + b.frac_bits - shift fractional bits, which must itself be a
// valid format; a same-format multiply therefore uses shift == frac_bits,
// and multiplying state by an S0.15 gain with shift 15 keeps the state format.
inline Fix16 fx_mul(const Fix16& a, const Fix16& b, int shift, RoundingMode mode,
                    uint16_t entropy = 0)
{
    detail::require_shift(shift);
    const int result_frac = a.format.frac_bits + b.format.frac_bits - shift;
    if (result_frac < 0 || result_frac > 15) {
        std::ostringstream msg;
        msg << "fx_mul of " << to_string(a.format) << " by " << to_string(b.format)
            << " with shift " << shift << " yields invalid format";
        throw FormatMismatchError(msg.str());
    }
    return {fx_mul_raw(a.raw, b.raw, shift, mode, entropy), QFormat{result_frac}};
}

// Quantize a real value into `fmt`. RoundToZero floors (matching the
// arithmetic shift), RoundToNearest rounds half up, Stochastic adds
// entropy / 2^16 before flooring. Values whose rounded raw falls outside
// the 16-bit range raise OutOfRangeError.
inline Fix16 quantize(double x, QFormat fmt, RoundingMode mode = RoundingMode::RoundToNearest,
                      uint16_t entropy = 0)
{
    if (!std::isfinite(x)) {
        throw OutOfRangeError("quantize of non-finite value");
    }
    const double scaled = std::ldexp(x, fmt.frac_bits);
    double biased = scaled;
    switch (mode) {
    case RoundingMode::RoundToZero: break;
    case RoundingMode::RoundToNearest: biased += 0.5; break;
    case RoundingMode::Stochastic: biased += double(entropy) / 65536.0; break;
    }
    const double rounded = std::floor(biased);
    if (rounded < double(kFixMin) || rounded > double(kFixMax)) {
        std::ostringstream msg;
        msg << "value " << x << " does not fit " << to_string(fmt);
        throw OutOfRangeError(msg.str());
    }
    return {int16_t(rounded), fmt};
}

inline double to_real(const Fix16& v) { return v.to_real(); }

} // namespace fenn
