// SPDX-License-Identifier: Apache-2.0
#pragma once

// Per-lane xoroshiro32++ generators. Each of the 32 SIMD lanes owns an
// independent 32-bit state split across two 16-bit halves (s0, s1); the
// machine keeps the halves in two special vector registers so a full
// vector of 16-bit variates can be produced every cycle.
//
// Recurrence (constants A=13, B=5, C=10, D=9):
//   output = rotl16(s0 + s1, 9) + s0
//   s1 ^= s0
//   s0' = rotl16(s0, 13) ^ s1 ^ (s1 << 5)
//   s1' = rotl16(s1, 10)
//
// The all-zero state is a fixed point of the recurrence and is rejected by
// every seeding path.

#include <array>
#include <cstdint>

#include "fenn/errors.hpp"

namespace fenn {

inline constexpr int kLanes = 32;

inline constexpr uint16_t rotl16(uint16_t x, int k)
{
    return uint16_t(uint16_t(x << k) | uint16_t(x >> (16 - k)));
}

struct LaneRngState {
    uint16_t s0 = 0;
    uint16_t s1 = 0;

    constexpr bool operator==(const LaneRngState&) const = default;
    constexpr bool is_zero() const { return s0 == 0 && s1 == 0; }
};

// Advance one lane and return its 16-bit output word.
inline uint16_t next16(LaneRngState& s)
{
    const uint16_t s0 = s.s0;
    uint16_t s1 = s.s1;
    const uint16_t out = uint16_t(rotl16(uint16_t(s0 + s1), 9) + s0);
    s1 ^= s0;
    s.s0 = uint16_t(rotl16(s0, 13) ^ s1 ^ uint16_t(s1 << 5));
    s.s1 = rotl16(s1, 10);
    return out;
}

// One 16-bit word per lane: [0] holds every lane's s0, [1] every lane's s1.
// This is exactly the layout of the two 64-byte vector-memory seed images
// consumed by the VLOAD.R0 / VLOAD.R1 instructions.
using SeedImage = std::array<std::array<uint16_t, kLanes>, 2>;

struct VectorRngState {
    std::array<LaneRngState, kLanes> lanes{};

    constexpr bool operator==(const VectorRngState&) const = default;

    // Advance all 32 lanes by one step.
    std::array<uint16_t, kLanes> next()
    {
        std::array<uint16_t, kLanes> out{};
        for (int i = 0; i < kLanes; ++i) {
            out[size_t(i)] = next16(lanes[size_t(i)]);
        }
        return out;
    }
};

// Build lane states from a seed image. Throws ZeroLaneSeedError if any
// lane's (s0, s1) pair is all zero.
VectorRngState seed_state(const SeedImage& image);

// Derive a full-entropy seed image from a 64-bit seed: lane i's s0 and s1
// are taken from distinct splitmix64 streams mixed with the lane index, and
// any lane that comes out all-zero is re-mixed until it is not.
SeedImage make_seed_image(uint64_t global_seed);

// splitmix64 finalizer; also used by experiment drivers that need derived
// deterministic sub-seeds.
uint64_t splitmix64(uint64_t x);

} // namespace fenn
