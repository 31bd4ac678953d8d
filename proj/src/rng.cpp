// SPDX-License-Identifier: Apache-2.0
#include "fenn/rng.hpp"

#include <sstream>

namespace fenn {

uint64_t splitmix64(uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

VectorRngState seed_state(const SeedImage& image)
{
    VectorRngState state;
    for (int i = 0; i < kLanes; ++i) {
        LaneRngState lane{image[0][size_t(i)], image[1][size_t(i)]};
        if (lane.is_zero()) {
            std::ostringstream msg;
            msg << "seed image lane " << i << " is all zero";
            throw ZeroLaneSeedError(msg.str());
        }
        state.lanes[size_t(i)] = lane;
    }
    return state;
}

namespace {
// Distinct stream tags for the two state halves so s0 and s1 never come
// from the same splitmix64 sequence.
constexpr uint64_t kS0Stream = 0x53304C414E45ull; // "S0LANE"
constexpr uint64_t kS1Stream = 0x53314C414E45ull; // "S1LANE"
} // namespace

SeedImage make_seed_image(uint64_t global_seed)
{
    SeedImage image{};
    for (int i = 0; i < kLanes; ++i) {
        const uint64_t lane_tag = uint64_t(i) << 32;
        uint16_t s0 = uint16_t(splitmix64(global_seed ^ kS0Stream ^ lane_tag));
        uint16_t s1 = uint16_t(splitmix64(global_seed ^ kS1Stream ^ lane_tag));
        // Rejection re-mix: the all-zero pair is the recurrence's absorbing
        // state, so stir s1 with a salt until the pair is usable.
        for (uint64_t salt = 1; s0 == 0 && s1 == 0; ++salt) {
            s1 = uint16_t(splitmix64(global_seed ^ kS1Stream ^ lane_tag ^ (salt << 48)));
        }
        image[0][size_t(i)] = s0;
        image[1][size_t(i)] = s1;
    }
    return image;
}

} // namespace fenn
