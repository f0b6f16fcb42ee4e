// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "polprobe/types.hpp"

#include <cstdint>
#include <span>

namespace polprobe {

struct ChannelParams {
    double fiber_length = 0.0;      // m
    double symbol_rate = 0.0;       // symbols/s
    double alpha_db_per_km = 0.2;   // one-way power attenuation
    double fiber_speed = 2e8;       // m/s
    std::uint64_t seed = 0;
};

// Ground-truth round-trip response, one tap per segment. Tap i sits at a
// round-trip delay of i symbols.
struct ChannelRealization {
    JonesVec taps;
    double segment_length = 0.0;
    double fiber_length = 0.0;
    double alpha_db_per_km = 0.0;
    double fiber_speed = 0.0;
    double symbol_rate = 0.0;
    std::uint64_t seed = 0;

    std::size_t size() const { return taps.size(); }
    double round_trip_time() const { return 2.0 * fiber_length / fiber_speed; }

    // First `count` segments of this fiber (same generation parameters).
    ChannelRealization truncated(std::size_t count) const;
};

// Per-segment phase 0.5 * arg(det h) in (-pi/2, pi/2]; singular taps are
// listed in `flagged` and carry a phase of 0.
struct PhaseTrace {
    std::vector<double> phase;
    std::vector<std::size_t> flagged;

    bool is_flagged(std::size_t i) const;
};

// Rayleigh backscatter: h_i = a_i r_i F_i^T F_i with F_i the accumulated
// random birefringence up to segment i, r_i circular complex Gaussian and a_i
// the two-way amplitude attenuation. Deterministic in params.seed.
ChannelRealization generate_channel(const ChannelParams& params);

// Random unitary birefringence element R(theta) diag(e^{j beta/2}, e^{-j beta/2}) R(-theta).
Jones birefringence_element(double theta, double beta);

// Squared Frobenius norm per tap.
std::vector<double> tap_intensity_profile(std::span<const Jones> taps);
std::vector<double> tap_intensity_profile(const ChannelRealization& ch);

// 0.5 * arg(det h), branch (-pi/2, pi/2].
double half_det_phase(const Jones& h);

PhaseTrace true_phase(const ChannelRealization& ch);
PhaseTrace phase_trace(std::span<const Jones> taps);

}  // namespace polprobe
