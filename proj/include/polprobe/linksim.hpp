// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "polprobe/channel.hpp"
#include "polprobe/sequences.hpp"

#include <cstdint>
#include <span>

namespace polprobe {

struct NoiseConfig {
    double awgn_sigma = 0.0;    // per-sample complex std, field units
    double linewidth_hz = 0.0;  // 0 disables laser phase noise
    std::uint64_t seed = 0;
};

// One steady-state period of the received field.
struct ReceivedField {
    CVec rx_x;
    CVec rx_y;
    DualPolSequence probe;
    // Set when the channel is at least as long as the probe period.
    bool aliased = false;

    std::size_t size() const { return rx_x.size(); }
};

// Noiseless steady state under periodic transmission:
// rx[j] = sum_i h_i tx[(j - i) mod N], computed with FFTs.
ReceivedField propagate(const DualPolSequence& probe, std::span<const Jones> taps);

// Wiener phase with `count` samples, phi[0] = 0, increments N(0, 2 pi linewidth / symbol_rate).
std::vector<double> laser_phase_walk(std::size_t count, double linewidth_hz, double symbol_rate, std::uint64_t seed);

// Propagation where the transmit laser doubles as local oscillator: the
// contribution of tap i at output time j picks up exp(j(phi[j-i] - phi[j])).
// The phase walk extends taps.size()-1 samples before the observed period.
ReceivedField apply_laser_phase_noise(const DualPolSequence& probe, std::span<const Jones> taps, double linewidth_hz,
                                      std::uint64_t seed);

// Same as above with an explicit phase walk of length N + taps.size() - 1
// (index 0 corresponds to time -(taps.size()-1)).
ReceivedField propagate_with_phase(const DualPolSequence& probe, std::span<const Jones> taps,
                                   std::span<const double> phase_walk);

// Adds independent circular complex Gaussian noise of std sigma to every sample.
ReceivedField add_awgn(ReceivedField rx, double sigma, std::uint64_t seed);

// Sigma giving the requested SNR relative to the mean received sample power.
double sigma_for_snr(const ReceivedField& rx, double snr_db);

ReceivedField simulate_rx(const DualPolSequence& probe, const ChannelRealization& ch, const NoiseConfig& noise);

}  // namespace polprobe
