// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "polprobe/channel.hpp"
#include "polprobe/linksim.hpp"
#include "polprobe/sequences.hpp"

#include <span>

namespace polprobe {

// Estimated round-trip taps over the receiver's full lag window. Entries
// outside valid_span are aliased whenever the channel exceeds it.
struct EstimatedResponse {
    JonesVec taps;
    Scheme scheme = Scheme::Cazac;
    IndexRange valid_span;

    std::size_t window() const { return taps.size(); }
};

// Circular correlation against c; the Y-pol response occupies lags
// [N/2, N). Window N, valid span [0, N/2).
EstimatedResponse estimate_cazac(const ReceivedField& rx, const CazacSequence& c);

// Complementary correlation against [a1||b1] (column x) and [a2||b2]
// (column y), normalized by the period 2 * N_el. The window covers the whole
// period so the aliasing pattern past the first quarter stays visible; valid
// span [0, N_el/2).
EstimatedResponse estimate_golay(const ReceivedField& rx, const GolayPair& first, const GolayPair& second);

// Same lag split as estimate_cazac, correlating against the real chirp and
// normalizing by its energy. Not exact: the chirp autocorrelation has sidelobes.
EstimatedResponse estimate_sweep(const ReceivedField& rx, const DualPolSequence& probe);

// Dispatches on rx.probe.scheme using the transmitted streams held in rx.
EstimatedResponse estimate(const ReceivedField& rx);

// 0.5 * arg(det) over valid_span; singular estimates are flagged.
PhaseTrace extract_phase(const EstimatedResponse& resp);

// Wraps into (-pi/2, pi/2] with period pi.
double wrap_half_turn(double x);

// out_k = wrap_half_turn(phases_k - phases_ref). Throws FlaggedReferenceError
// when ref is in `flagged`.
std::vector<double> differential_phase(std::span<const double> phases, std::size_t ref,
                                       std::span<const std::size_t> flagged = {});

}  // namespace polprobe
