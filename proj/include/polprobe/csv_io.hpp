// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "polprobe/channel.hpp"
#include "polprobe/metrics.hpp"
#include "polprobe/receiver.hpp"
#include "polprobe/sequences.hpp"

#include <ostream>
#include <span>
#include <string>
#include <string_view>

namespace polprobe::csv {

// 17 significant digits, enough to round-trip a double.
std::string format_double(double v);

// Every line of `text` prefixed with "# ".
void write_comment(std::ostream& os, std::string_view text);

// n,re_x,im_x,re_y,im_y
void write_dual_stream(std::ostream& os, std::span<const Complex> x, std::span<const Complex> y,
                       std::string_view comment = {});
void write_sequence(std::ostream& os, const DualPolSequence& seq, std::string_view comment = {});
void write_received(std::ostream& os, const ReceivedField& rx, std::string_view comment = {});

// Rows = windows, columns = frequency bins.
void write_spectrogram(std::ostream& os, const Spectrogram& sg, std::string_view comment = {});

// i,re_h00,im_h00,re_h01,im_h01,re_h10,im_h10,re_h11,im_h11
void write_taps(std::ostream& os, std::span<const Jones> taps, std::string_view comment = {});
void write_channel(std::ostream& os, const ChannelRealization& ch, std::string_view comment = {});
void write_response(std::ostream& os, const EstimatedResponse& est, std::string_view comment = {});

// distance_m,det_rel_err,phase_err_rad,scheme,seed_count
void write_error_curve(std::ostream& os, const ErrorCurve& curve, std::string_view comment = {});

// One-line description of the generation parameters.
std::string describe(const ChannelRealization& ch);

}  // namespace polprobe::csv
