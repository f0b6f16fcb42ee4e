// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "polprobe/channel.hpp"
#include "polprobe/receiver.hpp"

#include <span>
#include <string>

namespace polprobe {

// Which estimated taps enter an error average.
enum class SpanPolicy {
    ValidOnly,   // only taps inside the estimator's alias-free span
    FullWindow,  // every tap of the receiver window (error-vs-length sweeps)
};

struct ErrorCurve {
    std::vector<double> distances;      // m, increasing
    std::vector<double> det_rel_error;  // cumulative mean over segments up to distance
    std::vector<double> phase_error;    // rad, same
    std::string scheme;
    std::size_t seed_count = 0;
};

// Per-tap errors over taps [0, up_to] filtered by policy; excluded taps are
// those whose reference or estimate is singular.
struct TapErrors {
    std::vector<std::size_t> index;
    std::vector<double> det_rel;
    std::vector<double> phase;
    std::size_t excluded = 0;
};

TapErrors tap_errors(const EstimatedResponse& est, std::span<const Jones> ref, std::size_t up_to,
                     SpanPolicy policy = SpanPolicy::ValidOnly);

// Mean |det(H_hat_k) - det(h_k)| / |det(h_k)| over k <= up_to.
double det_relative_error(const EstimatedResponse& est, const ChannelRealization& ref, std::size_t up_to,
                          SpanPolicy policy = SpanPolicy::ValidOnly);

// Mean |wrap_pi(phi_hat_k - phi_k)| over k <= up_to.
double phase_error(const EstimatedResponse& est, const ChannelRealization& ref, std::size_t up_to,
                   SpanPolicy policy = SpanPolicy::ValidOnly);

// Running mean: out[i] = mean(values[0..i]).
std::vector<double> cumulative_mean(std::span<const double> values);

// c_f / (2 F_symb)
double spatial_resolution(double symbol_rate, double fiber_speed);

// Longest fiber estimated without aliasing: a quarter (GolayBpsk) or half
// (Cazac, Sweep) of the distance spanned by one period of n_sequence symbols.
double max_length(Scheme scheme, std::size_t n_sequence, double symbol_rate, double fiber_speed);

// 1 / (2 T)
double mechanical_bandwidth(double period_s);

double sequence_duration(std::size_t n_sequence, double symbol_rate);

// Shortest usable period for a fiber of length L: 4 T_ir (GolayBpsk) or 2 T_ir.
double min_period(Scheme scheme, double fiber_length, double fiber_speed);

// Squared Frobenius norm per lag over the whole receiver window.
std::vector<double> aliasing_profile(const EstimatedResponse& est);

// Normalized correlation between profile[0, len) and profile[offset, offset + len).
double segment_correlation(std::span<const double> profile, std::size_t len, std::size_t offset);

// Energy in profile[support, end) divided by energy in profile[0, support).
double out_of_support_ratio(std::span<const double> profile, std::size_t support, std::size_t end);

// Largest distance d such that every curve point up to d has det error <= tol.
// Returns 0 when the first point already exceeds it.
double perfect_estimation_extent(const ErrorCurve& curve, double tol);

}  // namespace polprobe
