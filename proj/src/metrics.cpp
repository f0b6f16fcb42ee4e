// SPDX-License-Identifier: Apache-2.0

#include "polprobe/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace polprobe {

namespace {

double mean_of(const std::vector<double>& v, const char* what)
{
    if (v.empty())
        throw UndefinedMetricError(std::string(what) + ": no taps left to average");
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void require_positive(double v, const char* what)
{
    if (!(v > 0.0))
        throw ArgumentError(std::string(what) + " must be positive");
}

}  // namespace

TapErrors tap_errors(const EstimatedResponse& est, std::span<const Jones> ref, std::size_t up_to, SpanPolicy policy)
{
    if (up_to >= ref.size() || up_to >= est.window())
        throw ArgumentError("tap_errors: index " + std::to_string(up_to) + " beyond reference (" +
                            std::to_string(ref.size()) + ") or estimate window (" + std::to_string(est.window()) + ")");
    TapErrors out;
    for (std::size_t k = 0; k <= up_to; ++k) {
        if (policy == SpanPolicy::ValidOnly && !est.valid_span.contains(k))
            continue;
        const Complex d_ref = ref[k].determinant();
        const Complex d_est = est.taps[k].determinant();
        if (std::abs(d_ref) < kSingularDet || std::abs(d_est) < kSingularDet) {
            ++out.excluded;
            continue;
        }
        out.index.push_back(k);
        out.det_rel.push_back(std::abs(d_est - d_ref) / std::abs(d_ref));
        out.phase.push_back(std::abs(wrap_half_turn(half_det_phase(est.taps[k]) - half_det_phase(ref[k]))));
    }
    return out;
}

double det_relative_error(const EstimatedResponse& est, const ChannelRealization& ref, std::size_t up_to,
                          SpanPolicy policy)
{
    return mean_of(tap_errors(est, ref.taps, up_to, policy).det_rel, "det_relative_error");
}

double phase_error(const EstimatedResponse& est, const ChannelRealization& ref, std::size_t up_to, SpanPolicy policy)
{
    return mean_of(tap_errors(est, ref.taps, up_to, policy).phase, "phase_error");
}

std::vector<double> cumulative_mean(std::span<const double> values)
{
    std::vector<double> out(values.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        sum += values[i];
        out[i] = sum / static_cast<double>(i + 1);
    }
    return out;
}

double spatial_resolution(double symbol_rate, double fiber_speed)
{
    require_positive(symbol_rate, "symbol rate");
    require_positive(fiber_speed, "fiber speed");
    return fiber_speed / (2.0 * symbol_rate);
}

double max_length(Scheme scheme, std::size_t n_sequence, double symbol_rate, double fiber_speed)
{
    if (n_sequence == 0)
        throw ArgumentError("max_length: sequence length must be positive");
    const double span = static_cast<double>(n_sequence) * spatial_resolution(symbol_rate, fiber_speed);
    return scheme == Scheme::GolayBpsk ? span / 4.0 : span / 2.0;
}

double mechanical_bandwidth(double period_s)
{
    require_positive(period_s, "probing period");
    return 1.0 / (2.0 * period_s);
}

double sequence_duration(std::size_t n_sequence, double symbol_rate)
{
    require_positive(symbol_rate, "symbol rate");
    return static_cast<double>(n_sequence) / symbol_rate;
}

double min_period(Scheme scheme, double fiber_length, double fiber_speed)
{
    require_positive(fiber_length, "fiber length");
    require_positive(fiber_speed, "fiber speed");
    const double t_ir = 2.0 * fiber_length / fiber_speed;
    return scheme == Scheme::GolayBpsk ? 4.0 * t_ir : 2.0 * t_ir;
}

std::vector<double> aliasing_profile(const EstimatedResponse& est)
{
    return tap_intensity_profile(std::span<const Jones>(est.taps));
}

double segment_correlation(std::span<const double> profile, std::size_t len, std::size_t offset)
{
    if (offset + len > profile.size())
        throw ArgumentError("segment_correlation: segments exceed the profile");
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        ab += profile[i] * profile[offset + i];
        aa += profile[i] * profile[i];
        bb += profile[offset + i] * profile[offset + i];
    }
    if (aa == 0.0 || bb == 0.0)
        return 0.0;
    return ab / std::sqrt(aa * bb);
}

double out_of_support_ratio(std::span<const double> profile, std::size_t support, std::size_t end)
{
    if (support > end || end > profile.size())
        throw ArgumentError("out_of_support_ratio: bad ranges");
    const double inside = std::accumulate(profile.begin(), profile.begin() + static_cast<std::ptrdiff_t>(support), 0.0);
    const double outside = std::accumulate(profile.begin() + static_cast<std::ptrdiff_t>(support),
                                           profile.begin() + static_cast<std::ptrdiff_t>(end), 0.0);
    if (inside == 0.0)
        throw UndefinedMetricError("out_of_support_ratio: no in-support energy");
    return outside / inside;
}

double perfect_estimation_extent(const ErrorCurve& curve, double tol)
{
    double extent = 0.0;
    for (std::size_t i = 0; i < curve.distances.size(); ++i) {
        if (!(curve.det_rel_error[i] <= tol))
            break;
        extent = curve.distances[i];
    }
    return extent;
}

}  // namespace polprobe
