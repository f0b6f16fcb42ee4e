// SPDX-License-Identifier: Apache-2.0

#include "polprobe/channel.hpp"

#include "polprobe/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace polprobe {

namespace {

constexpr double kBirefringenceStd = 0.05;  // rad per segment

}  // namespace

bool PhaseTrace::is_flagged(std::size_t i) const
{
    return std::binary_search(flagged.begin(), flagged.end(), i);
}

ChannelRealization ChannelRealization::truncated(std::size_t count) const
{
    ChannelRealization out = *this;
    count = std::min(count, taps.size());
    out.taps.resize(count);
    out.fiber_length = static_cast<double>(count) * segment_length;
    return out;
}

Jones birefringence_element(double theta, double beta)
{
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    Jones rot;
    rot << c, -s, s, c;
    Jones retarder = Jones::Zero();
    retarder(0, 0) = std::polar(1.0, beta / 2.0);
    retarder(1, 1) = std::polar(1.0, -beta / 2.0);
    return rot * retarder * rot.transpose();
}

ChannelRealization generate_channel(const ChannelParams& params)
{
    if (!(params.fiber_length > 0.0) || !(params.symbol_rate > 0.0) || !(params.fiber_speed > 0.0))
        throw ArgumentError("generate_channel: length, symbol rate and fiber speed must be positive");
    if (!(params.alpha_db_per_km >= 0.0))
        throw ArgumentError("generate_channel: attenuation must be non-negative");

    ChannelRealization ch;
    ch.segment_length = spatial_resolution(params.symbol_rate, params.fiber_speed);
    ch.fiber_length = params.fiber_length;
    ch.alpha_db_per_km = params.alpha_db_per_km;
    ch.fiber_speed = params.fiber_speed;
    ch.symbol_rate = params.symbol_rate;
    ch.seed = params.seed;

    const double segments = std::floor(params.fiber_length / ch.segment_length + 1e-9);
    if (segments < 2.0)
        throw DegenerateChannelError("generate_channel: fiber of " + std::to_string(params.fiber_length) +
                                     " m spans fewer than 2 segments of " + std::to_string(ch.segment_length) + " m");
    const auto count = static_cast<std::size_t>(segments);

    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> orientation(0.0, std::numbers::pi);
    std::normal_distribution<double> retardance(0.0, kBirefringenceStd);
    std::normal_distribution<double> quadrature(0.0, std::sqrt(0.5));  // E|r|^2 = 1

    ch.taps.reserve(count);
    Jones forward = Jones::Identity();
    for (std::size_t i = 0; i < count; ++i) {
        const double theta = orientation(rng);
        const double beta = retardance(rng);
        const double re = quadrature(rng);
        const double im = quadrature(rng);
        forward = birefringence_element(theta, beta) * forward;
        const double distance_km = static_cast<double>(i) * ch.segment_length / 1000.0;
        const double amplitude = std::pow(10.0, -params.alpha_db_per_km * distance_km / 10.0);
        ch.taps.push_back(amplitude * Complex(re, im) * (forward.transpose() * forward));
    }
    return ch;
}

std::vector<double> tap_intensity_profile(std::span<const Jones> taps)
{
    std::vector<double> out(taps.size());
    std::transform(taps.begin(), taps.end(), out.begin(), [](const Jones& h) { return h.squaredNorm(); });
    return out;
}

std::vector<double> tap_intensity_profile(const ChannelRealization& ch)
{
    return tap_intensity_profile(std::span<const Jones>(ch.taps));
}

double half_det_phase(const Jones& h)
{
    double phi = 0.5 * std::arg(h.determinant());
    if (phi <= -std::numbers::pi / 2.0)
        phi += std::numbers::pi;
    return phi;
}

PhaseTrace phase_trace(std::span<const Jones> taps)
{
    PhaseTrace out;
    out.phase.resize(taps.size(), 0.0);
    for (std::size_t i = 0; i < taps.size(); ++i) {
        if (std::abs(taps[i].determinant()) < kSingularDet)
            out.flagged.push_back(i);
        else
            out.phase[i] = half_det_phase(taps[i]);
    }
    return out;
}

PhaseTrace true_phase(const ChannelRealization& ch)
{
    return phase_trace(ch.taps);
}

}  // namespace polprobe
