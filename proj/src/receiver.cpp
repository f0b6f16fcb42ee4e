// SPDX-License-Identifier: Apache-2.0

#include "polprobe/receiver.hpp"

#include "polprobe/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace polprobe {

namespace {

void require_length(const ReceivedField& rx, std::size_t n, const char* who)
{
    if (rx.rx_x.size() != n || rx.rx_y.size() != n)
        throw ArgumentError(std::string(who) + ": received period " + std::to_string(rx.size()) +
                            " does not match probe length " + std::to_string(n));
}

// Column x from lag k, column y from lag k + N/2 of a single reference.
EstimatedResponse split_lag_estimate(const ReceivedField& rx, std::span<const Complex> ref, double norm, Scheme scheme)
{
    const std::size_t n = ref.size();
    const CVec gx = fft::circular_correlate(rx.rx_x, ref);
    const CVec gy = fft::circular_correlate(rx.rx_y, ref);

    EstimatedResponse out;
    out.scheme = scheme;
    out.valid_span = {0, n / 2};
    out.taps.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t ky = (k + n / 2) % n;
        out.taps[k] << gx[k] / norm, gx[ky] / norm, gy[k] / norm, gy[ky] / norm;
    }
    return out;
}

EstimatedResponse golay_estimate(const ReceivedField& rx, std::span<const Complex> comp_x, std::span<const Complex> comp_y)
{
    const std::size_t period = comp_x.size();
    const std::size_t n_el = period / 2;
    const double norm = static_cast<double>(period);

    // Correlating over the whole period against a1||b1 is the sum of the
    // a1-slot and b1-slot correlations.
    const CVec xx = fft::circular_correlate(rx.rx_x, comp_x);
    const CVec xy = fft::circular_correlate(rx.rx_x, comp_y);
    const CVec yx = fft::circular_correlate(rx.rx_y, comp_x);
    const CVec yy = fft::circular_correlate(rx.rx_y, comp_y);

    EstimatedResponse out;
    out.scheme = Scheme::GolayBpsk;
    out.valid_span = {0, n_el / 2};
    out.taps.resize(period);
    for (std::size_t k = 0; k < period; ++k)
        out.taps[k] << xx[k] / norm, xy[k] / norm, yx[k] / norm, yy[k] / norm;
    return out;
}

double energy(std::span<const Complex> s)
{
    double e = 0.0;
    for (const auto& v : s)
        e += std::norm(v);
    return e;
}

CVec composite(const GolayPair& p)
{
    CVec out;
    out.reserve(2 * p.length());
    for (int s : p.a)
        out.emplace_back(s, 0.0);
    for (int s : p.b)
        out.emplace_back(s, 0.0);
    return out;
}

}  // namespace

EstimatedResponse estimate_cazac(const ReceivedField& rx, const CazacSequence& c)
{
    require_length(rx, c.length(), "estimate_cazac");
    return split_lag_estimate(rx, c.symbols, static_cast<double>(c.length()), Scheme::Cazac);
}

EstimatedResponse estimate_golay(const ReceivedField& rx, const GolayPair& first, const GolayPair& second)
{
    if (first.length() != second.length())
        throw ArgumentError("estimate_golay: pairs of unequal length");
    require_length(rx, 2 * first.length(), "estimate_golay");
    return golay_estimate(rx, composite(first), composite(second));
}

EstimatedResponse estimate_sweep(const ReceivedField& rx, const DualPolSequence& probe)
{
    if (probe.scheme != Scheme::Sweep)
        throw ArgumentError("estimate_sweep: probe is not a sweep (" + to_string(probe.scheme) + ")");
    require_length(rx, probe.size(), "estimate_sweep");
    return split_lag_estimate(rx, probe.pol_x, energy(probe.pol_x), Scheme::Sweep);
}

EstimatedResponse estimate(const ReceivedField& rx)
{
    const DualPolSequence& probe = rx.probe;
    require_length(rx, probe.size(), "estimate");
    switch (probe.scheme) {
    case Scheme::GolayBpsk:
        if (probe.size() % 2 != 0)
            throw ArgumentError("estimate: odd golay period");
        return golay_estimate(rx, probe.pol_x, probe.pol_y);
    case Scheme::Cazac:
        return split_lag_estimate(rx, probe.pol_x, static_cast<double>(probe.size()), Scheme::Cazac);
    case Scheme::Sweep:
        return estimate_sweep(rx, probe);
    }
    throw ArgumentError("estimate: unknown scheme");
}

PhaseTrace extract_phase(const EstimatedResponse& resp)
{
    const std::size_t end = std::min(resp.valid_span.end, resp.window());
    const std::size_t begin = std::min(resp.valid_span.begin, end);
    return phase_trace(std::span<const Jones>(resp.taps).subspan(begin, end - begin));
}

double wrap_half_turn(double x)
{
    constexpr double pi = std::numbers::pi;
    double y = x - pi * std::ceil((x - pi / 2.0) / pi);
    if (y <= -pi / 2.0)
        y += pi;
    if (y > pi / 2.0)
        y -= pi;
    return y;
}

std::vector<double> differential_phase(std::span<const double> phases, std::size_t ref,
                                       std::span<const std::size_t> flagged)
{
    if (ref >= phases.size())
        throw ArgumentError("differential_phase: reference index " + std::to_string(ref) + " out of range");
    if (std::find(flagged.begin(), flagged.end(), ref) != flagged.end())
        throw FlaggedReferenceError("differential_phase: reference index " + std::to_string(ref) +
                                    " is flagged singular; choose the next unflagged index");
    std::vector<double> out(phases.size());
    for (std::size_t k = 0; k < phases.size(); ++k)
        out[k] = k == ref ? 0.0 : wrap_half_turn(phases[k] - phases[ref]);
    return out;
}

}  // namespace polprobe
