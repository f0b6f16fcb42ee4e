// SPDX-License-Identifier: Apache-2.0

#include "polprobe/linksim.hpp"

#include "polprobe/fft.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace polprobe {

namespace {

// Splits one user seed into independent streams.
std::uint64_t substream(std::uint64_t seed, std::uint64_t stream)
{
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Spectra of the four Jones entries, taps placed at their delays in a buffer
// of length n (folded modulo n when longer).
std::array<CVec, 4> tap_spectra(std::span<const Jones> taps, std::size_t n)
{
    std::array<CVec, 4> spectra;
    for (int e = 0; e < 4; ++e) {
        CVec buf(n, Complex{});
        for (std::size_t i = 0; i < taps.size(); ++i)
            buf[i % n] += taps[i](e / 2, e % 2);
        spectra[e] = fft::forward(buf);
    }
    return spectra;
}

void combine(const std::array<CVec, 4>& h, const CVec& ex, const CVec& ey, CVec& out_x, CVec& out_y)
{
    out_x.resize(ex.size());
    out_y.resize(ex.size());
    for (std::size_t f = 0; f < ex.size(); ++f) {
        out_x[f] = h[0][f] * ex[f] + h[1][f] * ey[f];
        out_y[f] = h[2][f] * ex[f] + h[3][f] * ey[f];
    }
}

}  // namespace

ReceivedField propagate(const DualPolSequence& probe, std::span<const Jones> taps)
{
    const std::size_t n = probe.size();
    if (n == 0)
        throw ArgumentError("propagate: empty probe");

    ReceivedField rx;
    rx.probe = probe;
    rx.aliased = taps.size() >= n;

    const auto h = tap_spectra(taps, n);
    CVec sx, sy;
    combine(h, fft::forward(probe.pol_x), fft::forward(probe.pol_y), sx, sy);
    rx.rx_x = fft::inverse(sx);
    rx.rx_y = fft::inverse(sy);
    return rx;
}

std::vector<double> laser_phase_walk(std::size_t count, double linewidth_hz, double symbol_rate, std::uint64_t seed)
{
    if (!(linewidth_hz >= 0.0) || !(symbol_rate > 0.0))
        throw ArgumentError("laser_phase_walk: linewidth must be >= 0 and symbol rate > 0");
    std::vector<double> phi(count, 0.0);
    if (count == 0 || linewidth_hz == 0.0)
        return phi;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> step(0.0, std::sqrt(2.0 * std::numbers::pi * linewidth_hz / symbol_rate));
    for (std::size_t j = 1; j < count; ++j)
        phi[j] = phi[j - 1] + step(rng);
    return phi;
}

ReceivedField propagate_with_phase(const DualPolSequence& probe, std::span<const Jones> taps,
                                   std::span<const double> phase_walk)
{
    const std::size_t n = probe.size();
    if (n == 0)
        throw ArgumentError("propagate_with_phase: empty probe");
    if (taps.empty())
        return propagate(probe, taps);
    const std::size_t lead = taps.size() - 1;
    if (phase_walk.size() != n + lead)
        throw ArgumentError("propagate_with_phase: phase walk must hold N + taps - 1 samples");

    // u[m] = exp(j phi[m]) tx[(m - lead) mod N] over the extended time axis,
    // rx[j] = exp(-j phi[j + lead]) sum_i h_i u[j + lead - i].
    const std::size_t span_len = n + lead;
    const std::size_t fft_len = fft::next_pow2(span_len + lead);
    CVec ux(fft_len, Complex{}), uy(fft_len, Complex{});
    for (std::size_t m = 0; m < span_len; ++m) {
        const std::size_t src = (m + n - lead % n) % n;
        const Complex rot = std::polar(1.0, phase_walk[m]);
        ux[m] = rot * probe.pol_x[src];
        uy[m] = rot * probe.pol_y[src];
    }

    const auto h = tap_spectra(taps, fft_len);
    CVec sx, sy;
    combine(h, fft::forward(ux), fft::forward(uy), sx, sy);
    const CVec lx = fft::inverse(sx);
    const CVec ly = fft::inverse(sy);

    ReceivedField rx;
    rx.probe = probe;
    rx.aliased = taps.size() >= n;
    rx.rx_x.resize(n);
    rx.rx_y.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const Complex derot = std::polar(1.0, -phase_walk[j + lead]);
        rx.rx_x[j] = derot * lx[j + lead];
        rx.rx_y[j] = derot * ly[j + lead];
    }
    return rx;
}

ReceivedField apply_laser_phase_noise(const DualPolSequence& probe, std::span<const Jones> taps, double linewidth_hz,
                                      std::uint64_t seed)
{
    if (linewidth_hz == 0.0 || taps.empty())
        return propagate(probe, taps);
    const auto walk = laser_phase_walk(probe.size() + taps.size() - 1, linewidth_hz, probe.symbol_rate, seed);
    return propagate_with_phase(probe, taps, walk);
}

ReceivedField add_awgn(ReceivedField rx, double sigma, std::uint64_t seed)
{
    if (!(sigma >= 0.0))
        throw ArgumentError("add_awgn: sigma must be >= 0");
    if (sigma == 0.0)
        return rx;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> quadrature(0.0, sigma / std::sqrt(2.0));
    for (auto* stream : {&rx.rx_x, &rx.rx_y})
        for (auto& v : *stream) {
            const double re = quadrature(rng);
            const double im = quadrature(rng);
            v += Complex(re, im);
        }
    return rx;
}

double sigma_for_snr(const ReceivedField& rx, double snr_db)
{
    double power = 0.0;
    for (const auto* stream : {&rx.rx_x, &rx.rx_y})
        for (const auto& v : *stream)
            power += std::norm(v);
    const double samples = 2.0 * static_cast<double>(rx.size());
    if (samples == 0.0)
        return 0.0;
    return std::sqrt(power / samples / std::pow(10.0, snr_db / 10.0));
}

ReceivedField simulate_rx(const DualPolSequence& probe, const ChannelRealization& ch, const NoiseConfig& noise)
{
    if (!(noise.awgn_sigma >= 0.0) || !(noise.linewidth_hz >= 0.0))
        throw ArgumentError("simulate_rx: noise parameters must be non-negative");
    ReceivedField rx = apply_laser_phase_noise(probe, ch.taps, noise.linewidth_hz, substream(noise.seed, 0));
    return add_awgn(std::move(rx), noise.awgn_sigma, substream(noise.seed, 1));
}

}  // namespace polprobe
