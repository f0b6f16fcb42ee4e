// SPDX-License-Identifier: Apache-2.0

#include "polprobe/sequences.hpp"

#include "polprobe/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace polprobe {

std::string to_string(Scheme s)
{
    switch (s) {
    case Scheme::GolayBpsk: return "golay";
    case Scheme::Cazac: return "cazac";
    case Scheme::Sweep: return "sweep";
    }
    return "unknown";
}

Scheme parse_scheme(const std::string& name)
{
    if (name == "golay" || name == "golay-bpsk" || name == "bpsk")
        return Scheme::GolayBpsk;
    if (name == "cazac")
        return Scheme::Cazac;
    if (name == "sweep")
        return Scheme::Sweep;
    throw ArgumentError("unknown scheme '" + name + "' (expected golay, cazac or sweep)");
}

namespace {

// exp(j 2 pi num / den), exact on quarter turns.
Complex unit_phasor(std::uint64_t num, std::uint64_t den)
{
    num %= den;
    if ((4 * num) % den == 0) {
        switch ((4 * num) / den) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
        }
    }
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(num) / static_cast<double>(den);
    return {std::cos(angle), std::sin(angle)};
}

CVec to_complex(const std::vector<int>& v)
{
    CVec out(v.size());
    std::transform(v.begin(), v.end(), out.begin(), [](int s) { return Complex(s, 0.0); });
    return out;
}

CVec concat(const std::vector<int>& a, const std::vector<int>& b)
{
    CVec out = to_complex(a);
    const CVec tail = to_complex(b);
    out.insert(out.end(), tail.begin(), tail.end());
    return out;
}

}  // namespace

GolayPair generate_golay_pair(unsigned depth)
{
    if (depth > kMaxGolayDepth)
        throw SizeError("golay recursion depth " + std::to_string(depth) + " exceeds " + std::to_string(kMaxGolayDepth));

    GolayPair p{{+1, +1, +1, -1}, {+1, +1, -1, +1}};
    for (unsigned k = 0; k < depth; ++k) {
        std::vector<int> a = p.a;
        a.insert(a.end(), p.b.begin(), p.b.end());
        std::vector<int> b = p.a;
        for (int s : p.b)
            b.push_back(-s);
        p.a = std::move(a);
        p.b = std::move(b);
    }
    return p;
}

GolayPair mate_pair(const GolayPair& p)
{
    if (p.a.size() != p.b.size())
        throw ArgumentError("mate_pair: sequences of unequal length");
    GolayPair m;
    m.a.assign(p.b.rbegin(), p.b.rend());
    m.b.resize(p.a.size());
    std::transform(p.a.rbegin(), p.a.rend(), m.b.begin(), [](int s) { return -s; });
    return m;
}

CazacSequence generate_cazac(unsigned order)
{
    if (order < 1 || order > kMaxCazacOrder)
        throw SizeError("cazac order " + std::to_string(order) + " outside [1, " + std::to_string(kMaxCazacOrder) + "]");

    const std::uint64_t root = std::uint64_t{1} << order;  // sqrt(N) = 2^M
    const std::uint64_t n_total = root * root;
    CazacSequence c;
    c.order = order;
    c.symbols.resize(n_total);
    // 1-based n: phase = 2 pi / root * (mod(n-1, root) + 1) * (floor((n-1) / root) + 1)
    for (std::uint64_t n = 0; n < n_total; ++n) {
        const std::uint64_t col = n % root + 1;
        const std::uint64_t row = n / root + 1;
        c.symbols[n] = unit_phasor((col * row) % root, root);
    }
    return c;
}

CVec circular_shift(std::span<const Complex> s, std::size_t k)
{
    if (s.empty() || k >= s.size())
        throw ArgumentError("circular_shift: shift " + std::to_string(k) + " outside [0, " + std::to_string(s.size()) + ")");
    CVec out(s.size());
    std::rotate_copy(s.begin(), s.end() - static_cast<std::ptrdiff_t>(k), s.end(), out.begin());
    return out;
}

DualPolSequence generate_sweep(std::size_t n_total, double symbol_rate)
{
    if (n_total < 8 || n_total % 2 != 0)
        throw ArgumentError("sweep length must be even and >= 8, got " + std::to_string(n_total));

    DualPolSequence seq;
    seq.scheme = Scheme::Sweep;
    seq.symbol_rate = symbol_rate;
    seq.pol_x.resize(n_total);
    // cos(pi n^2 / (2N)) has period 4N in n^2; reduce first to keep the argument small.
    const std::uint64_t wrap = 4 * static_cast<std::uint64_t>(n_total);
    for (std::uint64_t n = 0; n < n_total; ++n) {
        const std::uint64_t q = (n * n) % wrap;
        seq.pol_x[n] = std::cos(std::numbers::pi * static_cast<double>(q) / (2.0 * static_cast<double>(n_total)));
    }
    seq.pol_y = circular_shift(seq.pol_x, n_total / 2);
    return seq;
}

DualPolSequence build_probe(Scheme scheme, std::size_t size_param, double symbol_rate)
{
    if (!(symbol_rate > 0.0))
        throw ArgumentError("symbol rate must be positive");
    switch (scheme) {
    case Scheme::GolayBpsk: {
        if (size_param > kMaxGolayDepth)
            throw SizeError("golay recursion depth " + std::to_string(size_param) + " exceeds " + std::to_string(kMaxGolayDepth));
        const GolayPair first = generate_golay_pair(static_cast<unsigned>(size_param));
        const GolayPair second = mate_pair(first);
        return {concat(first.a, first.b), concat(second.a, second.b), Scheme::GolayBpsk, symbol_rate};
    }
    case Scheme::Cazac: {
        if (size_param < 1 || size_param > kMaxCazacOrder)
            throw SizeError("cazac order " + std::to_string(size_param) + " outside [1, " + std::to_string(kMaxCazacOrder) + "]");
        CazacSequence c = generate_cazac(static_cast<unsigned>(size_param));
        CVec shifted = circular_shift(c.symbols, c.length() / 2);
        return {std::move(c.symbols), std::move(shifted), Scheme::Cazac, symbol_rate};
    }
    case Scheme::Sweep:
        return generate_sweep(size_param, symbol_rate);
    }
    throw ArgumentError("build_probe: unknown scheme");
}

std::size_t size_param_for_period(Scheme scheme, std::size_t period_len)
{
    switch (scheme) {
    case Scheme::GolayBpsk:
        for (std::size_t k = 0; k <= kMaxGolayDepth; ++k)
            if ((std::size_t{8} << k) == period_len)
                return k;
        break;
    case Scheme::Cazac:
        for (std::size_t m = 1; m <= kMaxCazacOrder; ++m)
            if ((std::size_t{1} << (2 * m)) == period_len)
                return m;
        break;
    case Scheme::Sweep:
        if (period_len >= 8 && period_len % 2 == 0)
            return period_len;
        break;
    }
    throw SizeError("scheme " + to_string(scheme) + " cannot produce a period of " + std::to_string(period_len) + " symbols");
}

Spectrogram spectrogram(std::span<const Complex> s, std::size_t window_len, std::size_t hop)
{
    if (window_len == 0 || window_len > s.size())
        throw ArgumentError("spectrogram: window length " + std::to_string(window_len) + " not in [1, " + std::to_string(s.size()) + "]");
    if (hop == 0)
        throw ArgumentError("spectrogram: hop must be >= 1");

    Spectrogram sg;
    sg.window_len = window_len;
    sg.hop = hop;
    sg.windows = (s.size() - window_len) / hop + 1;
    sg.magnitudes.reserve(sg.windows * window_len);
    for (std::size_t w = 0; w < sg.windows; ++w) {
        const CVec spec = fft::forward(s.subspan(w * hop, window_len));
        for (const auto& v : spec)
            sg.magnitudes.push_back(std::abs(v));
    }
    return sg;
}

std::size_t default_window_length(std::size_t n)
{
    const double root = std::sqrt(static_cast<double>(n));
    const double exponent = std::round(std::log2(std::max(root, 1.0)));
    return std::size_t{1} << static_cast<unsigned>(exponent);
}

std::vector<std::size_t> ridge(const Spectrogram& sg, std::size_t bin_limit)
{
    bin_limit = std::min(bin_limit, sg.window_len);
    std::vector<std::size_t> out(sg.windows, 0);
    for (std::size_t w = 0; w < sg.windows; ++w) {
        const auto first = sg.magnitudes.begin() + static_cast<std::ptrdiff_t>(w * sg.window_len);
        out[w] = static_cast<std::size_t>(std::max_element(first, first + static_cast<std::ptrdiff_t>(bin_limit)) - first);
    }
    return out;
}

double ridge_confidence(const Spectrogram& sg, std::size_t bin_limit)
{
    bin_limit = std::min(bin_limit, sg.window_len);
    if (sg.windows == 0 || bin_limit == 0)
        return 0.0;
    double sum = 0.0;
    for (std::size_t w = 0; w < sg.windows; ++w) {
        double total = 0.0;
        double peak = 0.0;
        for (std::size_t b = 0; b < bin_limit; ++b) {
            const double e = sg.at(w, b) * sg.at(w, b);
            total += e;
            peak = std::max(peak, e);
        }
        sum += total > 0.0 ? peak / total : 0.0;
    }
    return sum / static_cast<double>(sg.windows);
}

}  // namespace polprobe
