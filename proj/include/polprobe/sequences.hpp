// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "polprobe/types.hpp"

#include <cstdint>
#include <span>

namespace polprobe {

// Binary complementary pair: the aperiodic autocorrelations of a and b sum to
// 2 * length() at lag 0 and to zero elsewhere.
struct GolayPair {
    std::vector<int> a;
    std::vector<int> b;

    std::size_t length() const { return a.size(); }
};

// Perfect-square CAZAC sequence of length N = 4^order over the 2^order-PSK alphabet.
struct CazacSequence {
    CVec symbols;
    unsigned order = 0;

    std::size_t length() const { return symbols.size(); }
};

// One probing period, one complex symbol stream per polarization.
struct DualPolSequence {
    CVec pol_x;
    CVec pol_y;
    Scheme scheme = Scheme::Cazac;
    double symbol_rate = 1.0;

    std::size_t size() const { return pol_x.size(); }
    double duration() const { return static_cast<double>(size()) / symbol_rate; }
};

// Magnitude grid, row-major [window][bin].
struct Spectrogram {
    std::vector<double> magnitudes;
    std::size_t windows = 0;
    std::size_t window_len = 0;
    std::size_t hop = 0;

    double at(std::size_t window, std::size_t bin) const { return magnitudes[window * window_len + bin]; }
};

inline constexpr unsigned kMaxGolayDepth = 24;
inline constexpr unsigned kMaxCazacOrder = 12;

// Length 4 * 2^depth, built from the seed a = [+ + + -], b = [+ + - +] by
// a' = a||b, b' = a||(-b).
GolayPair generate_golay_pair(unsigned depth);

// Orthogonal mate: a2[n] = b1[N-1-n], b2[n] = -a1[N-1-n]. Cross-correlations
// with the input pair sum to zero at every lag.
GolayPair mate_pair(const GolayPair& p);

CazacSequence generate_cazac(unsigned order);

// out[n] = s[(n - k) mod N], 0 <= k < N.
CVec circular_shift(std::span<const Complex> s, std::size_t k);

// Real cosine chirp, instantaneous frequency rising linearly from 0 to half the
// symbol rate over the period; pol_y is pol_x delayed by half a period.
DualPolSequence generate_sweep(std::size_t n_total, double symbol_rate = 1.0);

// size_param is the recursion depth K (GolayBpsk), the order M (Cazac) or the
// period length (Sweep).
DualPolSequence build_probe(Scheme scheme, std::size_t size_param, double symbol_rate = 1.0);

// Size parameter giving a period of exactly period_len symbols; throws
// SizeError when the scheme cannot produce that length.
std::size_t size_param_for_period(Scheme scheme, std::size_t period_len);

// Rectangular-window short-time DFT magnitudes.
Spectrogram spectrogram(std::span<const Complex> s, std::size_t window_len, std::size_t hop);

// sqrt(n) rounded to the nearest power of two.
std::size_t default_window_length(std::size_t n);

// Per-window argmax bin restricted to [0, bin_limit).
std::vector<std::size_t> ridge(const Spectrogram& sg, std::size_t bin_limit);

// Mean over windows of the fraction of window energy held by the ridge bin.
// Close to 1 for a swept tone, close to 1/bin_limit for white-like content.
double ridge_confidence(const Spectrogram& sg, std::size_t bin_limit);

}  // namespace polprobe
