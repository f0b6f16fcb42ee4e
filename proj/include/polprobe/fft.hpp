// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "polprobe/types.hpp"

#include <span>

namespace polprobe::fft {

// Unnormalized forward DFT: X[f] = sum_n x[n] exp(-j 2 pi f n / N).
CVec forward(std::span<const Complex> x);

// Inverse DFT including the 1/N factor.
CVec inverse(std::span<const Complex> x);

// out[j] = sum_i a[i] b[(j - i) mod N]; both inputs must have length N.
CVec circular_convolve(std::span<const Complex> a, std::span<const Complex> b);

// out[k] = sum_j x[j] conj(ref[(j - k) mod N]); both inputs must have length N.
CVec circular_correlate(std::span<const Complex> x, std::span<const Complex> ref);

// Smallest power of two >= n.
std::size_t next_pow2(std::size_t n);

}  // namespace polprobe::fft
