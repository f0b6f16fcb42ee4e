// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace polprobe {

using Complex = std::complex<double>;
using CVec = std::vector<Complex>;

// Round-trip Jones matrix of one fiber segment. Row = received polarization,
// column = transmitted polarization.
using Jones = Eigen::Matrix2cd;
using JonesVec = std::vector<Jones>;

enum class Scheme { GolayBpsk, Cazac, Sweep };

std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& name);

// Half-open index range [begin, end).
struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const { return end > begin ? end - begin : 0; }
    bool contains(std::size_t i) const { return i >= begin && i < end; }
};

// Determinants below this magnitude are treated as singular.
inline constexpr double kSingularDet = 1e-30;

class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class SizeError : public std::length_error {
public:
    using std::length_error::length_error;
};

class DegenerateChannelError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class UndefinedMetricError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class FlaggedReferenceError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace polprobe
