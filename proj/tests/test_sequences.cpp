// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include "polprobe/sequences.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace polprobe;

namespace {

std::vector<long long> complementary_sum(const GolayPair& p)
{
    const auto ra = oracle::aperiodic_xcorr(p.a, p.a);
    const auto rb = oracle::aperiodic_xcorr(p.b, p.b);
    std::vector<long long> s(ra.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        s[i] = ra[i] + rb[i];
    return s;
}

bool is_scaled_delta(const std::vector<long long>& r, long long peak)
{
    const std::size_t zero = r.size() / 2;
    for (std::size_t i = 0; i < r.size(); ++i)
        if (r[i] != (i == zero ? peak : 0))
            return false;
    return true;
}

}  // namespace

TEST_CASE("golay seed pair")
{
    const GolayPair p = generate_golay_pair(0);
    CHECK(p.a == std::vector<int>{+1, +1, +1, -1});
    CHECK(p.b == std::vector<int>{+1, +1, -1, +1});
    const auto r = complementary_sum(p);
    // lags 0..3
    CHECK(std::vector<long long>(r.begin() + 3, r.end()) == std::vector<long long>{8, 0, 0, 0});
}

TEST_CASE("golay depth 1 follows the recursion")
{
    const GolayPair p = generate_golay_pair(1);
    CHECK(p.a == std::vector<int>{1, 1, 1, -1, 1, 1, -1, 1});
    CHECK(p.b == std::vector<int>{1, 1, 1, -1, -1, -1, 1, -1});
    CHECK(is_scaled_delta(complementary_sum(p), 16));
}

TEST_CASE("golay pairs and mates are complementary and mutually orthogonal for K in 0..8")
{
    for (unsigned k = 0; k <= 8; ++k) {
        CAPTURE(k);
        const GolayPair p = generate_golay_pair(k);
        const GolayPair m = mate_pair(p);
        const long long n_el = 4LL << k;
        REQUIRE(p.length() == static_cast<std::size_t>(n_el));
        REQUIRE(m.length() == static_cast<std::size_t>(n_el));
        for (const auto* seq : {&p.a, &p.b, &m.a, &m.b})
            CHECK(std::all_of(seq->begin(), seq->end(), [](int s) { return s == 1 || s == -1; }));
        CHECK(is_scaled_delta(complementary_sum(p), 2 * n_el));
        CHECK(is_scaled_delta(complementary_sum(m), 2 * n_el));

        const auto caa = oracle::aperiodic_xcorr(p.a, m.a);
        const auto cbb = oracle::aperiodic_xcorr(p.b, m.b);
        bool orthogonal = true;
        for (std::size_t i = 0; i < caa.size(); ++i)
            orthogonal = orthogonal && caa[i] + cbb[i] == 0;
        CHECK(orthogonal);
    }
}

TEST_CASE("mate of the seed pair")
{
    const GolayPair m = mate_pair(generate_golay_pair(0));
    CHECK(m.a == std::vector<int>{+1, -1, +1, +1});
    CHECK(m.b == std::vector<int>{+1, -1, -1, -1});
    const GolayPair mm = mate_pair(m);
    CHECK(is_scaled_delta(complementary_sum(mm), 8));
}

TEST_CASE("golay depth is bounded")
{
    CHECK_THROWS_AS(generate_golay_pair(25), SizeError);
    CHECK_THROWS_AS(build_probe(Scheme::GolayBpsk, 40), SizeError);
    CHECK(generate_golay_pair(12).length() == 4u << 12);
}

TEST_CASE("cazac order 1 and 2")
{
    const CazacSequence c1 = generate_cazac(1);
    REQUIRE(c1.length() == 4);
    const CVec expect{-1.0, 1.0, 1.0, 1.0};
    CHECK(oracle::max_abs_diff(c1.symbols, expect) == 0.0);
    const CVec r = oracle::circular_xcorr(c1.symbols, c1.symbols);
    CHECK(oracle::max_abs_diff(r, CVec{4.0, 0.0, 0.0, 0.0}) < 1e-12);

    const CazacSequence c2 = generate_cazac(2);
    REQUIRE(c2.length() == 16);
    CHECK(std::abs(c2.symbols[0] - Complex(0.0, 1.0)) < 1e-15);
    for (const auto& v : c2.symbols) {
        const bool qpsk = std::abs(v - Complex(1, 0)) < 1e-15 || std::abs(v - Complex(-1, 0)) < 1e-15 ||
                          std::abs(v - Complex(0, 1)) < 1e-15 || std::abs(v - Complex(0, -1)) < 1e-15;
        CHECK(qpsk);
    }
}

TEST_CASE("cazac matches the closed form and its correlation properties for M in 1..6")
{
    for (unsigned m = 1; m <= 6; ++m) {
        CAPTURE(m);
        const CazacSequence c = generate_cazac(m);
        const std::size_t n = c.length();
        REQUIRE(n == std::size_t{1} << (2 * m));
        CHECK(oracle::max_abs_diff(c.symbols, oracle::cazac_formula(m)) < 1e-12);

        const double step = 2.0 * std::numbers::pi / std::pow(2.0, m);
        for (const auto& v : c.symbols) {
            CHECK(std::abs(std::abs(v) - 1.0) < 1e-12);
            const double q = std::arg(v) / step;
            CHECK(std::abs(q - std::round(q)) < 1e-9);
        }

        const CVec auto_r = oracle::circular_xcorr(c.symbols, c.symbols);
        CHECK(std::abs(auto_r[0] - static_cast<double>(n)) < 1e-9 * n);
        double side = 0.0;
        for (std::size_t k = 1; k < n; ++k)
            side = std::max(side, std::abs(auto_r[k]));
        CHECK(side < 1e-9 * n);

        // Correlating c against its half-period rotation peaks at lag N/2 only.
        const CVec shifted = circular_shift(c.symbols, n / 2);
        const CVec cross = oracle::circular_xcorr(c.symbols, shifted);
        for (std::size_t k = 0; k < n; ++k) {
            const double expect = k == n / 2 ? static_cast<double>(n) : 0.0;
            CHECK(std::abs(cross[k] - expect) < 1e-9 * n);
        }
    }
}

TEST_CASE("cazac order range")
{
    CHECK_THROWS_AS(generate_cazac(0), SizeError);
    CHECK_THROWS_AS(generate_cazac(13), SizeError);
}

TEST_CASE("circular_shift")
{
    const CVec s{-1.0, 1.0, 1.0, 1.0};
    CHECK(circular_shift(s, 2) == CVec{1.0, 1.0, -1.0, 1.0});
    CHECK(circular_shift(s, 0) == s);
    CHECK(circular_shift(s, 4 % s.size()) == s);
    CHECK_THROWS_AS(circular_shift(s, 4), ArgumentError);
    CHECK_THROWS_AS(circular_shift(CVec{}, 0), ArgumentError);

    // Rotation preserves the multiset of values and the energy.
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const CVec x = oracle::random_signal(37, seed);
        const std::size_t k = seed % x.size();
        const CVec y = circular_shift(x, k);
        for (std::size_t n = 0; n < x.size(); ++n)
            CHECK(y[(n + k) % x.size()] == x[n]);
        const auto energy = [](const CVec& v) {
            return std::accumulate(v.begin(), v.end(), 0.0, [](double a, Complex c) { return a + std::norm(c); });
        };
        CHECK(energy(y) == doctest::Approx(energy(x)).epsilon(1e-15));
    }
}

TEST_CASE("sweep waveform")
{
    CHECK_THROWS_AS(generate_sweep(4095), ArgumentError);
    CHECK_THROWS_AS(generate_sweep(6), ArgumentError);

    const std::size_t n = 4096;
    const DualPolSequence s = generate_sweep(n, 50e6);
    CHECK(s.scheme == Scheme::Sweep);
    CHECK(s.pol_x[0] == Complex(1.0, 0.0));
    CHECK(s.pol_y == circular_shift(s.pol_x, n / 2));

    const std::size_t w = default_window_length(n);
    REQUIRE(w == 64);
    const Spectrogram sx = spectrogram(s.pol_x, w, w);
    const Spectrogram sy = spectrogram(s.pol_y, w, w);
    const auto rx = ridge(sx, w / 2 + 1);
    const auto ry = ridge(sy, w / 2 + 1);
    REQUIRE(rx.size() == n / w);
    // Instantaneous frequency at the window centre is n_c / (2N) cycles per sample.
    for (std::size_t i = 0; i < rx.size(); ++i) {
        const double centre = (static_cast<double>(i) + 0.5) * static_cast<double>(w);
        const double expect_bin = static_cast<double>(w) * centre / (2.0 * static_cast<double>(n));
        CHECK(std::abs(static_cast<double>(rx[i]) - expect_bin) <= 1.0);
    }
    CHECK(std::is_sorted(rx.begin(), rx.end()));
    CHECK(rx.front() <= 1);
    CHECK(rx.back() >= w / 2 - 1);
    const std::size_t delay = (n / 2) / w;
    for (std::size_t i = 0; i < rx.size(); ++i)
        CHECK(ry[(i + delay) % ry.size()] == rx[i]);
}

TEST_CASE("build_probe sizes and layout")
{
    CHECK(build_probe(Scheme::GolayBpsk, 11).size() == 16384);
    CHECK(build_probe(Scheme::Cazac, 7).size() == 16384);

    const DualPolSequence c = build_probe(Scheme::Cazac, 1);
    CHECK(c.pol_y == CVec{1.0, 1.0, -1.0, 1.0});

    const DualPolSequence g = build_probe(Scheme::GolayBpsk, 2);
    const GolayPair p = generate_golay_pair(2);
    const GolayPair m = mate_pair(p);
    REQUIRE(g.size() == 32);
    for (std::size_t i = 0; i < 16; ++i) {
        CHECK(g.pol_x[i] == Complex(p.a[i], 0));
        CHECK(g.pol_x[16 + i] == Complex(p.b[i], 0));
        CHECK(g.pol_y[i] == Complex(m.a[i], 0));
        CHECK(g.pol_y[16 + i] == Complex(m.b[i], 0));
    }

    const DualPolSequence sw = build_probe(Scheme::Sweep, 64);
    CHECK(sw.size() == 64);
    CHECK(sw.pol_y == circular_shift(sw.pol_x, 32));

    CHECK(size_param_for_period(Scheme::GolayBpsk, 1024) == 7);
    CHECK(size_param_for_period(Scheme::Cazac, 1024) == 5);
    CHECK(size_param_for_period(Scheme::Sweep, 1024) == 1024);
    CHECK_THROWS_AS(size_param_for_period(Scheme::Cazac, 512), SizeError);
    CHECK_THROWS_AS(size_param_for_period(Scheme::GolayBpsk, 12), SizeError);
}

TEST_CASE("spectrogram basics")
{
    const CVec constant(64, Complex(1.0, 0.0));
    const Spectrogram sc = spectrogram(constant, 16, 16);
    CHECK(sc.windows == 4);
    for (std::size_t w = 0; w < sc.windows; ++w) {
        CHECK(sc.at(w, 0) == doctest::Approx(16.0));
        for (std::size_t b = 1; b < 16; ++b)
            CHECK(sc.at(w, b) < 1e-12);
    }

    CVec tone(256);
    for (std::size_t n = 0; n < tone.size(); ++n)
        tone[n] = std::polar(1.0, 2.0 * std::numbers::pi * 5.0 * static_cast<double>(n) / 32.0);
    const Spectrogram st = spectrogram(tone, 32, 8);
    CHECK(st.windows == (256 - 32) / 8 + 1);
    for (auto b : ridge(st, 32))
        CHECK(b == 5);
    CHECK(ridge_confidence(st, 32) == doctest::Approx(1.0));
    CHECK(std::all_of(st.magnitudes.begin(), st.magnitudes.end(), [](double m) { return m >= 0.0; }));

    CHECK_THROWS_AS(spectrogram(tone, 257, 1), ArgumentError);
    CHECK_THROWS_AS(spectrogram(tone, 16, 0), ArgumentError);
    CHECK(default_window_length(65536) == 256);
    CHECK(default_window_length(1024) == 32);
}

TEST_CASE("cazac time-frequency ridge is a linear sweep, pol-y delayed by half a period")
{
    const CazacSequence c = generate_cazac(8);
    const std::size_t n = c.length();
    REQUIRE(n == 65536);
    const std::size_t w = default_window_length(n);
    const CVec y = circular_shift(c.symbols, n / 2);
    const Spectrogram sx = spectrogram(c.symbols, w, w);
    const Spectrogram sy = spectrogram(y, w, w);
    const auto rx = ridge(sx, w);
    const auto ry = ridge(sy, w);
    // Each block of sqrt(N) symbols is a pure tone one bin above the previous one.
    for (std::size_t i = 0; i < rx.size(); ++i)
        CHECK(rx[i] == (i + 1) % w);
    const std::size_t delay = (n / 2) / w;
    for (std::size_t i = 0; i < rx.size(); ++i)
        CHECK(ry[(i + delay) % ry.size()] == rx[i]);
    CHECK(ridge_confidence(sx, w) > 0.99);

    const DualPolSequence g = build_probe(Scheme::GolayBpsk, size_param_for_period(Scheme::GolayBpsk, n));
    const Spectrogram sg = spectrogram(g.pol_x, w, w);
    CHECK(ridge_confidence(sg, w / 2 + 1) < 0.1);
}
