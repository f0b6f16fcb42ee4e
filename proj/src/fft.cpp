// SPDX-License-Identifier: Apache-2.0

#include "polprobe/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

namespace polprobe::fft {

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

class Transform {
public:
    Transform(std::size_t n, int sign) : n_(n)
    {
        buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * std::max<std::size_t>(n, 1)));
        std::lock_guard lock(planner_mutex());
        plan_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, sign, FFTW_ESTIMATE);
    }

    ~Transform()
    {
        {
            std::lock_guard lock(planner_mutex());
            fftw_destroy_plan(plan_);
        }
        fftw_free(buf_);
    }

    Transform(const Transform&) = delete;
    Transform& operator=(const Transform&) = delete;

    CVec run(std::span<const Complex> x)
    {
        auto* data = reinterpret_cast<Complex*>(buf_);
        std::copy(x.begin(), x.end(), data);
        fftw_execute(plan_);
        return CVec(data, data + n_);
    }

private:
    std::size_t n_;
    fftw_complex* buf_ = nullptr;
    fftw_plan plan_ = nullptr;
};

void require_same_length(std::size_t a, std::size_t b)
{
    if (a != b)
        throw ArgumentError("fft: operand lengths differ (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
}

}  // namespace

CVec forward(std::span<const Complex> x)
{
    if (x.empty())
        return {};
    Transform t(x.size(), FFTW_FORWARD);
    return t.run(x);
}

CVec inverse(std::span<const Complex> x)
{
    if (x.empty())
        return {};
    Transform t(x.size(), FFTW_BACKWARD);
    CVec out = t.run(x);
    const double scale = 1.0 / static_cast<double>(x.size());
    for (auto& v : out)
        v *= scale;
    return out;
}

CVec circular_convolve(std::span<const Complex> a, std::span<const Complex> b)
{
    require_same_length(a.size(), b.size());
    CVec fa = forward(a);
    const CVec fb = forward(b);
    for (std::size_t i = 0; i < fa.size(); ++i)
        fa[i] *= fb[i];
    return inverse(fa);
}

CVec circular_correlate(std::span<const Complex> x, std::span<const Complex> ref)
{
    require_same_length(x.size(), ref.size());
    CVec fx = forward(x);
    const CVec fr = forward(ref);
    for (std::size_t i = 0; i < fx.size(); ++i)
        fx[i] *= std::conj(fr[i]);
    return inverse(fx);
}

std::size_t next_pow2(std::size_t n)
{
    std::size_t p = 1;
    while (p < n)
        p <<= 1;
    return p;
}

}  // namespace polprobe::fft
