// SPDX-License-Identifier: Apache-2.0
//
// riscade  Cascaded RIS channel estimation from few-bit measurements
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef riscade_quantizer_H
#define riscade_quantizer_H

#include "common.hpp"
#include "math_util.hpp"

#include <array>
#include <limits>
#include <stdexcept>
#include <vector>

namespace riscade {

// Sentinel for an unquantized (infinite-resolution) ADC in bit lists.
inline constexpr int kInfiniteBits = 0;

// B-bit uniform mid-rise quantizer acting on Re and Im independently with a
// common stepsize. Thresholds are h_b = (b - 2^{B-1})*step for b = 1..2^B-1;
// bin k covers [h_k, h_{k+1}) with h_0 = -inf, h_{2^B} = +inf, and
// reconstructs at (k - 2^{B-1} + 1/2)*step (outermost bins included).
struct QuantizerSpec
{
    int bits = kInfiniteBits;
    double step = 0.0;

    bool infinite() const { return bits == kInfiniteBits; }
    int levels() const { return 1 << bits; }
};

struct QuantizedSample
{
    cplx value{0.0, 0.0};
    int bin_re = -1;
    int bin_im = -1;
};

// Mean squared error of the B-bit mid-rise quantizer with stepsize `step`
// applied to a unit-variance real Gaussian, in closed form via the segment
// integrals of (xi - c)^2 phi(xi).
inline double midrise_gaussian_mse(int bits, double step)
{
    const int levels = 1 << bits;
    const int half = levels / 2;
    auto segment = [](double a, double b, double c) {
        const double phi_a = std::isinf(a) ? 0.0 : norm_pdf(a);
        const double phi_b = std::isinf(b) ? 0.0 : norm_pdf(b);
        const double cdf_a = std::isinf(a) ? (a < 0 ? 0.0 : 1.0) : norm_cdf(a);
        const double cdf_b = std::isinf(b) ? (b < 0 ? 0.0 : 1.0) : norm_cdf(b);
        const double a_phi_a = std::isinf(a) ? 0.0 : a * phi_a;
        const double b_phi_b = std::isinf(b) ? 0.0 : b * phi_b;
        return (1.0 + c * c) * (cdf_b - cdf_a) + a_phi_a - b_phi_b -
               2.0 * c * (phi_a - phi_b);
    };
    // Symmetric in xi -> -xi; sum the positive half twice.
    double mse = 0.0;
    for (int k = half; k < levels; ++k) {
        const double lo = (k - half) * step;
        const double hi = (k + 1 == levels) ? std::numeric_limits<double>::infinity()
                                            : (k - half + 1) * step;
        const double c = (k - half + 0.5) * step;
        mse += 2.0 * segment(lo, hi, c);
    }
    return mse;
}

// MSE-optimal stepsize for a unit-variance Gaussian input, by golden-section
// search on the closed-form objective (unimodal in the step).
inline double optimal_uniform_step(int bits)
{
    if (bits < 1 || bits > 8)
        throw std::invalid_argument("optimal_uniform_step: bits must be 1..8");
    const double gr = 0.6180339887498949;
    double lo = 1e-3, hi = 4.0;
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = midrise_gaussian_mse(bits, x1);
    double f2 = midrise_gaussian_mse(bits, x2);
    while (hi - lo > 1e-12) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = midrise_gaussian_mse(bits, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = midrise_gaussian_mse(bits, x2);
        }
    }
    return 0.5 * (lo + hi);
}

// Delta(B) for B = 1..8, computed once per process from the minimizer above.
inline const std::array<double, 8> &stepsize_table()
{
    static const std::array<double, 8> table = [] {
        std::array<double, 8> t{};
        for (int b = 1; b <= 8; ++b)
            t[b - 1] = optimal_uniform_step(b);
        return t;
    }();
    return table;
}

// Automatic gain control: step = sqrt(E{|xi|^2}/2) * Delta(B), splitting the
// complex input power evenly over Re and Im.
inline QuantizerSpec design_quantizer(int bits, double input_power)
{
    QuantizerSpec spec;
    spec.bits = bits;
    if (bits == kInfiniteBits)
        return spec;
    if (bits < 1 || bits > 8)
        throw std::invalid_argument("design_quantizer: bits must be 1..8 or infinite");
    if (input_power <= 0.0)
        throw std::invalid_argument("design_quantizer: input_power must be > 0");
    spec.step = std::sqrt(input_power / 2.0) * stepsize_table()[bits - 1];
    return spec;
}

namespace detail {

inline int bin_index(const QuantizerSpec &spec, double x)
{
    const int half = spec.levels() / 2;
    const int k = static_cast<int>(std::floor(x / spec.step)) + half;
    return k < 0 ? 0 : (k >= spec.levels() ? spec.levels() - 1 : k);
}

inline double bin_midpoint(const QuantizerSpec &spec, int k)
{
    return (k - spec.levels() / 2 + 0.5) * spec.step;
}

} // namespace detail

inline QuantizedSample quantize(const QuantizerSpec &spec, cplx z)
{
    QuantizedSample s;
    if (spec.infinite()) {
        s.value = z;
        return s;
    }
    s.bin_re = detail::bin_index(spec, z.real());
    s.bin_im = detail::bin_index(spec, z.imag());
    s.value = cplx(detail::bin_midpoint(spec, s.bin_re), detail::bin_midpoint(spec, s.bin_im));
    return s;
}

inline std::vector<QuantizedSample> quantize(const QuantizerSpec &spec, const VecXc &z)
{
    std::vector<QuantizedSample> out(static_cast<std::size_t>(z.size()));
    for (Eigen::Index i = 0; i < z.size(); ++i)
        out[static_cast<std::size_t>(i)] = quantize(spec, z(i));
    return out;
}

// Bin interval [lower, upper); the outermost bins extend to +-inf.
inline std::pair<double, double> bin_bounds(const QuantizerSpec &spec, int bin_index)
{
    if (spec.infinite())
        throw std::invalid_argument("bin_bounds: infinite-resolution quantizer has no bins");
    if (bin_index < 0 || bin_index >= spec.levels())
        throw std::out_of_range("bin_bounds: bin index out of range");
    const int half = spec.levels() / 2;
    const double lo = bin_index == 0 ? -std::numeric_limits<double>::infinity()
                                     : (bin_index - half) * spec.step;
    const double hi = bin_index + 1 == spec.levels()
                          ? std::numeric_limits<double>::infinity()
                          : (bin_index + 1 - half) * spec.step;
    return {lo, hi};
}

} // namespace riscade

#endif
