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

#ifndef riscade_math_util_H
#define riscade_math_util_H

#include <cmath>
#include <limits>

namespace riscade {

inline constexpr double inv_sqrt2 = 0.7071067811865475244008443621048490;
inline constexpr double inv_sqrt_2pi = 0.3989422804014326779399460599343819;

// Standard normal density.
inline double norm_pdf(double t)
{
    return inv_sqrt_2pi * std::exp(-0.5 * t * t);
}

// Standard normal CDF.
inline double norm_cdf(double t)
{
    return 0.5 * std::erfc(-t * inv_sqrt2);
}

// Scaled complementary error function exp(x^2)*erfc(x) for x >= 0.
// Direct evaluation is exact until exp(x^2) overflows; past that the
// asymptotic expansion converges to full double precision.
inline double erfcx_pos(double x)
{
    if (x < 25.0)
        return std::exp(x * x) * std::erfc(x);
    const double ix2 = 1.0 / (2.0 * x * x);
    // 1 - 1!!*u + 3!!*u^2 - 5!!*u^3 + ...  with u = 1/(2x^2)
    double series = 1.0;
    double term = 1.0;
    for (int k = 1; k <= 6; ++k) {
        term *= -(2.0 * k - 1.0) * ix2;
        series += term;
    }
    return series / (x * 1.7724538509055160272981674833411452); // x*sqrt(pi)
}

} // namespace riscade

#endif
