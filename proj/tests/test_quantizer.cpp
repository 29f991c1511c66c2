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

#include <riscade/quantizer.hpp>
#include <riscade/rng.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace riscade;

TEST_CASE("optimal stepsizes match the classical uniform-quantizer table", "[quantizer]")
{
    // Max (1960) optimum uniform quantizer for a unit Gaussian; 1-bit value
    // is the closed form 2*sqrt(2/pi).
    REQUIRE(stepsize_table()[0] == Catch::Approx(1.5957691216057308).margin(1e-6));
    REQUIRE(stepsize_table()[1] == Catch::Approx(0.9957).margin(3e-3));
    REQUIRE(stepsize_table()[2] == Catch::Approx(0.5860).margin(3e-3));
    REQUIRE(stepsize_table()[3] == Catch::Approx(0.3352).margin(3e-3));
    REQUIRE(stepsize_table()[4] == Catch::Approx(0.1881).margin(3e-3));
    REQUIRE(stepsize_table()[5] == Catch::Approx(0.1041).margin(3e-3));
    REQUIRE(stepsize_table()[6] == Catch::Approx(0.0569).margin(3e-3));
    REQUIRE(stepsize_table()[7] == Catch::Approx(0.0308).margin(3e-3));

    // Interior minimum: nudging the step in either direction raises the MSE.
    for (int b = 1; b <= 8; ++b) {
        const double s = stepsize_table()[b - 1];
        REQUIRE(midrise_gaussian_mse(b, s) < midrise_gaussian_mse(b, s * 1.05));
        REQUIRE(midrise_gaussian_mse(b, s) < midrise_gaussian_mse(b, s * 0.95));
    }

    for (int b = 1; b < 8; ++b)
        REQUIRE(stepsize_table()[b] < stepsize_table()[b - 1]);
}

TEST_CASE("design scales the step by the input RMS per component", "[quantizer]")
{
    REQUIRE(design_quantizer(1, 2.0).step == Catch::Approx(1.59577).margin(1e-3));
    REQUIRE(design_quantizer(3, 2.0).step == Catch::Approx(0.5860).margin(1e-3));
    REQUIRE(design_quantizer(3, 8.0).step ==
            Catch::Approx(2.0 * design_quantizer(3, 2.0).step).epsilon(1e-12));

    const QuantizerSpec inf = design_quantizer(kInfiniteBits, 1.0);
    REQUIRE(inf.infinite());

    REQUIRE_THROWS_AS(design_quantizer(9, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(design_quantizer(3, 0.0), std::invalid_argument);
}

TEST_CASE("quantize midpoints, sign behavior, and saturation", "[quantizer]")
{
    QuantizerSpec q2{2, 1.0};
    const QuantizedSample s = quantize(q2, cplx(0.3, 0.3));
    REQUIRE(s.value == cplx(0.5, 0.5));
    REQUIRE(s.bin_re == 2);

    QuantizerSpec q1{1, 0.7};
    const QuantizedSample sign = quantize(q1, cplx(-0.1, -5.0));
    REQUIRE(sign.value == cplx(-0.35, -0.35));

    REQUIRE(quantize(q2, cplx(10.0, 0.1)).value.real() == Catch::Approx(1.5));
    REQUIRE(quantize(q2, cplx(-10.0, 0.1)).value.real() == Catch::Approx(-1.5));

    QuantizerSpec inf{kInfiniteBits, 0.0};
    const cplx z(1.234, -9.9);
    REQUIRE(quantize(inf, z).value == z);
}

TEST_CASE("bin bounds partition the real line", "[quantizer]")
{
    QuantizerSpec q1{1, 1.0};
    REQUIRE(bin_bounds(q1, 0).first == -std::numeric_limits<double>::infinity());
    REQUIRE(bin_bounds(q1, 0).second == 0.0);
    REQUIRE(bin_bounds(q1, 1).first == 0.0);
    REQUIRE(bin_bounds(q1, 1).second == std::numeric_limits<double>::infinity());

    QuantizerSpec q2{2, 1.0};
    REQUIRE(bin_bounds(q2, 1).first == -1.0);
    REQUIRE(bin_bounds(q2, 1).second == 0.0);
    REQUIRE_THROWS_AS(bin_bounds(q2, 4), std::out_of_range);

    QuantizerSpec q3{3, 0.37};
    for (double x = -3.0; x <= 3.0; x += 0.011) {
        int containing = -1;
        for (int k = 0; k < q3.levels(); ++k) {
            auto [lo, hi] = bin_bounds(q3, k);
            if (x >= lo && x < hi) {
                REQUIRE(containing == -1);
                containing = k;
            }
        }
        REQUIRE(containing >= 0);
        REQUIRE(quantize(q3, cplx(x, 0.0)).bin_re == containing);
    }
}

TEST_CASE("quantization is monotone with bounded in-range error", "[quantizer]")
{
    StreamRng rng(23);
    QuantizerSpec q3{3, 0.49};
    double prev_in = -1e9, prev_out = -1e9;
    for (int i = 0; i < 2000; ++i) {
        const double x = rng.uniform(-4.0, 4.0);
        const double y = quantize(q3, cplx(x, 0.0)).value.real();
        const auto bounds = bin_bounds(q3, quantize(q3, cplx(x, 0.0)).bin_re);
        if (std::isfinite(bounds.first) && std::isfinite(bounds.second))
            REQUIRE(std::abs(x - y) <= q3.step / 2 + 1e-12);
        if (x >= prev_in)
            ; // unordered draws: compare via a second pass below instead
        prev_in = x;
        prev_out = y;
    }
    (void)prev_out;
    for (double x = -3.0; x < 3.0; x += 0.005) {
        const double y0 = quantize(q3, cplx(x, 0.0)).value.real();
        const double y1 = quantize(q3, cplx(x + 0.005, 0.0)).value.real();
        REQUIRE(y1 >= y0);
    }
}
