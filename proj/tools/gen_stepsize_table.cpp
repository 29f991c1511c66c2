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
//
// Regenerates the MSE-optimal uniform mid-rise stepsize table for a
// unit-variance Gaussian input, B = 1..8 bits.

#include <riscade/quantizer.hpp>

#include <cstdio>

int main()
{
    std::printf("bits  step          mse\n");
    for (int b = 1; b <= 8; ++b) {
        const double step = riscade::optimal_uniform_step(b);
        std::printf("%4d  %.10f  %.10e\n", b, step, riscade::midrise_gaussian_mse(b, step));
    }
    return 0;
}
