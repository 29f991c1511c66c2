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

#ifndef riscade_rng_H
#define riscade_rng_H

#include "common.hpp"

#include <initializer_list>
#include <random>

namespace riscade {

// splitmix64 finalizer; full avalanche on 64 bits.
inline std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derive a substream seed from a master seed and an ordered tag list.
// Streams for distinct tag tuples are independent regardless of the order
// they are instantiated in, so Monte Carlo trials can run on any schedule.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags)
{
    std::uint64_t h = mix64(master);
    for (std::uint64_t t : tags)
        h = mix64(h ^ mix64(t));
    return h;
}

// Seeded random stream. Normal variates use the Marsaglia polar method so the
// draw sequence is fixed by this file alone, not by the standard library's
// distribution implementations.
class StreamRng
{
  public:
    explicit StreamRng(std::uint64_t seed) : eng_(seed) {}

    StreamRng(std::uint64_t master, std::initializer_list<std::uint64_t> tags)
        : eng_(derive_seed(master, tags))
    {
    }

    // Uniform on [0, 1).
    double uniform()
    {
        return (eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi)
    {
        return lo + (hi - lo) * uniform();
    }

    double normal()
    {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    // Standard circularly symmetric complex Gaussian CN(0,1).
    cplx cnormal()
    {
        const double re = normal();
        const double im = normal();
        return cplx(re, im) * (1.0 / std::sqrt(2.0));
    }

    // Unit-modulus sample exp(j*phi), phi ~ U[0, 2*pi).
    cplx phase()
    {
        const double t = uniform();
        return cplx(std::cos(2.0 * pi * t), std::sin(2.0 * pi * t));
    }

    std::uint64_t raw()
    {
        return eng_();
    }

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace riscade

#endif
