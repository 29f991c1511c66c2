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

#ifndef riscade_dft_ops_H
#define riscade_dft_ops_H

#include "common.hpp"

#include <unsupported/Eigen/FFT>

namespace riscade {

// Unnormalized DFT matrix U_n[a,b] = exp(-j*2*pi*a*b/n). Symmetric, and
// U^H U = n*I.
inline MatXc dft_matrix(int n)
{
    MatXc u(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            // Reduce a*b mod n first so large indices lose no precision.
            const long long ab = static_cast<long long>(a) * b % n;
            u(a, b) = cis_neg(static_cast<double>(ab) / n);
        }
    return u;
}

// Dense Kronecker product, for small dimensions and test oracles.
inline MatXc kron(const MatXc &a, const MatXc &b)
{
    MatXc out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

namespace detail {

// One FFT engine per thread; Eigen::FFT caches one plan per length inside,
// so repeated transforms of the operator's fixed lengths reuse plans without
// any cross-thread shared state.
inline Eigen::FFT<double> &fft_engine()
{
    thread_local Eigen::FFT<double> engine;
    return engine;
}

} // namespace detail

// y = FFT(x), unnormalized (multiplication by U_n).
inline void fft_forward(const VecXc &x, VecXc &y)
{
    detail::fft_engine().fwd(y, x);
}

// y = IFFT(x) with the 1/n factor (multiplication by U_n^* / n).
inline void fft_inverse(const VecXc &x, VecXc &y)
{
    detail::fft_engine().inv(y, x);
}

// Multiplication by the circulant matrix C with first column `gen`, and by
// its conjugate transpose, done in the Fourier domain. C[i,j] = gen[(i-j) mod n].
class CirculantMultiplier
{
  public:
    CirculantMultiplier() = default;

    explicit CirculantMultiplier(const VecXc &gen) : n_(gen.size())
    {
        fft_forward(gen, spectrum_);
    }

    Eigen::Index size() const { return n_; }
    const VecXc &spectrum() const { return spectrum_; }

    // y = C x
    void apply(const VecXc &x, VecXc &y) const
    {
        VecXc fx;
        fft_forward(x, fx);
        fx.array() *= spectrum_.array();
        fft_inverse(fx, y);
    }

    // y = C^H x
    void apply_adjoint(const VecXc &x, VecXc &y) const
    {
        VecXc fx;
        fft_forward(x, fx);
        fx.array() *= spectrum_.array().conjugate();
        fft_inverse(fx, y);
    }

  private:
    Eigen::Index n_ = 0;
    VecXc spectrum_;
};

} // namespace riscade

#endif
