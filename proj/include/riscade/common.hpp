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

#ifndef riscade_common_H
#define riscade_common_H

#include <Eigen/Dense>
#include <complex>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace riscade {

using cplx = std::complex<double>;
using VecXc = Eigen::VectorXcd;
using VecXd = Eigen::VectorXd;
using MatXc = Eigen::MatrixXcd;
using MatXd = Eigen::MatrixXd;

inline constexpr double pi = 3.141592653589793238462643383279502884;

// Unit-modulus complex exponential exp(-j*2*pi*t).
inline cplx cis_neg(double t)
{
    return cplx(std::cos(2.0 * pi * t), -std::sin(2.0 * pi * t));
}

// Squared Frobenius norm accepting any Eigen expression.
template <typename Derived>
double sqnorm(const Eigen::MatrixBase<Derived> &m)
{
    return m.squaredNorm();
}

// 10*log10(||a - b||^2 / ||b||^2) with a floor at -300 dB for exact matches.
template <typename DerivedA, typename DerivedB>
double nmse_db(const Eigen::MatrixBase<DerivedA> &estimate,
               const Eigen::MatrixBase<DerivedB> &truth)
{
    const double ref = truth.squaredNorm();
    if (!(ref > 0.0))
        throw std::invalid_argument("nmse_db: reference has zero norm");
    const double err = (estimate - truth).squaredNorm();
    if (err <= 0.0)
        return -300.0;
    return 10.0 * std::log10(err / ref);
}

} // namespace riscade

#endif
