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

#ifndef riscade_baselines_H
#define riscade_baselines_H

#include "linear_operator.hpp"

#include <stdexcept>

namespace riscade {

struct LsSolution
{
    MatXc lambda_hat;          // QN x M
    double residual_norm = 0.0; // ||A x_hat - y||
};

// Regularized least squares on the linearized measurements, closed form in
// the operator eigenbasis: x = V_A (s^2 + ridge)^{-1} V_A^H A^H y. With
// ridge = 0, modes whose eigenvalue vanishes are zeroed, which is the
// pseudo-inverse convention.
inline LsSolution ls_estimate(const VecXc &y, const StructuredOperator &op,
                              double ridge = 0.0)
{
    if (!(ridge >= 0.0))
        throw std::invalid_argument("ls_estimate: ridge must be >= 0");
    const VecXd &s_sq = op.singular_values_squared();
    const double top = s_sq.maxCoeff() + ridge;
    if (!(top > 0.0))
        throw std::invalid_argument("ls_estimate: degenerate normal equations");

    const double cutoff = top * 1e-13;
    VecXd weights(s_sq.size());
    for (Eigen::Index i = 0; i < s_sq.size(); ++i) {
        const double d = s_sq(i) + ridge;
        weights(i) = d > cutoff ? 1.0 / d : 0.0;
    }

    const VecXc x = eigenbasis_filter(op, op.adjoint_times(y), weights);

    LsSolution sol;
    const Eigen::Index qn = static_cast<Eigen::Index>(op.dims().q()) * op.dims().n();
    sol.lambda_hat = Eigen::Map<const MatXc>(x.data(), qn, op.dims().m());
    sol.residual_norm = (op.forward(x) - y).norm();
    return sol;
}

} // namespace riscade

#endif
