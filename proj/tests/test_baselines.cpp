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

#include <riscade/baselines.hpp>
#include <riscade/vamp_solver.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <Eigen/QR>

#include <algorithm>

using namespace riscade;

namespace {

StructuredOperator make_operator(const OperatorDims &dims, uint64_t seed)
{
    StreamRng rng(derive_seed(seed, {0x7261696e}));
    return StructuredOperator(dims, build_training_matrix(dims.m(), dims.p, rng));
}

VecXc random_vector(Eigen::Index n, StreamRng &rng)
{
    VecXc v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v(i) = rng.cnormal();
    return v;
}

VecXc flatten(const MatXc &m)
{
    return Eigen::Map<const VecXc>(m.data(), m.size());
}

// Training matrix with an all-ones generator: its circulant gram is rank
// one, which exercises the zeroed-mode (pseudo-inverse) path.
TrainingMatrix ones_training(int m, int p)
{
    TrainingMatrix tm;
    tm.generator = VecXc::Ones(p);
    fft_forward(tm.generator, tm.spectrum);
    tm.e = MatXc::Ones(m, p);
    const MatXc gram = tm.e.conjugate() * tm.e.transpose();
    Eigen::SelfAdjointEigenSolver<MatXc> es(gram);
    tm.u_e = es.eigenvectors();
    tm.gram_eigvals = es.eigenvalues().cwiseMax(0.0);
    return tm;
}

} // namespace

TEST_CASE("least squares is linear in the measurements", "[baselines]")
{
    const OperatorDims dims{2, 2, 2, 2, 1, 1, 8};
    const StructuredOperator op = make_operator(dims, 61);
    StreamRng rng(1);
    const VecXc y1 = random_vector(dims.ptn(), rng);
    const VecXc y2 = random_vector(dims.ptn(), rng);
    const cplx a(0.7, -1.2), b(-0.3, 0.4);

    const MatXc combined = ls_estimate(a * y1 + b * y2, op, 0.05).lambda_hat;
    const MatXc separate =
        a * ls_estimate(y1, op, 0.05).lambda_hat + b * ls_estimate(y2, op, 0.05).lambda_hat;
    REQUIRE((combined - separate).norm() < 1e-10 * (separate.norm() + 1.0));
}

TEST_CASE("zero measurements give the zero estimate", "[baselines]")
{
    const OperatorDims dims{2, 1, 2, 2, 1, 1, 6};
    const StructuredOperator op = make_operator(dims, 62);
    const LsSolution sol = ls_estimate(VecXc::Zero(dims.ptn()), op, 0.01);
    REQUIRE(sol.lambda_hat.norm() == 0.0);
    REQUIRE(sol.residual_norm == 0.0);
}

TEST_CASE("noiseless unregularized least squares recovers exactly", "[baselines]")
{
    const OperatorDims dims{2, 2, 2, 2, 1, 1, 8};
    const StructuredOperator op = make_operator(dims, 63);
    REQUIRE(op.singular_values_squared().minCoeff() > 0.0);

    StreamRng rng(2);
    const VecXc x = random_vector(dims.nmq(), rng);
    const VecXc y = op.forward(x);
    const LsSolution sol = ls_estimate(y, op, 0.0);
    REQUIRE((flatten(sol.lambda_hat) - x).norm() < 1e-8);
    REQUIRE(sol.residual_norm < 1e-8);
}

TEST_CASE("fast-path solution matches the dense least-squares oracle", "[baselines]")
{
    StreamRng rng(3);
    const std::vector<OperatorDims> cases = {
        {2, 1, 2, 1, 1, 1, 2}, {2, 2, 2, 2, 1, 1, 8}, {2, 2, 4, 2, 2, 1, 8},
        {2, 2, 2, 2, 2, 2, 4}, {2, 1, 3, 1, 1, 1, 9},
    };
    for (const OperatorDims &dims : cases) {
        const StructuredOperator op = make_operator(dims, 64);
        const MatXc a = dense_operator(op);
        for (double ridge : {0.0, 1e-3, 0.5}) {
            const VecXc y = random_vector(dims.ptn(), rng);
            const VecXc x_fast = flatten(ls_estimate(y, op, ridge).lambda_hat);
            VecXc x_dense;
            if (ridge > 0.0) {
                const MatXc reg = a.adjoint() * a +
                                  ridge * MatXc::Identity(dims.nmq(), dims.nmq());
                x_dense = reg.ldlt().solve(a.adjoint() * y);
            } else {
                x_dense = a.completeOrthogonalDecomposition().solve(y);
            }
            REQUIRE((x_fast - x_dense).norm() < 1e-8 * (x_dense.norm() + 1.0));
        }
    }
}

TEST_CASE("rank-deficient training falls back to the pseudo-inverse", "[baselines]")
{
    const OperatorDims dims{2, 2, 2, 2, 1, 1, 8};
    const StructuredOperator op(dims, ones_training(dims.m(), dims.p));
    REQUIRE(op.singular_values_squared().minCoeff() == 0.0);

    StreamRng rng(4);
    const VecXc y = random_vector(dims.ptn(), rng);
    const VecXc x_fast = flatten(ls_estimate(y, op, 0.0).lambda_hat);
    const MatXc a = dense_operator(op);
    const VecXc x_dense = a.completeOrthogonalDecomposition().solve(y);
    REQUIRE((x_fast - x_dense).norm() < 1e-8 * (x_dense.norm() + 1.0));
}

TEST_CASE("invalid regularization and degenerate operators are rejected", "[baselines]")
{
    const OperatorDims dims{2, 2, 2, 2, 1, 1, 8};
    const StructuredOperator op = make_operator(dims, 65);
    StreamRng rng(5);
    const VecXc y = random_vector(dims.ptn(), rng);
    REQUIRE_THROWS_AS(ls_estimate(y, op, -1.0), std::invalid_argument);

    // An all-zero training matrix leaves nothing to invert.
    TrainingMatrix dead;
    dead.generator = VecXc::Zero(dims.p);
    fft_forward(dead.generator, dead.spectrum);
    dead.e = MatXc::Zero(dims.m(), dims.p);
    dead.u_e = MatXc::Identity(dims.m(), dims.m());
    dead.gram_eigvals = VecXd::Zero(dims.m());
    const StructuredOperator zero_op(dims, dead);
    REQUIRE_THROWS_AS(ls_estimate(y, zero_op, 0.0), std::invalid_argument);
}

TEST_CASE("median least-squares error is no better than the message-passing solver",
          "[baselines]")
{
    const OperatorDims dims{2, 2, 2, 2, 2, 1, 8};
    const GmPrior prior = make_sparse_prior(dims.nmq(), 4.0, 4.0);
    std::vector<double> vamp_scores, ls_scores;

    for (uint64_t seed = 0; seed < 20; ++seed) {
        const StructuredOperator op = make_operator(dims, 900 + seed);
        StreamRng rng(derive_seed(7171, {seed}));
        VecXc x_true = VecXc::Zero(dims.nmq());
        const double rho = prior.components.at(0).var;
        for (Eigen::Index i = 0; i < x_true.size(); ++i)
            if (rng.uniform() >= prior.lambda0)
                x_true(i) = std::sqrt(rho) * rng.cnormal();
        if (x_true.norm() == 0.0)
            continue;

        const VecXc z = op.forward(x_true);
        const double sig_power = z.squaredNorm() / static_cast<double>(z.size());
        const double noise_var = sig_power; // SNR 0 dB
        VecXc u(z.size());
        for (Eigen::Index j = 0; j < z.size(); ++j)
            u(j) = z(j) + std::sqrt(noise_var) * rng.cnormal();
        const QuantizerSpec spec = design_quantizer(3, sig_power + noise_var);
        const std::vector<QuantizedSample> y = quantize(spec, u);

        const MatXc lambda_true = Eigen::Map<const MatXc>(
            x_true.data(), static_cast<Eigen::Index>(dims.q()) * dims.n(), dims.m());
        const VampResult res = vamp_estimate(y, op, spec, prior, noise_var, SolverConfig{});
        REQUIRE_FALSE(res.aborted);

        VecXc y_lin(z.size());
        for (Eigen::Index j = 0; j < z.size(); ++j)
            y_lin(j) = y[static_cast<std::size_t>(j)].value;
        const LsSolution ls = ls_estimate(y_lin, op, noise_var);

        vamp_scores.push_back(nmse_db(res.lambda_hat, lambda_true));
        ls_scores.push_back(nmse_db(ls.lambda_hat, lambda_true));
    }

    REQUIRE(vamp_scores.size() >= 15);
    std::sort(vamp_scores.begin(), vamp_scores.end());
    std::sort(ls_scores.begin(), ls_scores.end());
    const double vamp_median = vamp_scores[vamp_scores.size() / 2];
    const double ls_median = ls_scores[ls_scores.size() / 2];
    REQUIRE(ls_median >= vamp_median - 0.5);
}
