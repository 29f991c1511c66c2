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

#include <riscade/angular_domain.hpp>
#include <riscade/linear_operator.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace riscade;

namespace {

VecXc random_vector(StreamRng &rng, Eigen::Index n)
{
    VecXc v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v(i) = rng.cnormal();
    return v;
}

StructuredOperator make_operator(const OperatorDims &d, std::uint64_t seed,
                                 TrainingKind kind = TrainingKind::random_phases)
{
    StreamRng rng(seed, {0xE});
    return StructuredOperator(d, build_training_matrix(d.m(), d.p, rng, kind));
}

const std::vector<OperatorDims> small_dims = {
    {2, 1, 2, 1, 1, 1, 2},  {2, 2, 2, 2, 1, 1, 8},  {2, 1, 2, 2, 2, 1, 4},
    {2, 2, 4, 2, 2, 1, 8},  {2, 2, 2, 2, 2, 2, 4},  {4, 2, 2, 2, 2, 2, 6},
    {2, 2, 4, 4, 2, 2, 16}, {2, 1, 3, 1, 1, 1, 9},
};

} // namespace

TEST_CASE("training matrix structure and eigen-decomposition", "[operator]")
{
    StreamRng rng(5, {1});
    const TrainingMatrix one = build_training_matrix(1, 7, rng);
    REQUIRE(one.gram_eigvals.size() == 1);
    REQUIRE(one.gram_eigvals(0) == Catch::Approx(7.0));

    // Square case: the gram is the full circulant gram, eigenvalues equal the
    // squared DFT magnitudes of the generator.
    StreamRng rng2(5, {2});
    const TrainingMatrix sq = build_training_matrix(8, 8, rng2);
    VecXd spec_sq = sq.spectrum.cwiseAbs2();
    std::sort(spec_sq.data(), spec_sq.data() + spec_sq.size());
    for (int i = 0; i < 8; ++i)
        REQUIRE(sq.gram_eigvals(i) == Catch::Approx(spec_sq(i)).margin(1e-8));

    const MatXc gram = sq.e.conjugate() * sq.e.transpose();
    const MatXc recon =
        sq.u_e * sq.gram_eigvals.asDiagonal() * sq.u_e.adjoint();
    REQUIRE((gram - recon).norm() < 1e-8);

    for (Eigen::Index i = 0; i < sq.e.rows(); ++i)
        for (Eigen::Index j = 0; j < sq.e.cols(); ++j)
            REQUIRE(std::abs(std::abs(sq.e(i, j)) - 1.0) < 1e-12);

    StreamRng rng3(5, {2});
    const TrainingMatrix again = build_training_matrix(8, 8, rng3);
    REQUIRE((again.e - sq.e).norm() == 0.0);

    StreamRng rng4(5, {3});
    REQUIRE_THROWS_AS(build_training_matrix(8, 4, rng4), std::invalid_argument);
}

TEST_CASE("Zadoff-Chu training has a flat gram spectrum", "[operator]")
{
    StreamRng rng(1, {1});
    for (int p : {8, 9, 16}) {
        const int m = p / 2;
        const TrainingMatrix zc = build_training_matrix(m, p, rng, TrainingKind::zadoff_chu);
        for (int i = 0; i < m; ++i)
            REQUIRE(zc.gram_eigvals(i) == Catch::Approx(static_cast<double>(p)).margin(1e-8));
    }
}

TEST_CASE("fast forward and adjoint match the dense operator", "[operator]")
{
    for (std::size_t t = 0; t < small_dims.size(); ++t) {
        const OperatorDims &d = small_dims[t];
        const StructuredOperator op = make_operator(d, 100 + t);
        const MatXc a = dense_operator(op);
        REQUIRE(a.rows() == d.ptn());
        REQUIRE(a.cols() == d.nmq());

        StreamRng rng(200 + t);
        for (int rep = 0; rep < 10; ++rep) {
            const VecXc x = random_vector(rng, d.nmq());
            const VecXc y_fast = op.forward(x);
            const VecXc y_dense = a * x;
            REQUIRE((y_fast - y_dense).norm() < 1e-10 * y_dense.norm());

            const VecXc p = random_vector(rng, d.ptn());
            const VecXc x_fast = op.adjoint_times(p);
            const VecXc x_dense = a.adjoint() * p;
            REQUIRE((x_fast - x_dense).norm() < 1e-10 * x_dense.norm());

            // <A x, p> == <x, A^H p>
            const cplx lhs = y_fast.dot(p);
            const cplx rhs = x.dot(x_fast);
            REQUIRE(std::abs(lhs - rhs) < 1e-9 * std::abs(lhs));
        }

        REQUIRE(op.forward(VecXc::Zero(d.nmq())).norm() == 0.0);
        REQUIRE(op.adjoint_times(VecXc::Zero(d.ptn())).norm() == 0.0);

        // Basis vectors extract dense columns.
        VecXc e_k = VecXc::Zero(d.nmq());
        const Eigen::Index k = d.nmq() / 2;
        e_k(k) = 1.0;
        REQUIRE((op.forward(e_k) - a.col(k)).norm() < 1e-10 * a.col(k).norm());
    }
}

TEST_CASE("forward of the true angular unknown reproduces G*E", "[operator]")
{
    const OperatorDims d{2, 2, 2, 2, 2, 1, 6};
    const StructuredOperator op = make_operator(d, 42);

    ChannelModelConfig cfg;
    cfg.bs = {d.n1, d.n2, 0.5};
    cfg.ris = {d.m1, d.m2, 0.5};
    cfg.user = {d.q1, d.q2, 0.5};
    cfg.paths_br = 2;
    cfg.paths_ru = 2;
    StreamRng rng(7, {3});
    const CascadedChannel g = cascade(synthesize_channels(cfg, rng));

    const DftDictionary fn = build_dictionary(d.n1, d.n2);
    const DftDictionary fm = build_dictionary(d.m1, d.m2);
    const DftDictionary fq = build_dictionary(d.q1, d.q2);
    const CompressedAngularMatrix lam = lambda_from_cascaded(g, fn, fm, fq);

    const Eigen::Map<const VecXc> x(lam.lambda.data(), lam.lambda.size());
    const VecXc z = op.forward(x);
    const MatXc ge = g.g * op.training().e;
    const Eigen::Map<const VecXc> ge_vec(ge.data(), ge.size());
    REQUIRE((z - ge_vec).norm() < 1e-10 * ge_vec.norm());
}

TEST_CASE("V_A is unitary and matches its dense form", "[operator]")
{
    for (std::size_t t = 0; t < small_dims.size(); ++t) {
        const OperatorDims &d = small_dims[t];
        const StructuredOperator op = make_operator(d, 300 + t);
        const Eigen::Index qn = static_cast<Eigen::Index>(d.q()) * d.n();

        const MatXc va_dense =
            kron(op.f_m().transpose() * op.training().u_e /
                     std::sqrt(static_cast<double>(d.m())),
                 MatXc::Identity(qn, qn));

        StreamRng rng(400 + t);
        for (int rep = 0; rep < 5; ++rep) {
            const VecXc v = random_vector(rng, d.nmq());
            const VecXc round = op.va_adjoint_apply(op.va_apply(v));
            REQUIRE((round - v).norm() < 1e-10 * v.norm());
            REQUIRE((op.va_apply(v) - va_dense * v).norm() < 1e-10 * v.norm());
            REQUIRE((op.va_adjoint_apply(v) - va_dense.adjoint() * v).norm() <
                    1e-10 * v.norm());
        }
        REQUIRE(op.va_apply(VecXc::Zero(d.nmq())).norm() == 0.0);
    }
}

TEST_CASE("singular spectrum diagonalizes A^H A", "[operator]")
{
    for (std::size_t t = 0; t < small_dims.size(); ++t) {
        const OperatorDims &d = small_dims[t];
        const StructuredOperator op = make_operator(d, 500 + t);
        const MatXc a = dense_operator(op);
        const Eigen::Index qn = static_cast<Eigen::Index>(d.q()) * d.n();
        const MatXc va_dense =
            kron(op.f_m().transpose() * op.training().u_e /
                     std::sqrt(static_cast<double>(d.m())),
                 MatXc::Identity(qn, qn));

        const MatXc lhs = a.adjoint() * a;
        const MatXc rhs = va_dense *
                          op.singular_values_squared().asDiagonal().toDenseMatrix() *
                          va_dense.adjoint();
        REQUIRE((lhs - rhs).norm() < 1e-8 * lhs.norm());

        REQUIRE(op.singular_values_squared().sum() ==
                Catch::Approx(a.squaredNorm()).epsilon(1e-9));
        REQUIRE(op.singular_values_squared().minCoeff() >= 0.0);
    }

    // M = 1: all squared singular values collapse to NQ * P.
    const OperatorDims d1{2, 1, 1, 1, 2, 1, 5};
    const StructuredOperator op1 = make_operator(d1, 9);
    for (Eigen::Index i = 0; i < op1.singular_values_squared().size(); ++i)
        REQUIRE(op1.singular_values_squared()(i) ==
                Catch::Approx(static_cast<double>(d1.n() * d1.q() * d1.p)));
}
