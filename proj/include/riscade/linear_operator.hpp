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

#ifndef riscade_linear_operator_H
#define riscade_linear_operator_H

#include "dft_ops.hpp"
#include "rng.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace riscade {

struct OperatorDims
{
    int n1 = 1, n2 = 1; // BS UPA
    int m1 = 1, m2 = 1; // RIS UPA
    int q1 = 1, q2 = 1; // user UPA
    int p = 1;          // RIS phase configurations (circulant size)

    int n() const { return n1 * n2; }
    int m() const { return m1 * m2; }
    int q() const { return q1 * q2; }
    int t() const { return q(); } // pilot convention S = I_Q
    Eigen::Index nmq() const { return static_cast<Eigen::Index>(n()) * m() * q(); }
    Eigen::Index ptn() const { return static_cast<Eigen::Index>(p) * t() * n(); }
};

enum class TrainingKind
{
    random_phases,
    zadoff_chu
};

// RIS training matrix E (M x P): E^T is the first M columns of a P x P
// circulant with unit-modulus generator, so multiplication by E and E^H
// reduces to circular convolution. U_E / gram_eigvals diagonalize E^* E^T.
struct TrainingMatrix
{
    MatXc e;            // M x P
    VecXc generator;    // first column of the circulant parent
    VecXc spectrum;     // DFT(generator), length P
    MatXc u_e;          // M x M eigenvectors of E^* E^T
    VecXd gram_eigvals; // ascending, length M
};

inline VecXc zadoff_chu_sequence(int p)
{
    VecXc gen(p);
    for (int k = 0; k < p; ++k) {
        // Quadratic phase; constant-magnitude DFT for both parities.
        const long long num = (p % 2 == 0) ? static_cast<long long>(k) * k
                                           : static_cast<long long>(k) * (k + 1);
        gen(k) = std::exp(cplx(0.0, -pi * static_cast<double>(num % (2LL * p)) / p));
    }
    return gen;
}

inline TrainingMatrix build_training_matrix(int m, int p, StreamRng &rng,
                                            TrainingKind kind = TrainingKind::random_phases)
{
    if (p < m)
        throw std::invalid_argument("build_training_matrix: requires p >= m");

    TrainingMatrix tm;
    tm.generator.resize(p);
    if (kind == TrainingKind::zadoff_chu) {
        tm.generator = zadoff_chu_sequence(p);
    } else {
        for (int k = 0; k < p; ++k)
            tm.generator(k) = rng.phase();
    }
    fft_forward(tm.generator, tm.spectrum);

    // E[m, j] = generator[(j - m) mod p]: rows are shifted copies.
    tm.e.resize(m, p);
    for (int a = 0; a < m; ++a)
        for (int j = 0; j < p; ++j)
            tm.e(a, j) = tm.generator((j - a + p) % p);

    const MatXc gram = tm.e.conjugate() * tm.e.transpose(); // E^* E^T, M x M
    Eigen::SelfAdjointEigenSolver<MatXc> es(gram);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("build_training_matrix: eigendecomposition failed");
    tm.u_e = es.eigenvectors();
    tm.gram_eigvals = es.eigenvalues().cwiseMax(0.0);
    return tm;
}

// Measurement map A = (F_M^H E)^T kron (S^T F_Q^* kron F_N) with S = I_Q,
// acting on vec(Lambda), Lambda in C^{QN x M}. The M-, Q- and N-axis DFT
// factors are applied as dense multiplies against precomputed dictionary
// matrices (dimensions are small and fixed); the P axis runs through the
// circulant's FFT, which is what the training length scales in.
//
// Eigenstructure: A^H A = V_A Diag(s^2) V_A^H with
// V_A = (1/sqrt(M)) F_M^T U_E kron I_{NQ} and s^2 = NMQ * gram_eigvals,
// each eigenvalue repeated NQ times (its Lambda column).
class StructuredOperator
{
  public:
    StructuredOperator(const OperatorDims &dims, TrainingMatrix training)
        : d_(dims), tr_(std::move(training)), circ_(tr_.generator)
    {
        if (tr_.e.rows() != d_.m() || tr_.e.cols() != d_.p)
            throw std::invalid_argument("StructuredOperator: training matrix shape mismatch");
        f_n_ = kron(dft_matrix(d_.n1), dft_matrix(d_.n2));
        f_m_ = kron(dft_matrix(d_.m1), dft_matrix(d_.m2));
        f_q_ = kron(dft_matrix(d_.q1), dft_matrix(d_.q2));

        const double scale = 1.0 / std::sqrt(static_cast<double>(d_.m()));
        w_va_ = scale * tr_.u_e.transpose() * f_m_; // right factor of V_A on Lambda

        s_sq_.resize(d_.nmq());
        const double nmq = static_cast<double>(d_.nmq());
        const Eigen::Index qn = static_cast<Eigen::Index>(d_.q()) * d_.n();
        for (int m = 0; m < d_.m(); ++m)
            s_sq_.segment(m * qn, qn).setConstant(nmq * tr_.gram_eigvals(m));
    }

    const OperatorDims &dims() const { return d_; }
    const TrainingMatrix &training() const { return tr_; }
    const MatXc &f_n() const { return f_n_; }
    const MatXc &f_m() const { return f_m_; }
    const MatXc &f_q() const { return f_q_; }
    const VecXd &singular_values_squared() const { return s_sq_; }

    // y = A x: Lambda -> Lambda F_M^H -> (.)E by circular convolution ->
    // per-configuration F_N (.) F_Q^* on the N x Q slices.
    VecXc forward(const VecXc &x) const
    {
        check_len(x.size(), d_.nmq(), "forward");
        const Eigen::Index qn = static_cast<Eigen::Index>(d_.q()) * d_.n();
        const Eigen::Map<const MatXc> lambda(x.data(), qn, d_.m());

        const MatXc r = lambda * f_m_.adjoint(); // QN x M
        MatXc z0(qn, d_.p);
        right_mul_training(r, z0);

        // One GEMM over the flattened (N, Q*P) view, then the Q-axis per slice.
        const Eigen::Map<const MatXc> z0n(z0.data(), d_.n(),
                                          static_cast<Eigen::Index>(d_.q()) * d_.p);
        const MatXc w = f_n_ * z0n;

        VecXc y(d_.ptn());
        const MatXc fq_conj = f_q_.conjugate();
        const Eigen::Index tn = static_cast<Eigen::Index>(d_.t()) * d_.n();
        for (int p = 0; p < d_.p; ++p) {
            const auto wp = w.middleCols(static_cast<Eigen::Index>(p) * d_.q(), d_.q());
            Eigen::Map<MatXc> yp(y.data() + p * tn, d_.n(), d_.t());
            yp.noalias() = wp * fq_conj;
        }
        return y;
    }

    // x = A^H y, the forward pipeline reversed with conjugate factors.
    VecXc adjoint_times(const VecXc &y) const
    {
        check_len(y.size(), d_.ptn(), "adjoint_times");
        const Eigen::Index qn = static_cast<Eigen::Index>(d_.q()) * d_.n();
        const Eigen::Map<const MatXc> ymat(y.data(), d_.n(),
                                           static_cast<Eigen::Index>(d_.t()) * d_.p);

        const MatXc w = f_n_.adjoint() * ymat;
        MatXc z0(qn, d_.p);
        for (int p = 0; p < d_.p; ++p) {
            const auto wp = w.middleCols(static_cast<Eigen::Index>(p) * d_.t(), d_.t());
            Eigen::Map<MatXc> zp(z0.data() + p * qn, d_.n(), d_.q());
            zp.noalias() = wp * f_q_;
        }

        MatXc r(qn, d_.m());
        right_mul_training_adjoint(z0, r);

        VecXc x(d_.nmq());
        Eigen::Map<MatXc> out(x.data(), qn, d_.m());
        out.noalias() = r * f_m_;
        return x;
    }

    // v -> V_A v: the Kronecker identity factor leaves rows alone, the M-axis
    // factor is one precomputed M x M multiply.
    VecXc va_apply(const VecXc &v) const
    {
        check_len(v.size(), d_.nmq(), "va_apply");
        const Eigen::Index qn = static_cast<Eigen::Index>(d_.q()) * d_.n();
        const Eigen::Map<const MatXc> xmat(v.data(), qn, d_.m());
        VecXc out(d_.nmq());
        Eigen::Map<MatXc> omat(out.data(), qn, d_.m());
        omat.noalias() = xmat * w_va_;
        return out;
    }

    VecXc va_adjoint_apply(const VecXc &v) const
    {
        check_len(v.size(), d_.nmq(), "va_adjoint_apply");
        const Eigen::Index qn = static_cast<Eigen::Index>(d_.q()) * d_.n();
        const Eigen::Map<const MatXc> xmat(v.data(), qn, d_.m());
        VecXc out(d_.nmq());
        Eigen::Map<MatXc> omat(out.data(), qn, d_.m());
        omat.noalias() = xmat * w_va_.adjoint();
        return out;
    }

  private:
    static void check_len(Eigen::Index got, Eigen::Index want, const char *where)
    {
        if (got != want)
            throw std::invalid_argument(std::string(where) + ": length mismatch");
    }

    // rows of `r` (length M) times E, via zero-padded circular convolution.
    void right_mul_training(const MatXc &r, MatXc &z0) const
    {
        VecXc pad = VecXc::Zero(d_.p), out(d_.p);
        for (Eigen::Index i = 0; i < r.rows(); ++i) {
            pad.head(d_.m()) = r.row(i).transpose();
            circ_.apply(pad, out);
            z0.row(i) = out.transpose();
        }
    }

    // rows of `z0` (length P) times E^H: adjoint convolution, first M taps.
    void right_mul_training_adjoint(const MatXc &z0, MatXc &r) const
    {
        VecXc buf(d_.p), out(d_.p);
        for (Eigen::Index i = 0; i < z0.rows(); ++i) {
            buf = z0.row(i).transpose();
            circ_.apply_adjoint(buf, out);
            r.row(i) = out.head(d_.m()).transpose();
        }
    }

    OperatorDims d_;
    TrainingMatrix tr_;
    CirculantMultiplier circ_;
    MatXc f_n_, f_m_, f_q_;
    MatXc w_va_; // U_E^T F_M / sqrt(M)
    VecXd s_sq_;
};

// x = V_A Diag(weights) V_A^H v with weights aligned to the s^2 layout.
// Shared by every estimator that filters in the operator's eigenbasis: ridge
// and LMMSE solutions are elementwise there.
inline VecXc eigenbasis_filter(const StructuredOperator &op, const VecXc &v,
                               const VecXd &weights)
{
    if (weights.size() != v.size())
        throw std::invalid_argument("eigenbasis_filter: weight length mismatch");
    VecXc c = op.va_adjoint_apply(v);
    c.array() *= weights.array().cast<cplx>();
    return op.va_apply(c);
}

// Dense materialization for oracle comparisons on small dimensions.
inline MatXc dense_operator(const StructuredOperator &op)
{
    const MatXc left = (op.f_m().adjoint() * op.training().e).transpose();
    const MatXc right = kron(op.f_q().conjugate(), op.f_n());
    return kron(left, right);
}

} // namespace riscade

#endif
