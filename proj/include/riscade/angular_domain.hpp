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

#ifndef riscade_angular_domain_H
#define riscade_angular_domain_H

#include "channel_model.hpp"
#include "dft_ops.hpp"

#include <stdexcept>
#include <vector>

namespace riscade {

// 2-D DFT dictionary F = U_{dim1} kron U_{dim2}, unnormalized: F^H F = dim*I.
struct DftDictionary
{
    int dim1 = 1;
    int dim2 = 1;
    MatXc u1;     // dim1 x dim1
    MatXc u2;     // dim2 x dim2
    MatXc matrix; // (dim1*dim2) square Kronecker product

    int dim() const { return dim1 * dim2; }
};

inline DftDictionary build_dictionary(int dim1, int dim2)
{
    if (dim1 < 1 || dim2 < 1)
        throw std::invalid_argument("build_dictionary: dims must be >= 1");
    DftDictionary d;
    d.dim1 = dim1;
    d.dim2 = dim2;
    d.u1 = dft_matrix(dim1);
    d.u2 = dft_matrix(dim2);
    d.matrix = kron(d.u1, d.u2);
    return d;
}

// Column-wise Khatri-Rao product: out[:,m] = a[:,m] kron b[:,m].
inline MatXc khatri_rao(const MatXc &a, const MatXc &b)
{
    if (a.cols() != b.cols())
        throw std::invalid_argument("khatri_rao: column counts differ");
    MatXc out(a.rows() * b.rows(), a.cols());
    for (Eigen::Index m = 0; m < a.cols(); ++m)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            out.col(m).segment(i * b.rows(), b.rows()) = a(i, m) * b.col(m);
    return out;
}

// Partition of the M^2 rows of F_M^T (Khatri-Rao) F_M^H into the M classes of
// identical rows. Row n = a*M + b, with a and b decomposed over (m1, m2),
// equals the first-block row indexed by the component-wise difference
// (b1-a1 mod m1, b2-a2 mod m2); rows n < M are their own representatives.
struct CompressionMap
{
    int m1 = 1;
    int m2 = 1;
    std::vector<int> row_of;            // length M^2
    std::vector<std::vector<int>> sets; // S_i for i = 0..M-1

    int dim() const { return m1 * m2; }
};

inline CompressionMap build_compression_map(int m1, int m2)
{
    if (m1 < 1 || m2 < 1)
        throw std::invalid_argument("build_compression_map: dims must be >= 1");
    CompressionMap map;
    map.m1 = m1;
    map.m2 = m2;
    const int m = m1 * m2;
    map.row_of.resize(static_cast<std::size_t>(m) * m);
    map.sets.assign(m, {});
    for (int a = 0; a < m; ++a) {
        const int a1 = a / m2, a2 = a % m2;
        for (int b = 0; b < m; ++b) {
            const int b1 = b / m2, b2 = b % m2;
            const int c1 = ((b1 - a1) % m1 + m1) % m1;
            const int c2 = ((b2 - a2) % m2 + m2) % m2;
            const int rep = c2 + c1 * m2;
            const int n = a * m + b;
            map.row_of[n] = rep;
            map.sets[rep].push_back(n);
        }
    }

    // Cross-check the index arithmetic against literal row equality of the
    // Khatri-Rao product while that stays cheap.
    if (m <= 64) {
        const MatXc f = build_dictionary(m1, m2).matrix;
        const MatXc kr = khatri_rao(f.transpose(), f.adjoint());
        for (int n = 0; n < m * m; ++n) {
            const double diff =
                (kr.row(n) - kr.row(map.row_of[n])).cwiseAbs().maxCoeff();
            if (diff > 1e-9)
                throw std::logic_error("build_compression_map: index arithmetic "
                                       "disagrees with literal row comparison");
        }
    }
    return map;
}

// Compressed angular unknown, (QN) x M.
struct CompressedAngularMatrix
{
    MatXc lambda;
};

// Column-sum the Kronecker sparse matrix over each identical-row class:
// lambda[:,i] = sum_{n in S_i} kron_sparse[:,n].
inline CompressedAngularMatrix compress(const MatXc &kron_sparse, const CompressionMap &map)
{
    const int m = map.dim();
    if (kron_sparse.cols() != static_cast<Eigen::Index>(m) * m)
        throw std::invalid_argument("compress: column count must equal M^2");
    CompressedAngularMatrix out;
    out.lambda = MatXc::Zero(kron_sparse.rows(), m);
    for (int i = 0; i < m; ++i)
        for (int n : map.sets[i])
            out.lambda.col(i) += kron_sparse.col(n);
    return out;
}

namespace detail {

// (A kron B) * mat, column by column through vec(B X A^T).
inline MatXc kron_apply_left(const MatXc &a, const MatXc &b, const MatXc &mat)
{
    const Eigen::Index rows_b = b.rows(), cols_b = b.cols(), cols_a = a.cols();
    MatXc out(a.rows() * rows_b, mat.cols());
    for (Eigen::Index c = 0; c < mat.cols(); ++c) {
        const Eigen::Map<const MatXc> x(mat.col(c).data(), cols_b, cols_a);
        Eigen::Map<MatXc> y(out.col(c).data(), rows_b, a.rows());
        y.noalias() = b * x * a.transpose();
    }
    return out;
}

} // namespace detail

// Virtual angular domain coefficients: H~_br = F_N^H H_br F_M / (N*M) and
// H~_ru = F_M^H H_ru F_Q / (M*Q), the exact inverses of the dictionary
// expansion under the unnormalized-DFT convention.
inline std::pair<MatXc, MatXc> angular_decompose(const ChannelPair &pair,
                                                 const DftDictionary &f_n,
                                                 const DftDictionary &f_m,
                                                 const DftDictionary &f_q)
{
    const double nm = static_cast<double>(f_n.dim()) * f_m.dim();
    const double mq = static_cast<double>(f_m.dim()) * f_q.dim();
    MatXc h_br_tilde = f_n.matrix.adjoint() * pair.h_br * f_m.matrix / nm;
    MatXc h_ru_tilde = f_m.matrix.adjoint() * pair.h_ru * f_q.matrix / mq;
    return {std::move(h_br_tilde), std::move(h_ru_tilde)};
}

// G = (F_Q^* kron F_N) Lambda F_M^H; the compressed model's exact channel map.
inline CascadedChannel reconstruct_cascaded(const CompressedAngularMatrix &lambda,
                                            const DftDictionary &f_n,
                                            const DftDictionary &f_m,
                                            const DftDictionary &f_q)
{
    CascadedChannel out;
    out.g = detail::kron_apply_left(f_q.matrix.conjugate(), f_n.matrix,
                                    lambda.lambda * f_m.matrix.adjoint());
    return out;
}

// Exact inverse of reconstruct_cascaded: Lambda = (F_Q^T kron F_N^H) G F_M / (NQM).
// Because the compressed model is a complete (scaled-unitary) basis change,
// this is also the least-squares projection of any cascaded channel.
inline CompressedAngularMatrix lambda_from_cascaded(const CascadedChannel &chan,
                                                    const DftDictionary &f_n,
                                                    const DftDictionary &f_m,
                                                    const DftDictionary &f_q)
{
    const double nqm = static_cast<double>(f_n.dim()) * f_q.dim() * f_m.dim();
    CompressedAngularMatrix out;
    out.lambda = detail::kron_apply_left(f_q.matrix.transpose(), f_n.matrix.adjoint(),
                                         chan.g * f_m.matrix) /
                 nqm;
    return out;
}

} // namespace riscade

#endif
