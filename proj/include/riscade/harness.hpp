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
// Monte Carlo sweep over (SNR, bits, trial, user) cells. The RNG keying is
// the contract that makes sweeps comparable: the channel stream depends only
// on (trial, user) and the noise stream only on (trial, user, snr value), so
// every ADC resolution at a given SNR sees the same analog measurement and
// NMSE gaps between resolutions are paired, not resampled. Because the keys
// are values rather than list positions, a cell's records do not change when
// other sweep axes are added or reordered.

#ifndef riscade_harness_H
#define riscade_harness_H

#include "angular_domain.hpp"
#include "baselines.hpp"
#include "channel_model.hpp"
#include "config.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <ostream>

namespace riscade {

namespace stream_tag {
inline constexpr std::uint64_t training = 0x747261696eULL; // per trial
inline constexpr std::uint64_t channel = 0x6368616eULL;    // per (trial, user)
inline constexpr std::uint64_t noise = 0x6e6f697365ULL;    // per (trial, user, snr)

// SNR values enter the noise stream key by bit pattern so that equal targets
// share a stream no matter where they sit in the sweep list.
inline std::uint64_t snr_key(double snr_db)
{
    return std::bit_cast<std::uint64_t>(snr_db);
}
} // namespace stream_tag

// One estimator run on one sweep cell.
struct ExperimentRecord
{
    double snr_db = 0.0;
    int bits = kInfiniteBits;
    int trial = 0;
    int user = 0;
    std::string algo; // "vamp" or "ls"
    double nmse_db = 0.0;
    int iters = 0;
    double seconds = 0.0;
    bool converged = false;
};

struct SweepResult
{
    std::vector<ExperimentRecord> records;
    bool any_abort = false;
};

// Noise power that realizes the target SNR for this noiseless measurement
// realization: ||z||^2 / (PTN * 10^(snr/10)). An infinite target SNR yields
// zero noise.
inline double calibrate_noise(const VecXc &z, double snr_db)
{
    const double energy = z.squaredNorm();
    if (!(energy > 0.0))
        throw std::invalid_argument("calibrate_noise: measurement has zero energy");
    return energy / (static_cast<double>(z.size()) * std::pow(10.0, snr_db / 10.0));
}

namespace detail {

inline ChannelModelConfig channel_config(const SystemConfig &cfg)
{
    ChannelModelConfig c;
    c.bs = UpaGeometry{cfg.n1, cfg.n2};
    c.ris = UpaGeometry{cfg.m1, cfg.m2};
    c.user = UpaGeometry{cfg.q1, cfg.q2};
    c.paths_br = cfg.l;
    c.paths_ru = cfg.j;
    c.normalize_gains = cfg.normalize_gains;
    c.on_grid = cfg.on_grid;
    return c;
}

// Prior derived from the synthesis model unless overridden: expected support
// L*J*Q entries (each path pair lights one BS/user angular row across Q
// columns of the RIS axis after compression), expected energy L*J for unit
// gains or 1 when gains are normalized by the path counts.
inline GmPrior resolve_prior(const SystemConfig &cfg)
{
    const double dim = static_cast<double>(cfg.dims().nmq());
    double support = cfg.prior_sparsity;
    if (support < 0.0)
        support = static_cast<double>(cfg.l) * cfg.j * cfg.q1 * cfg.q2;
    double moment = cfg.prior_moment;
    if (moment < 0.0)
        moment = cfg.normalize_gains ? 1.0 : static_cast<double>(cfg.l) * cfg.j;
    if (!(support > 0.0 && support < dim))
        throw ConfigError("config: derived prior support must be in (0, n*m*q); "
                          "set prior_sparsity explicitly");
    return make_sparse_prior(static_cast<Eigen::Index>(dim), support, moment,
                             cfg.prior_components);
}

inline double elapsed_seconds(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// NMSE is scored on the reconstructed cascaded channel, the quantity a
// downstream beamformer consumes.
inline double cascaded_nmse_db(const MatXc &lambda_hat, const CascadedChannel &truth,
                               const DftDictionary &f_n, const DftDictionary &f_m,
                               const DftDictionary &f_q)
{
    CompressedAngularMatrix lam;
    lam.lambda = lambda_hat;
    const CascadedChannel rec = reconstruct_cascaded(lam, f_n, f_m, f_q);
    const Eigen::Map<const VecXc> est(rec.g.data(), rec.g.size());
    const Eigen::Map<const VecXc> ref(truth.g.data(), truth.g.size());
    return nmse_db(est, ref);
}

} // namespace detail

// Run every (snr, bits, trial, user) cell of the sweep; each cell produces a
// VAMP record and a ridge least-squares record. Solver aborts are recorded
// (converged = false) and the sweep continues; the caller decides the exit
// status from `any_abort`. Records come back sorted by (snr index, bits
// index, trial, user) with the VAMP row before the LS row.
inline SweepResult run_sweep(const SystemConfig &cfg)
{
    validate_config(cfg);
    const OperatorDims dims = cfg.dims();
    const DftDictionary f_n = build_dictionary(cfg.n1, cfg.n2);
    const DftDictionary f_m = build_dictionary(cfg.m1, cfg.m2);
    const DftDictionary f_q = build_dictionary(cfg.q1, cfg.q2);
    const ChannelModelConfig chan_cfg = detail::channel_config(cfg);
    const GmPrior prior = detail::resolve_prior(cfg);
    const Eigen::Index n_z = dims.ptn();

    struct Keyed
    {
        std::array<int, 5> key; // snr idx, bits idx, trial, user, algo rank
        ExperimentRecord rec;
    };
    std::vector<Keyed> rows;
    rows.reserve(static_cast<std::size_t>(cfg.snr_db.size()) * cfg.bits.size() *
                 cfg.trials * cfg.users * 2);
    bool any_abort = false;

    for (int trial = 0; trial < cfg.trials; ++trial) {
        StreamRng train_rng(cfg.seed,
                            {stream_tag::training, static_cast<std::uint64_t>(trial)});
        const StructuredOperator op(
            dims, build_training_matrix(dims.m(), cfg.p, train_rng, cfg.training));

        for (int user = 0; user < cfg.users; ++user) {
            StreamRng chan_rng(cfg.seed, {stream_tag::channel,
                                          static_cast<std::uint64_t>(trial),
                                          static_cast<std::uint64_t>(user)});
            const ChannelPair pair = synthesize_channels(chan_cfg, chan_rng);
            const CascadedChannel truth = cascade(pair);
            const CompressedAngularMatrix lambda_true =
                lambda_from_cascaded(truth, f_n, f_m, f_q);
            const Eigen::Map<const VecXc> x_true(lambda_true.lambda.data(),
                                                 lambda_true.lambda.size());
            const VecXc z = op.forward(x_true);
            const double sig_power = z.squaredNorm() / static_cast<double>(n_z);

            for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
                const double noise_var = calibrate_noise(z, cfg.snr_db[si]);
                StreamRng noise_rng(cfg.seed, {stream_tag::noise,
                                               static_cast<std::uint64_t>(trial),
                                               static_cast<std::uint64_t>(user),
                                               stream_tag::snr_key(cfg.snr_db[si])});
                VecXc u = z;
                if (noise_var > 0.0) {
                    const double scale = std::sqrt(noise_var);
                    for (Eigen::Index i = 0; i < n_z; ++i)
                        u(i) += scale * noise_rng.cnormal();
                }

                for (std::size_t bi = 0; bi < cfg.bits.size(); ++bi) {
                    const int bits = cfg.bits[bi];
                    const QuantizerSpec spec =
                        bits == kInfiniteBits
                            ? QuantizerSpec{}
                            : design_quantizer(bits, sig_power + noise_var);
                    const std::vector<QuantizedSample> y = quantize(spec, u);

                    ExperimentRecord vr;
                    vr.snr_db = cfg.snr_db[si];
                    vr.bits = bits;
                    vr.trial = trial;
                    vr.user = user;
                    vr.algo = "vamp";
                    const auto v0 = std::chrono::steady_clock::now();
                    const VampResult vamp =
                        vamp_estimate(y, op, spec, prior, noise_var, cfg.solver);
                    vr.seconds = detail::elapsed_seconds(v0);
                    vr.nmse_db =
                        detail::cascaded_nmse_db(vamp.lambda_hat, truth, f_n, f_m, f_q);
                    vr.iters = vamp.iters;
                    vr.converged = vamp.converged && !vamp.aborted;
                    any_abort = any_abort || vamp.aborted;
                    rows.push_back({{static_cast<int>(si), static_cast<int>(bi), trial,
                                     user, 0},
                                    std::move(vr)});

                    ExperimentRecord lr;
                    lr.snr_db = cfg.snr_db[si];
                    lr.bits = bits;
                    lr.trial = trial;
                    lr.user = user;
                    lr.algo = "ls";
                    VecXc y_lin(n_z);
                    for (Eigen::Index i = 0; i < n_z; ++i)
                        y_lin(i) = y[static_cast<std::size_t>(i)].value;
                    const double ridge = cfg.ridge >= 0.0 ? cfg.ridge : noise_var;
                    const auto l0 = std::chrono::steady_clock::now();
                    const LsSolution ls = ls_estimate(y_lin, op, ridge);
                    lr.seconds = detail::elapsed_seconds(l0);
                    lr.nmse_db =
                        detail::cascaded_nmse_db(ls.lambda_hat, truth, f_n, f_m, f_q);
                    lr.iters = 0;
                    lr.converged = true;
                    rows.push_back({{static_cast<int>(si), static_cast<int>(bi), trial,
                                     user, 1},
                                    std::move(lr)});
                }
            }
        }
    }

    std::sort(rows.begin(), rows.end(),
              [](const Keyed &a, const Keyed &b) { return a.key < b.key; });
    SweepResult out;
    out.any_abort = any_abort;
    out.records.reserve(rows.size());
    for (Keyed &k : rows)
        out.records.push_back(std::move(k.rec));
    return out;
}

namespace detail {

inline std::string format_double(double v, const char *fmt)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

} // namespace detail

inline std::string bits_label(int bits)
{
    return bits == kInfiniteBits ? "inf" : std::to_string(bits);
}

// Fixed column order. All columns except `seconds` are deterministic for a
// given config; `seconds` is wall time and varies run to run.
inline void write_csv(std::ostream &os, const SweepResult &result)
{
    os << "snr_db,bits,trial,user,algo,nmse_db,iters,seconds,converged\n";
    for (const ExperimentRecord &r : result.records) {
        os << detail::format_double(r.snr_db, "%.10g") << ',' << bits_label(r.bits)
           << ',' << r.trial << ',' << r.user << ',' << r.algo << ','
           << detail::format_double(r.nmse_db, "%.6f") << ',' << r.iters << ','
           << detail::format_double(r.seconds, "%.6f") << ',' << (r.converged ? 1 : 0)
           << '\n';
    }
}

// Single-cell diagnostic: trial 0, user 0, first SNR, first bits entry, with
// the per-iteration message variances and the NMSE against the known truth.
// Returns the process exit code (0 ok, 3 solver abort).
inline int run_trace(const SystemConfig &cfg, std::ostream &os)
{
    validate_config(cfg);
    const OperatorDims dims = cfg.dims();
    const DftDictionary f_n = build_dictionary(cfg.n1, cfg.n2);
    const DftDictionary f_m = build_dictionary(cfg.m1, cfg.m2);
    const DftDictionary f_q = build_dictionary(cfg.q1, cfg.q2);
    const GmPrior prior = detail::resolve_prior(cfg);

    StreamRng train_rng(cfg.seed, {stream_tag::training, 0});
    const StructuredOperator op(dims,
                                build_training_matrix(dims.m(), cfg.p, train_rng,
                                                      cfg.training));
    StreamRng chan_rng(cfg.seed, {stream_tag::channel, 0, 0});
    const ChannelPair pair = synthesize_channels(detail::channel_config(cfg), chan_rng);
    const CascadedChannel truth = cascade(pair);
    const CompressedAngularMatrix lambda_true = lambda_from_cascaded(truth, f_n, f_m, f_q);
    const Eigen::Map<const VecXc> x_true(lambda_true.lambda.data(),
                                         lambda_true.lambda.size());
    const VecXc z = op.forward(x_true);

    const double snr = cfg.snr_db.front();
    const int bits = cfg.bits.front();
    const double noise_var = calibrate_noise(z, snr);
    StreamRng noise_rng(cfg.seed, {stream_tag::noise, 0, 0, stream_tag::snr_key(snr)});
    VecXc u = z;
    if (noise_var > 0.0) {
        const double scale = std::sqrt(noise_var);
        for (Eigen::Index i = 0; i < z.size(); ++i)
            u(i) += scale * noise_rng.cnormal();
    }
    const double sig_power = z.squaredNorm() / static_cast<double>(z.size());
    const QuantizerSpec spec = bits == kInfiniteBits
                                   ? QuantizerSpec{}
                                   : design_quantizer(bits, sig_power + noise_var);

    const VampResult res = vamp_estimate(quantize(spec, u), op, spec, prior, noise_var,
                                         cfg.solver, &lambda_true.lambda);

    os << "# snr_db=" << detail::format_double(snr, "%.10g") << " bits="
       << bits_label(bits) << " noise_var=" << detail::format_double(noise_var, "%.6g")
       << '\n';
    os << "iter,nu_x1,nu_x2,nu_p1,nu_p2,alpha1,alpha2,beta1,beta2,nmse_db,clamped\n";
    for (const VampTraceRow &row : res.trace) {
        os << row.iter << ',' << detail::format_double(row.nu_x1, "%.9g") << ','
           << detail::format_double(row.nu_x2, "%.9g") << ','
           << detail::format_double(row.nu_p1, "%.9g") << ','
           << detail::format_double(row.nu_p2, "%.9g") << ','
           << detail::format_double(row.alpha1, "%.9g") << ','
           << detail::format_double(row.alpha2, "%.9g") << ','
           << detail::format_double(row.beta1, "%.9g") << ','
           << detail::format_double(row.beta2, "%.9g") << ','
           << detail::format_double(row.nmse_lambda_db, "%.6f") << ','
           << (row.clamped ? 1 : 0) << '\n';
    }
    if (res.aborted) {
        os << "# aborted at step " << res.abort_step << '\n';
        return 3;
    }
    os << "# " << (res.converged ? "converged" : "iteration limit") << " after "
       << res.iters << " iterations, final nmse_db="
       << detail::format_double(
              detail::cascaded_nmse_db(res.lambda_hat,
                                       truth, f_n, f_m, f_q),
              "%.6f")
       << '\n';
    return 0;
}

// Built-in consistency battery for installed binaries: exercises the
// operator algebra, quantizer, denoisers, least squares, and an end-to-end
// recovery without any test framework. Returns 0 when every check passes.
inline int run_selftest(std::ostream &os)
{
    int failures = 0;
    const auto check = [&](const char *name, bool ok, double detail_value) {
        os << (ok ? "PASS " : "FAIL ") << name;
        if (!ok)
            os << " (" << detail::format_double(detail_value, "%.3e") << ")";
        os << '\n';
        failures += ok ? 0 : 1;
    };

    {
        const DftDictionary d = build_dictionary(3, 2);
        const MatXc gram = d.matrix.adjoint() * d.matrix;
        const double err =
            (gram - 6.0 * MatXc::Identity(6, 6)).cwiseAbs().maxCoeff();
        check("dft_dictionary_scaled_unitary", err < 1e-12, err);
    }

    {
        OperatorDims dims;
        dims.n1 = 2;
        dims.n2 = 2;
        dims.m1 = 2;
        dims.m2 = 1;
        dims.q1 = 2;
        dims.q2 = 1;
        dims.p = 6;
        StreamRng rng(0x5e1f7e57, {1});
        const StructuredOperator op(dims,
                                    build_training_matrix(dims.m(), dims.p, rng));
        const MatXc dense = dense_operator(op);
        double fwd_err = 0.0, adj_err = 0.0;
        for (int rep = 0; rep < 20; ++rep) {
            VecXc x(dims.nmq()), w(dims.ptn());
            for (Eigen::Index i = 0; i < x.size(); ++i)
                x(i) = rng.cnormal();
            for (Eigen::Index i = 0; i < w.size(); ++i)
                w(i) = rng.cnormal();
            fwd_err = std::max(fwd_err, (op.forward(x) - dense * x).norm() /
                                            (dense * x).norm());
            adj_err = std::max(adj_err, (op.adjoint_times(w) - dense.adjoint() * w)
                                                .norm() /
                                            (dense.adjoint() * w).norm());
        }
        check("operator_matches_dense_forward", fwd_err < 1e-10, fwd_err);
        check("operator_matches_dense_adjoint", adj_err < 1e-10, adj_err);
    }

    {
        const QuantizerSpec spec = design_quantizer(3, 2.0);
        bool ok = true;
        double worst = 0.0;
        StreamRng rng(0x5e1f7e57, {2});
        for (int rep = 0; rep < 200; ++rep) {
            const cplx zv(rng.normal(), rng.normal());
            const QuantizedSample s = quantize(spec, zv);
            const QuantizedSample again = quantize(spec, s.value);
            ok = ok && again.bin_re == s.bin_re && again.bin_im == s.bin_im;
            const auto [lo, hi] = bin_bounds(spec, s.bin_re);
            if (std::isfinite(lo) && std::isfinite(hi)) {
                ok = ok && zv.real() >= lo && zv.real() < hi;
                worst = std::max(worst, std::abs(s.value.real() - 0.5 * (lo + hi)));
            }
        }
        check("quantizer_bins_consistent", ok && worst < 1e-12, worst);
    }

    {
        GmPrior prior;
        prior.lambda0 = 0.0;
        prior.components.push_back({1.0, cplx(0.0, 0.0), 1.5});
        const cplx r(0.7, -0.3);
        const double nu_r = 0.4;
        const PosteriorMoments post = gm_denoise(r, nu_r, prior);
        const double g = 1.5 / (1.5 + nu_r);
        const double mean_err = std::abs(post.mean - g * r);
        const double var_err = std::abs(post.variance - g * nu_r);
        check("gm_denoise_gaussian_conjugacy", mean_err < 1e-12 && var_err < 1e-12,
              mean_err + var_err);
    }

    {
        const QuantizerSpec spec = design_quantizer(1, 2.0);
        const QuantizedSample pos = quantize(spec, cplx(0.9, 0.9));
        const PosteriorMoments post =
            quantized_output_denoise(pos, cplx(0.0, 0.0), 1.0, 0.1, spec);
        check("one_bit_denoiser_sign", post.mean.real() > 0.0 && post.mean.imag() > 0.0,
              post.mean.real());
    }

    {
        OperatorDims dims;
        dims.n1 = 2;
        dims.n2 = 1;
        dims.m1 = 2;
        dims.m2 = 2;
        dims.q1 = 1;
        dims.q2 = 1;
        dims.p = 8;
        StreamRng rng(0x5e1f7e57, {3});
        const StructuredOperator op(dims,
                                    build_training_matrix(dims.m(), dims.p, rng));
        const MatXc dense = dense_operator(op);
        VecXc y(dims.ptn());
        for (Eigen::Index i = 0; i < y.size(); ++i)
            y(i) = rng.cnormal();
        const double ridge = 0.05;
        const MatXc normal = dense.adjoint() * dense +
                             ridge * MatXc::Identity(dims.nmq(), dims.nmq());
        const VecXc ref = normal.ldlt().solve(dense.adjoint() * y);
        const LsSolution ls = ls_estimate(y, op, ridge);
        const Eigen::Map<const VecXc> got(ls.lambda_hat.data(), ls.lambda_hat.size());
        const double err = (got - ref).norm() / ref.norm();
        check("least_squares_matches_dense_ridge", err < 1e-8, err);
    }

    {
        SystemConfig cfg;
        cfg.n1 = 2;
        cfg.n2 = 2;
        cfg.m1 = 2;
        cfg.m2 = 2;
        cfg.q1 = 1;
        cfg.q2 = 1;
        cfg.t = 1;
        cfg.p = 16;
        cfg.l = 1;
        cfg.j = 1;
        cfg.on_grid = true;
        cfg.bits = {kInfiniteBits};
        cfg.snr_db = {30.0};
        cfg.trials = 1;
        cfg.seed = 7;
        cfg.solver.max_iters = 30;
        const SweepResult sweep = run_sweep(cfg);
        const bool ok = !sweep.any_abort && sweep.records.size() == 2 &&
                        sweep.records[0].nmse_db < -30.0;
        check("on_grid_recovery_end_to_end", ok,
              sweep.records.empty() ? 0.0 : sweep.records[0].nmse_db);
    }

    os << (failures == 0 ? "selftest passed" : "selftest FAILED") << '\n';
    return failures == 0 ? 0 : 1;
}

} // namespace riscade

#endif
