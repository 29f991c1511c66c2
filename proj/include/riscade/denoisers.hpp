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

#ifndef riscade_denoisers_H
#define riscade_denoisers_H

#include "math_util.hpp"
#include "quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace riscade {

struct PosteriorMoments
{
    cplx mean{0.0, 0.0};
    double variance = 0.0;
};

// Spike at zero plus a mixture of circularly symmetric complex Gaussians.
struct GmPrior
{
    struct Component
    {
        double weight = 0.0;
        cplx mean{0.0, 0.0};
        double var = 0.0;
    };

    double lambda0 = 0.0;
    std::vector<Component> components;

    double second_moment() const
    {
        double s = 0.0;
        for (const Component &c : components)
            s += c.weight * (std::norm(c.mean) + c.var);
        return s;
    }
};

// Zero-mean sparse prior with `support` expected nonzeros out of `dim` and a
// given total second moment. Multiple components spread their variances
// geometrically around the matched value while preserving the moment.
inline GmPrior make_sparse_prior(Eigen::Index dim, double support, double second_moment,
                                 int n_components = 1)
{
    if (support <= 0.0 || support >= static_cast<double>(dim))
        throw std::invalid_argument("make_sparse_prior: support must be in (0, dim)");
    GmPrior prior;
    prior.lambda0 = 1.0 - support / static_cast<double>(dim);
    const double on_weight = 1.0 - prior.lambda0;
    const double rho = second_moment / support;
    const double spread = 4.0;
    double mean_var = 0.0;
    for (int i = 0; i < n_components; ++i)
        mean_var += std::pow(spread, i - (n_components - 1) / 2.0);
    mean_var /= n_components;
    for (int i = 0; i < n_components; ++i) {
        GmPrior::Component c;
        c.weight = on_weight / n_components;
        c.var = rho * std::pow(spread, i - (n_components - 1) / 2.0) / mean_var;
        prior.components.push_back(c);
    }
    return prior;
}

// Posterior mean and variance of x under the spike-plus-mixture prior given
// r = x + CN(0, nu_r). Per-component conjugacy with log-domain responsibilities.
inline PosteriorMoments gm_denoise(cplx r, double nu_r, const GmPrior &prior)
{
    if (!(nu_r > 0.0))
        throw std::invalid_argument("gm_denoise: nu_r must be > 0");
    if (prior.lambda0 >= 1.0)
        return {cplx(0.0, 0.0), 0.0};

    const std::size_t k = prior.components.size();
    // log evidence of each hypothesis, spike last; the common -log(pi) drops.
    double log_w[17];
    cplx m[16];
    double v[16];
    if (k > 16)
        throw std::invalid_argument("gm_denoise: too many mixture components");
    double max_log = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
        const GmPrior::Component &c = prior.components[i];
        const double s = c.var + nu_r;
        log_w[i] = std::log(c.weight) - std::norm(r - c.mean) / s - std::log(s);
        m[i] = (c.var * r + nu_r * c.mean) / s;
        v[i] = c.var * nu_r / s;
        max_log = std::max(max_log, log_w[i]);
    }
    std::size_t total = k;
    if (prior.lambda0 > 0.0) {
        log_w[k] = std::log(prior.lambda0) - std::norm(r) / nu_r - std::log(nu_r);
        max_log = std::max(max_log, log_w[k]);
        ++total;
    }

    double norm_sum = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
        log_w[i] = std::exp(log_w[i] - max_log);
        norm_sum += log_w[i];
    }

    PosteriorMoments out;
    double second = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double pi_i = log_w[i] / norm_sum;
        out.mean += pi_i * m[i];
        second += pi_i * (v[i] + std::norm(m[i]));
    }
    out.variance = std::max(second - std::norm(out.mean), 0.0);
    return out;
}

namespace detail {

// q1 = (phi(a) - phi(b)) / Z and q2 = (a phi(a) - b phi(b)) / Z for the
// standard normal restricted to [a, b], stable in far tails through erfcx
// ratios. b may be +inf, a may be -inf.
struct TailRatios
{
    double q1;
    double q2;
};

inline TailRatios interval_ratios_right(double a, double b)
{
    // 0 <= a < b. Factor exp(-a^2/2) out of numerator and denominator.
    const double d = std::isinf(b) ? std::numeric_limits<double>::infinity()
                                   : 0.5 * (b - a) * (b + a);
    const double e_d = std::isinf(b) ? 0.0 : std::exp(-d);
    const double ea = erfcx_pos(a * inv_sqrt2);
    const double eb = std::isinf(b) ? 0.0 : erfcx_pos(b * inv_sqrt2) * e_d;
    const double denom = ea - eb;
    const double c = 2.0 * inv_sqrt_2pi / denom;
    TailRatios r;
    r.q1 = c * (-std::expm1(-d));
    r.q2 = c * (a - (std::isinf(b) ? 0.0 : b * e_d));
    return r;
}

inline TailRatios interval_ratios(double a, double b)
{
    if (a >= 0.0)
        return interval_ratios_right(a, b);
    if (b <= 0.0) {
        TailRatios m = interval_ratios_right(-b, -a);
        return {-m.q1, m.q2};
    }
    // Interval straddles the mode: the mass is well conditioned directly.
    const double z = 0.5 * (std::erf(b * inv_sqrt2) - std::erf(a * inv_sqrt2));
    const double phi_a = std::isinf(a) ? 0.0 : norm_pdf(a);
    const double phi_b = std::isinf(b) ? 0.0 : norm_pdf(b);
    const double a_phi = std::isinf(a) ? 0.0 : a * phi_a;
    const double b_phi = std::isinf(b) ? 0.0 : b * phi_b;
    return {(phi_a - phi_b) / z, (a_phi - b_phi) / z};
}

// Moments of X ~ N(m0, var_x) given that X + N(0, var_n) landed in [lo, hi).
struct RealMoments
{
    double mean;
    double var;
};

inline RealMoments interval_posterior(double lo, double hi, double m0, double var_x,
                                      double var_n)
{
    const double s2 = var_x + var_n;
    const double s = std::sqrt(s2);
    const double a = std::isinf(lo) ? lo : (lo - m0) / s;
    const double b = std::isinf(hi) ? hi : (hi - m0) / s;
    const TailRatios r = interval_ratios(a, b);
    RealMoments out;
    out.mean = m0 + (var_x / s) * r.q1;
    out.var = var_x + (var_x * var_x / s2) * (r.q2 - r.q1 * r.q1);
    out.var = std::max(out.var, 0.0);
    return out;
}

} // namespace detail

// Posterior moments of z given that the quantizer observed y's bins, with
// z ~ CN(p_hat, nu_p) and additive noise CN(0, noise_var) ahead of the ADC.
// Re and Im are independent; each is a Gaussian conditioned on a noisy copy
// landing in an interval. The infinite-resolution ADC reduces to AWGN
// conjugacy.
inline PosteriorMoments quantized_output_denoise(const QuantizedSample &y, cplx p_hat,
                                                 double nu_p, double noise_var,
                                                 const QuantizerSpec &spec)
{
    if (!(nu_p > 0.0))
        throw std::invalid_argument("quantized_output_denoise: nu_p must be > 0");

    if (spec.infinite()) {
        if (noise_var <= 0.0)
            return {y.value, 0.0};
        const double s = nu_p + noise_var;
        return {(nu_p * y.value + noise_var * p_hat) / s, nu_p * noise_var / s};
    }

    const auto [lo_re, hi_re] = bin_bounds(spec, y.bin_re);
    const auto [lo_im, hi_im] = bin_bounds(spec, y.bin_im);
    const detail::RealMoments re =
        detail::interval_posterior(lo_re, hi_re, p_hat.real(), nu_p / 2, noise_var / 2);
    const detail::RealMoments im =
        detail::interval_posterior(lo_im, hi_im, p_hat.imag(), nu_p / 2, noise_var / 2);
    return {cplx(re.mean, im.mean), re.var + im.var};
}

} // namespace riscade

#endif
