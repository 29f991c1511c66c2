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

#ifndef riscade_channel_model_H
#define riscade_channel_model_H

#include "common.hpp"
#include "rng.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace riscade {

// Uniform planar array, k1 vertical by k2 horizontal elements.
struct UpaGeometry
{
    int k1 = 1;
    int k2 = 1;
    double spacing_over_wavelength = 0.5;

    int size() const { return k1 * k2; }
};

// One propagation path: complex gain, arrival angle pair, departure angle
// pair, and the spatial frequencies they induce. The frequencies are the
// authoritative fields for reconstruction; in on-grid synthesis they are
// snapped to the DFT grid and no longer follow exactly from the angles.
struct PathParams
{
    cplx gain{0.0, 0.0};
    double zenith = 0.0;      // arrival, [-pi/2, pi/2)
    double azimuth = 0.0;     // arrival, [-pi, pi)
    double dep_zenith = 0.0;  // departure, [-pi/2, pi/2)
    double dep_azimuth = 0.0; // departure, [-pi, pi)
    double z_arr = 0.0;
    double x_arr = 0.0;
    double z_dep = 0.0;
    double x_dep = 0.0;
};

struct ChannelPair
{
    MatXc h_br; // N x M, RIS to BS
    MatXc h_ru; // M x Q, user to RIS
    std::vector<PathParams> paths_br;
    std::vector<PathParams> paths_ru;
};

// Cascaded channel G = H_ru^T (column-wise Khatri-Rao) H_br, size (QN) x M.
struct CascadedChannel
{
    MatXc g;
};

struct ChannelModelConfig
{
    UpaGeometry bs;   // N1 x N2
    UpaGeometry ris;  // M1 x M2
    UpaGeometry user; // Q1 x Q2
    int paths_br = 4; // L
    int paths_ru = 4; // J
    bool normalize_gains = false; // scale gains by 1/sqrt(path count)
    bool on_grid = false;         // snap spatial frequencies to the DFT grid
};

// a_k(u)[n] = exp(-j*2*pi*u*n), n = 0..k-1.
inline VecXc uniform_steering(int k, double u)
{
    VecXc a(k);
    for (int n = 0; n < k; ++n)
        a(n) = cis_neg(u * n);
    return a;
}

// a_{k1}(z) kron a_{k2}(x); entry n2 + n1*k2 = exp(-j*2*pi*(z*n1 + x*n2)).
inline VecXc steering_vector(const UpaGeometry &geom, double z, double x)
{
    const VecXc a1 = uniform_steering(geom.k1, z);
    const VecXc a2 = uniform_steering(geom.k2, x);
    VecXc out(geom.size());
    for (int n1 = 0; n1 < geom.k1; ++n1)
        out.segment(static_cast<Eigen::Index>(n1) * geom.k2, geom.k2) = a1(n1) * a2;
    return out;
}

// Spatial frequencies induced by a zenith/azimuth pair:
// z = (d/lambda)*cos(zenith), x = (d/lambda)*sin(zenith)*cos(azimuth).
inline std::pair<double, double> spatial_frequencies(double zenith, double azimuth,
                                                     double spacing_over_wavelength)
{
    const double z = spacing_over_wavelength * std::cos(zenith);
    const double x = spacing_over_wavelength * std::sin(zenith) * std::cos(azimuth);
    return {z, x};
}

namespace detail {

inline double snap_frequency(double u, int k)
{
    return std::round(u * k) / k;
}

inline PathParams draw_path(StreamRng &rng, const UpaGeometry &arrival,
                            const UpaGeometry &departure, bool on_grid)
{
    PathParams p;
    p.zenith = rng.uniform(-pi / 2, pi / 2);
    p.azimuth = rng.uniform(-pi, pi);
    p.dep_zenith = rng.uniform(-pi / 2, pi / 2);
    p.dep_azimuth = rng.uniform(-pi, pi);
    p.gain = rng.cnormal();
    std::tie(p.z_arr, p.x_arr) =
        spatial_frequencies(p.zenith, p.azimuth, arrival.spacing_over_wavelength);
    std::tie(p.z_dep, p.x_dep) =
        spatial_frequencies(p.dep_zenith, p.dep_azimuth, departure.spacing_over_wavelength);
    if (on_grid) {
        p.z_arr = snap_frequency(p.z_arr, arrival.k1);
        p.x_arr = snap_frequency(p.x_arr, arrival.k2);
        p.z_dep = snap_frequency(p.z_dep, departure.k1);
        p.x_dep = snap_frequency(p.x_dep, departure.k2);
    }
    return p;
}

inline MatXc assemble(const std::vector<PathParams> &paths, const UpaGeometry &arrival,
                      const UpaGeometry &departure)
{
    MatXc h = MatXc::Zero(arrival.size(), departure.size());
    for (const PathParams &p : paths) {
        const VecXc a = steering_vector(arrival, p.z_arr, p.x_arr);
        const VecXc d = steering_vector(departure, p.z_dep, p.x_dep);
        h.noalias() += p.gain * a * d.adjoint();
    }
    return h;
}

} // namespace detail

// Draw path parameters and assemble both hops of the cascaded link:
// H_br = sum_l gain_l a_N(arr) a_M(dep)^H and H_ru = sum_j gain_j a_M(arr) a_Q(dep)^H.
inline ChannelPair synthesize_channels(const ChannelModelConfig &cfg, StreamRng &rng)
{
    if (cfg.paths_br < 1 || cfg.paths_ru < 1)
        throw std::invalid_argument("synthesize_channels: path counts must be >= 1");

    ChannelPair pair;
    pair.paths_br.reserve(cfg.paths_br);
    for (int l = 0; l < cfg.paths_br; ++l)
        pair.paths_br.push_back(detail::draw_path(rng, cfg.bs, cfg.ris, cfg.on_grid));
    pair.paths_ru.reserve(cfg.paths_ru);
    for (int j = 0; j < cfg.paths_ru; ++j)
        pair.paths_ru.push_back(detail::draw_path(rng, cfg.ris, cfg.user, cfg.on_grid));

    if (cfg.normalize_gains) {
        for (PathParams &p : pair.paths_br)
            p.gain /= std::sqrt(static_cast<double>(cfg.paths_br));
        for (PathParams &p : pair.paths_ru)
            p.gain /= std::sqrt(static_cast<double>(cfg.paths_ru));
    }

    pair.h_br = detail::assemble(pair.paths_br, cfg.bs, cfg.ris);
    pair.h_ru = detail::assemble(pair.paths_ru, cfg.ris, cfg.user);
    return pair;
}

// g[:,m] = kron(H_ru^T[:,m], H_br[:,m]), i.e. g[q*N+n, m] = H_ru[m,q] * H_br[n,m].
inline CascadedChannel cascade(const ChannelPair &pair)
{
    const Eigen::Index n_bs = pair.h_br.rows();
    const Eigen::Index m_ris = pair.h_br.cols();
    const Eigen::Index q_user = pair.h_ru.cols();
    if (pair.h_ru.rows() != m_ris)
        throw std::invalid_argument("cascade: H_ru rows must match H_br columns");

    CascadedChannel out;
    out.g.resize(q_user * n_bs, m_ris);
    for (Eigen::Index m = 0; m < m_ris; ++m)
        for (Eigen::Index q = 0; q < q_user; ++q)
            out.g.col(m).segment(q * n_bs, n_bs) = pair.h_ru(m, q) * pair.h_br.col(m);
    return out;
}

} // namespace riscade

#endif
