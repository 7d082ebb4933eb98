// SPDX-License-Identifier: Apache-2.0
//
// mmwi: interference statistics for downlink millimeter-wave cellular networks
// Copyright (C) 2026 The mmwi authors
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

#ifndef MMWI_CHANNEL_HPP
#define MMWI_CHANNEL_HPP

#include "mmwi/common.hpp"
#include "mmwi/rng.hpp"
#include "mmwi/topology.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mmwi
{

enum class LinkState
{
    LoS,
    NLoS,
};

inline std::string_view to_string(LinkState s) { return s == LinkState::LoS ? "LoS" : "NLoS"; }

inline LinkState link_state_from_string(std::string_view s)
{
    if (s == "LoS")
        return LinkState::LoS;
    if (s == "NLoS")
        return LinkState::NLoS;
    throw std::invalid_argument("unknown link state '" + std::string(s) + "'");
}

// Large-scale propagation at 28 GHz from New York City measurements.
struct PropagationParams
{
    double carrier_hz = 28e9;
    double reference_distance_m = 1.0;
    double breakpoint_m = 27.0; // LoS probability is 1 up to here
    double los_decay_m = 71.0;
    double exponent_los = 2.1;
    double exponent_nlos = 3.4;
    double shadowing_los_db = 3.6;
    double shadowing_nlos_db = 9.7;
};

inline double los_probability(double d, const PropagationParams &p = {})
{
    if (!(d > 0.0))
        throw std::invalid_argument("los_probability: distance must be positive");
    const double decay = std::exp(-d / p.los_decay_m);
    const double near = std::min(p.breakpoint_m / d, 1.0);
    const double root = near * (1.0 - decay) + decay;
    return root * root;
}

inline LinkState sample_link_state(double d, Rng &rng, const PropagationParams &p = {})
{
    std::bernoulli_distribution los(los_probability(d, p));
    return los(rng) ? LinkState::LoS : LinkState::NLoS;
}

// Free-space loss at the reference distance.
inline double reference_path_loss_db(const PropagationParams &p = {})
{
    return 20.0 * std::log10(4.0 * kPi * p.reference_distance_m / wavelength(p.carrier_hz));
}

// Path loss with the shadowing term supplied by the caller (0 gives the median loss).
inline double path_loss_db(double d, LinkState state, double shadowing_db, const PropagationParams &p = {})
{
    if (!(d >= p.reference_distance_m))
        throw std::invalid_argument("path_loss_db: distance below the reference distance");
    const double n = state == LinkState::LoS ? p.exponent_los : p.exponent_nlos;
    return reference_path_loss_db(p) + 10.0 * n * std::log10(d / p.reference_distance_m) + shadowing_db;
}

inline double path_loss_db(double d, LinkState state, Rng &rng, const PropagationParams &p = {})
{
    if (!(d >= p.reference_distance_m))
        throw std::invalid_argument("path_loss_db: distance below the reference distance");
    const double sigma = state == LinkState::LoS ? p.shadowing_los_db : p.shadowing_nlos_db;
    std::normal_distribution<double> shadow(0.0, sigma);
    return path_loss_db(d, state, shadow(rng), p);
}

// Uniform rows x cols planar array. Element (u, v), u in [0, rows), v in [0, cols),
// sits at flat index u * cols + v.
struct ArrayGeometry
{
    std::size_t rows = 1;
    std::size_t cols = 1;
    double spacing_wl = 0.5; // element spacing in wavelengths
    double wavelength_m = kSpeedOfLight / 28e9;

    std::size_t size() const { return rows * cols; }
    double spacing_m() const { return spacing_wl * wavelength_m; }
    double wavenumber() const { return 2.0 * kPi / wavelength_m; }

    void validate() const
    {
        if (rows == 0 || cols == 0)
            throw std::invalid_argument("array geometry needs at least one row and one column");
        if (!(spacing_wl > 0.0) || !(wavelength_m > 0.0))
            throw std::invalid_argument("array spacing and wavelength must be positive");
    }
};

inline CVector array_response(const ArrayGeometry &geom, double azimuth, double elevation)
{
    geom.validate();
    const double kd = geom.wavenumber() * geom.spacing_m();
    const double along_rows = std::sin(azimuth) * std::sin(elevation);
    const double along_cols = std::cos(elevation);
    CVector a(static_cast<Eigen::Index>(geom.size()));
    for (std::size_t u = 0; u < geom.rows; ++u)
        for (std::size_t v = 0; v < geom.cols; ++v)
        {
            const double phase = kd * (static_cast<double>(u) * along_rows + static_cast<double>(v) * along_cols);
            a(static_cast<Eigen::Index>(u * geom.cols + v)) = std::polar(1.0, phase);
        }
    return a;
}

struct ClusterParams
{
    std::size_t clusters = 4;
    std::size_t subpaths = 7;
    double center_elevation_halfwidth = kPi / 12.0; // cluster elevations within horizon +- this
    double azimuth_spread = 5.0 * kPi / 180.0;      // subpath offsets (Laplacian std), radians
    double elevation_spread = 2.5 * kPi / 180.0;
    bool random_phase = true;
};

// Angles in radians: azimuths in [0, 2pi), elevations in [0, pi] measured from zenith.
struct SubpathAngles
{
    double aoa_azimuth = 0.0;
    double aoa_elevation = kPi / 2.0;
    double aod_azimuth = 0.0;
    double aod_elevation = kPi / 2.0;
    double phase = 0.0;
};

struct ClusterSet
{
    std::size_t clusters = 0;
    std::size_t subpaths = 0;
    std::vector<double> gains;           // one per cluster, sums to 1
    std::vector<SubpathAngles> subpath;  // cluster-major: index c * subpaths + l

    const SubpathAngles &at(std::size_t c, std::size_t l) const { return subpath.at(c * subpaths + l); }
};

inline double wrap_azimuth(double a)
{
    a = std::fmod(a, 2.0 * kPi);
    if (a < 0.0)
        a += 2.0 * kPi;
    if (a >= 2.0 * kPi)
        a = 0.0;
    return a;
}

inline ClusterSet sample_cluster_set(const ClusterParams &params, Rng &rng)
{
    if (params.clusters == 0 || params.subpaths == 0)
        throw std::invalid_argument("sample_cluster_set: need at least one cluster and one subpath");

    std::exponential_distribution<double> expo(1.0);
    std::uniform_real_distribution<double> azimuth(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> elevation(kPi / 2.0 - params.center_elevation_halfwidth,
                                                     kPi / 2.0 + params.center_elevation_halfwidth);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);

    // Laplacian offset with standard deviation `spread` as a difference of exponentials.
    auto laplace = [&](double spread) {
        const double scale = spread / std::sqrt(2.0);
        return scale * (expo(rng) - expo(rng));
    };
    auto clamp_el = [](double e) { return std::clamp(e, 0.0, kPi); };

    ClusterSet cs;
    cs.clusters = params.clusters;
    cs.subpaths = params.subpaths;
    cs.gains.resize(params.clusters);
    double total = 0.0;
    for (auto &g : cs.gains)
    {
        g = expo(rng);
        total += g;
    }
    for (auto &g : cs.gains)
        g /= total;

    cs.subpath.reserve(params.clusters * params.subpaths);
    for (std::size_t c = 0; c < params.clusters; ++c)
    {
        const double aoa_az = azimuth(rng);
        const double aoa_el = elevation(rng);
        const double aod_az = azimuth(rng);
        const double aod_el = elevation(rng);
        for (std::size_t l = 0; l < params.subpaths; ++l)
        {
            SubpathAngles s;
            s.aoa_azimuth = wrap_azimuth(aoa_az + laplace(params.azimuth_spread));
            s.aoa_elevation = clamp_el(aoa_el + laplace(params.elevation_spread));
            s.aod_azimuth = wrap_azimuth(aod_az + laplace(params.azimuth_spread));
            s.aod_elevation = clamp_el(aod_el + laplace(params.elevation_spread));
            s.phase = params.random_phase ? phase(rng) : 0.0;
            cs.subpath.push_back(s);
        }
    }
    return cs;
}

struct ChannelRealization
{
    CMatrix H; // N_ue x M_bs, includes the large-scale amplitude gain
    LinkState state = LinkState::LoS;
    double path_loss_db = 0.0;
    ClusterSet small_scale;
};

// Sum of C*L rank-one terms sqrt(g_c) e^{j psi} a_ue a_bs^H / sqrt(C L), scaled by 10^(-PL/20).
inline ChannelRealization assemble_channel(const ClusterSet &clusters, const ArrayGeometry &bs_geom,
                                           const ArrayGeometry &ue_geom, double path_loss_db,
                                           LinkState state = LinkState::LoS)
{
    bs_geom.validate();
    ue_geom.validate();
    if (clusters.clusters == 0 || clusters.subpaths == 0 || clusters.gains.size() != clusters.clusters ||
        clusters.subpath.size() != clusters.clusters * clusters.subpaths)
        throw std::invalid_argument("assemble_channel: cluster set dimensions are inconsistent");
    if (!std::isfinite(path_loss_db))
        throw std::invalid_argument("assemble_channel: path loss must be finite");

    const auto n_ue = static_cast<Eigen::Index>(ue_geom.size());
    const auto m_bs = static_cast<Eigen::Index>(bs_geom.size());
    CMatrix h = CMatrix::Zero(n_ue, m_bs);
    for (std::size_t c = 0; c < clusters.clusters; ++c)
    {
        const double amp = std::sqrt(clusters.gains[c]);
        for (std::size_t l = 0; l < clusters.subpaths; ++l)
        {
            const auto &s = clusters.at(c, l);
            const CVector a_ue = array_response(ue_geom, s.aoa_azimuth, s.aoa_elevation);
            const CVector a_bs = array_response(bs_geom, s.aod_azimuth, s.aod_elevation);
            h.noalias() += (amp * std::polar(1.0, s.phase)) * a_ue * a_bs.adjoint();
        }
    }
    const double norm = 1.0 / std::sqrt(static_cast<double>(clusters.clusters * clusters.subpaths));
    const double gain = std::pow(10.0, -path_loss_db / 20.0);

    ChannelRealization out;
    out.H = (norm * gain) * h;
    out.state = state;
    out.path_loss_db = path_loss_db;
    out.small_scale = clusters;
    return out;
}

// All K x J links of one drop, UE-major.
class ChannelSet
{
  public:
    ChannelSet() = default;
    ChannelSet(std::size_t num_ue, std::size_t num_bs) : num_ue_(num_ue), num_bs_(num_bs), links_(num_ue * num_bs) {}

    std::size_t num_ue() const { return num_ue_; }
    std::size_t num_bs() const { return num_bs_; }

    ChannelRealization &at(std::size_t ue, std::size_t bs) { return links_.at(index(ue, bs)); }
    const ChannelRealization &at(std::size_t ue, std::size_t bs) const { return links_.at(index(ue, bs)); }
    const CMatrix &H(std::size_t ue, std::size_t bs) const { return at(ue, bs).H; }

  private:
    std::size_t index(std::size_t ue, std::size_t bs) const
    {
        if (ue >= num_ue_ || bs >= num_bs_)
            throw std::out_of_range("channel link index out of range");
        return ue * num_bs_ + bs;
    }

    std::size_t num_ue_ = 0;
    std::size_t num_bs_ = 0;
    std::vector<ChannelRealization> links_;
};

struct ChannelModel
{
    PropagationParams propagation;
    ClusterParams clusters;
    ArrayGeometry bs_array{8, 8, 0.5, kSpeedOfLight / 28e9};
    ArrayGeometry ue_array{4, 1, 0.5, kSpeedOfLight / 28e9};
};

// Draws every link of one drop. The active UE panel has a random boresight per drop,
// applied as a rotation of the arrival azimuths.
inline ChannelSet synthesize_channels(const NetworkLayout &layout, const ChannelModel &model,
                                      std::uint64_t seed, std::uint64_t drop)
{
    ChannelSet set(layout.num_ue(), layout.num_bs());
    for (std::size_t k = 0; k < layout.num_ue(); ++k)
    {
        Rng orient_rng = substream(seed, drop, Stream::PanelOrientation, k);
        const double boresight = std::uniform_real_distribution<double>(0.0, 2.0 * kPi)(orient_rng);
        for (std::size_t j = 0; j < layout.num_bs(); ++j)
        {
            const double d = layout.link_distance(k, j);
            Rng state_rng = substream(seed, drop, Stream::LinkState, k, j);
            Rng shadow_rng = substream(seed, drop, Stream::Shadowing, k, j);
            Rng cluster_rng = substream(seed, drop, Stream::Clusters, k, j);

            const LinkState state = sample_link_state(d, state_rng, model.propagation);
            const double pl = path_loss_db(d, state, shadow_rng, model.propagation);
            ClusterSet cs = sample_cluster_set(model.clusters, cluster_rng);
            for (auto &s : cs.subpath)
                s.aoa_azimuth = wrap_azimuth(s.aoa_azimuth - boresight);
            set.at(k, j) = assemble_channel(cs, model.bs_array, model.ue_array, pl, state);
        }
    }
    return set;
}

} // namespace mmwi

#endif
