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

#ifndef MMWI_BEAMFORMING_HPP
#define MMWI_BEAMFORMING_HPP

#include "mmwi/activation.hpp"
#include "mmwi/channel.hpp"
#include "mmwi/common.hpp"

#include <Eigen/SVD>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace mmwi
{

// SVD beamformers of one link: H = U S V^H, precoder = leading columns of V,
// combiner = leading columns of U.
struct LinkBeamformer
{
    CMatrix precoder; // M x n, orthonormal columns
    CMatrix combiner; // N x n, orthonormal columns
    Eigen::VectorXd singular_values; // all min(N, M) values, descending
};

// Each singular pair is rotated so the first nonzero entry of the precoder
// column is real and positive.
inline LinkBeamformer svd_beamformers(const CMatrix &H, std::size_t streams)
{
    const auto rank_cap = static_cast<std::size_t>(std::min(H.rows(), H.cols()));
    if (streams == 0 || streams > rank_cap)
        throw std::invalid_argument("svd_beamformers: stream count must be in [1, min(N, M)]");
    if (!H.allFinite())
        throw std::invalid_argument("svd_beamformers: channel has non-finite entries");
    const double fro = H.norm();
    if (fro == 0.0)
        throw DegenerateChannelError("svd_beamformers: zero channel matrix");

    Eigen::JacobiSVD<CMatrix> svd(H, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto n = static_cast<Eigen::Index>(streams);

    LinkBeamformer bf;
    bf.singular_values = svd.singularValues();
    bf.precoder = svd.matrixV().leftCols(n);
    bf.combiner = svd.matrixU().leftCols(n);

    const double tiny = 1e-12 * bf.precoder.cwiseAbs().maxCoeff();
    for (Eigen::Index c = 0; c < n; ++c)
    {
        Eigen::Index r = 0;
        while (r < bf.precoder.rows() && std::abs(bf.precoder(r, c)) <= tiny)
            ++r;
        if (r == bf.precoder.rows())
            continue;
        const cplx rot = std::conj(bf.precoder(r, c)) / std::abs(bf.precoder(r, c));
        bf.precoder.col(c) *= rot;
        bf.combiner.col(c) *= rot;
        bf.precoder(r, c) = std::abs(bf.precoder(r, c));
    }
    return bf;
}

// Beamformers for the served UEs of an activation. Dropped UEs have none.
class BeamformerSet
{
  public:
    BeamformerSet() = default;
    explicit BeamformerSet(std::size_t num_ue) : links_(num_ue) {}

    std::size_t num_ue() const { return links_.size(); }
    bool has(std::size_t ue) const { return links_.at(ue).has_value(); }
    void set(std::size_t ue, LinkBeamformer bf) { links_.at(ue) = std::move(bf); }

    const LinkBeamformer &at(std::size_t ue) const
    {
        const auto &l = links_.at(ue);
        if (!l)
            throw std::invalid_argument("no beamformer for UE " + std::to_string(ue));
        return *l;
    }
    const CMatrix &precoder(std::size_t ue) const { return at(ue).precoder; }
    const CMatrix &combiner(std::size_t ue) const { return at(ue).combiner; }

    // Horizontal concatenation of the precoders of a BS's activation set (M x D_j).
    CMatrix bs_precoder(const ActivationVector &activation, std::size_t bs) const
    {
        const auto members = activation.members(bs);
        Eigen::Index cols = 0, rows = 0;
        for (auto k : members)
        {
            cols += precoder(k).cols();
            rows = precoder(k).rows();
        }
        CMatrix F(rows, cols);
        Eigen::Index offset = 0;
        for (auto k : members)
        {
            const auto &f = precoder(k);
            F.middleCols(offset, f.cols()) = f;
            offset += f.cols();
        }
        return F;
    }

  private:
    std::vector<std::optional<LinkBeamformer>> links_;
};

inline BeamformerSet compute_beamformers(const ChannelSet &channels, const ActivationVector &activation,
                                         const std::vector<std::size_t> &streams)
{
    if (activation.num_ue() != channels.num_ue() || streams.size() != channels.num_ue())
        throw std::invalid_argument("compute_beamformers: UE count mismatch");
    BeamformerSet set(channels.num_ue());
    for (std::size_t k = 0; k < channels.num_ue(); ++k)
        if (const auto j = activation.serving(k))
            set.set(k, svd_beamformers(channels.H(k, *j), streams[k]));
    return set;
}

} // namespace mmwi

#endif
