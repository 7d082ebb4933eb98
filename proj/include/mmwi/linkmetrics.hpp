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

#ifndef MMWI_LINKMETRICS_HPP
#define MMWI_LINKMETRICS_HPP

#include "mmwi/activation.hpp"
#include "mmwi/beamforming.hpp"
#include "mmwi/channel.hpp"
#include "mmwi/common.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace mmwi
{

// Omnidirectional (unprecoded) vs SVD-beamformed interference model.
enum class Model
{
    Oim,
    Bim,
};

inline std::string_view to_string(Model m) { return m == Model::Oim ? "oim" : "bim"; }

// Paper: each served UE gets P_j / Q_j, so a BS radiates n_k * P_j in total.
// PerStream: P_j / (Q_j n_k), which keeps the total at P_j.
enum class PowerNorm
{
    Paper,
    PerStream,
};

// Physical: interference reaches UE k through its own channels H_{k,i}, once per
// interfering UE served by BS i.
// Literal: sums H_{l,i} H_{l,i}^H over the other served UEs l, as the
// omnidirectional covariance is usually printed.
enum class OimVariant
{
    Physical,
    Literal,
};

struct LinkBudget
{
    std::vector<double> bs_power_w;
    std::vector<std::size_t> ue_streams;
    double noise_power_w = 0.0; // per receive antenna, over the full bandwidth
    PowerNorm power_norm = PowerNorm::Paper;
    OimVariant oim_variant = OimVariant::Physical;

    // Transmit coefficient from `bs` to its served UE `ue` when the BS serves `load` UEs.
    double coefficient(std::size_t bs, std::size_t ue, std::size_t load) const
    {
        if (load == 0)
            throw std::invalid_argument("coefficient: BS serves no UE");
        double c = bs_power_w.at(bs) / static_cast<double>(load);
        if (power_norm == PowerNorm::PerStream)
            c /= static_cast<double>(ue_streams.at(ue));
        return c;
    }
};

struct CovarianceMatrix
{
    CMatrix V;
    Model model = Model::Oim;
};

// log2 det(I + c V^{-1} S) for Hermitian positive definite V and PSD S, via
// Cholesky factors so the log is accumulated from the diagonal.
inline double log2_det_rate(const CMatrix &V, const CMatrix &S, double c)
{
    Eigen::LLT<CMatrix> vchol(V);
    if (vchol.info() != Eigen::Success)
        throw std::domain_error("interference covariance is not positive definite");
    const auto L = vchol.matrixL();
    CMatrix X = L.solve(S);                               // L^{-1} S
    CMatrix M = L.solve(X.adjoint()).adjoint();           // L^{-1} S L^{-H}
    CMatrix A = CMatrix::Identity(V.rows(), V.cols()) + c * (0.5 * (M + M.adjoint()));
    Eigen::LLT<CMatrix> achol(A);
    if (achol.info() != Eigen::Success)
        throw std::domain_error("rate matrix is not positive definite");
    double log_det = 0.0;
    const CMatrix &LA = achol.matrixLLT();
    for (Eigen::Index i = 0; i < LA.rows(); ++i)
        log_det += 2.0 * std::log(LA(i, i).real());
    return std::max(0.0, log_det / std::log(2.0));
}

namespace detail
{
inline std::size_t serving_bs(const ActivationVector &activation, std::size_t ue)
{
    const auto j = activation.serving(ue);
    if (!j)
        throw std::invalid_argument("UE " + std::to_string(ue) + " is not associated with any BS");
    return *j;
}
} // namespace detail

inline CovarianceMatrix oim_covariance(std::size_t ue, const ActivationVector &activation,
                                       const ChannelSet &channels, const LinkBudget &budget)
{
    detail::serving_bs(activation, ue);
    const auto n = channels.H(ue, 0).rows();
    const auto loads = activation.loads();

    CMatrix V = budget.noise_power_w * CMatrix::Identity(n, n);
    for (std::size_t i = 0; i < channels.num_bs(); ++i)
    {
        if (loads[i] == 0)
            continue;
        double weight = 0.0;
        for (auto l : activation.members(i))
        {
            if (l == ue)
                continue;
            const double c = budget.coefficient(i, l, loads[i]);
            if (budget.oim_variant == OimVariant::Literal)
            {
                const auto &Hl = channels.H(l, i);
                V.noalias() += c * Hl * Hl.adjoint();
            }
            else
                weight += c;
        }
        if (weight > 0.0)
        {
            const auto &Hk = channels.H(ue, i);
            V.noalias() += weight * Hk * Hk.adjoint();
        }
    }
    return {V, Model::Oim};
}

inline double oim_rate(std::size_t ue, const ActivationVector &activation, const ChannelSet &channels,
                       const LinkBudget &budget)
{
    const auto j = detail::serving_bs(activation, ue);
    const auto V = oim_covariance(ue, activation, channels, budget);
    const auto &H = channels.H(ue, j);
    const CMatrix S = H * H.adjoint();
    return log2_det_rate(V.V, S, budget.coefficient(j, ue, activation.load(j)));
}

inline CovarianceMatrix bim_covariance(std::size_t ue, const ActivationVector &activation,
                                       const ChannelSet &channels, const BeamformerSet &beamformers,
                                       const LinkBudget &budget)
{
    detail::serving_bs(activation, ue);
    const CMatrix &W = beamformers.combiner(ue);
    const auto loads = activation.loads();

    CMatrix V = budget.noise_power_w * (W.adjoint() * W);
    for (std::size_t i = 0; i < channels.num_bs(); ++i)
    {
        if (loads[i] == 0)
            continue;
        const CMatrix G = W.adjoint() * channels.H(ue, i); // n_k x M
        for (auto l : activation.members(i))
        {
            if (l == ue)
                continue;
            const CMatrix T = G * beamformers.precoder(l);
            V.noalias() += budget.coefficient(i, l, loads[i]) * T * T.adjoint();
        }
    }
    return {V, Model::Bim};
}

inline double bim_rate(std::size_t ue, const ActivationVector &activation, const ChannelSet &channels,
                       const BeamformerSet &beamformers, const LinkBudget &budget)
{
    const auto j = detail::serving_bs(activation, ue);
    const auto V = bim_covariance(ue, activation, channels, beamformers, budget);
    const CMatrix T = beamformers.combiner(ue).adjoint() * channels.H(ue, j) * beamformers.precoder(ue);
    return log2_det_rate(V.V, T * T.adjoint(), budget.coefficient(j, ue, activation.load(j)));
}

// Trace of the covariance in dBW. Entries of V are total watts over the bandwidth.
inline double interference_noise_power_dbw(const CovarianceMatrix &cov)
{
    const double tr = cov.V.trace().real();
    if (!(tr > 0.0))
        throw std::domain_error("interference-plus-noise trace must be positive");
    return 10.0 * std::log10(tr);
}

struct UeMetrics
{
    double rate = 0.0;     // bits/s/Hz, 0 for dropped UEs
    double inp_dbw = 0.0;  // meaningful only when served
    bool served = false;
};

// Per-UE metrics of a whole activation through the closed-form functions above.
inline std::vector<UeMetrics> evaluate_metrics(const ActivationVector &activation, const ChannelSet &channels,
                                               const LinkBudget &budget, Model model)
{
    std::vector<UeMetrics> out(channels.num_ue());
    std::optional<BeamformerSet> bf;
    if (model == Model::Bim)
        bf = compute_beamformers(channels, activation, budget.ue_streams);
    for (std::size_t k = 0; k < channels.num_ue(); ++k)
    {
        if (!activation.served(k))
            continue;
        auto &m = out[k];
        m.served = true;
        if (model == Model::Oim)
        {
            m.rate = oim_rate(k, activation, channels, budget);
            m.inp_dbw = interference_noise_power_dbw(oim_covariance(k, activation, channels, budget));
        }
        else
        {
            m.rate = bim_rate(k, activation, channels, *bf, budget);
            m.inp_dbw = interference_noise_power_dbw(bim_covariance(k, activation, channels, *bf, budget));
        }
    }
    return out;
}

// Rate evaluation for many candidate activations over one fixed channel set.
// Beamformers of every link and all projected interference terms
// H_{k,i} F_{l,i} F_{l,i}^H H_{k,i}^H are computed once, so each candidate costs
// only small N x N sums. Agrees with evaluate_metrics to rounding.
class CachedRateEvaluator
{
  public:
    CachedRateEvaluator(const ChannelSet &channels, LinkBudget budget)
        : budget_(std::move(budget)), num_ue_(channels.num_ue()), num_bs_(channels.num_bs())
    {
        if (budget_.ue_streams.size() != num_ue_ || budget_.bs_power_w.size() != num_bs_)
            throw std::invalid_argument("CachedRateEvaluator: budget does not match the channel set");
        gram_.resize(num_ue_ * num_bs_);
        svd_.resize(num_ue_ * num_bs_);
        for (std::size_t k = 0; k < num_ue_; ++k)
            for (std::size_t j = 0; j < num_bs_; ++j)
            {
                const auto &H = channels.H(k, j);
                gram_[k * num_bs_ + j] = H * H.adjoint();
                if (H.norm() > 0.0)
                    svd_[k * num_bs_ + j] = svd_beamformers(H, budget_.ue_streams[k]);
            }

        projected_.resize(num_ue_ * num_bs_ * num_ue_);
        for (std::size_t k = 0; k < num_ue_; ++k)
            for (std::size_t i = 0; i < num_bs_; ++i)
            {
                const auto &H = channels.H(k, i);
                for (std::size_t l = 0; l < num_ue_; ++l)
                {
                    const auto &bf = svd_[l * num_bs_ + i];
                    if (!bf)
                        continue;
                    const CMatrix T = H * bf->precoder;
                    projected_[(k * num_bs_ + i) * num_ue_ + l] = T * T.adjoint();
                }
            }
    }

    std::size_t num_ue() const { return num_ue_; }
    std::size_t num_bs() const { return num_bs_; }
    const LinkBudget &budget() const { return budget_; }

    std::vector<UeMetrics> evaluate(const ActivationVector &activation, Model model) const
    {
        if (activation.num_ue() != num_ue_ || activation.num_bs() != num_bs_)
            throw std::invalid_argument("CachedRateEvaluator: activation shape mismatch");
        const auto loads = activation.loads();
        std::vector<UeMetrics> out(num_ue_);
        for (std::size_t k = 0; k < num_ue_; ++k)
        {
            const auto j = activation[k];
            if (j == ActivationVector::kDropped)
                continue;
            out[k] = model == Model::Oim ? oim(k, j, activation, loads) : bim(k, j, activation, loads);
        }
        return out;
    }

    std::vector<double> rates(const ActivationVector &activation, Model model) const
    {
        const auto m = evaluate(activation, model);
        std::vector<double> r(m.size());
        for (std::size_t k = 0; k < m.size(); ++k)
            r[k] = m[k].rate;
        return r;
    }

  private:
    const CMatrix &gram(std::size_t ue, std::size_t bs) const { return gram_[ue * num_bs_ + bs]; }
    const CMatrix &projected(std::size_t ue, std::size_t bs, std::size_t other) const
    {
        const auto &p = projected_[(ue * num_bs_ + bs) * num_ue_ + other];
        if (!p)
            throw DegenerateChannelError("no beamformer for UE " + std::to_string(other) + " on BS " +
                                         std::to_string(bs) + " (zero channel)");
        return *p;
    }

    UeMetrics oim(std::size_t k, std::size_t j, const ActivationVector &a, const std::vector<std::size_t> &loads) const
    {
        const auto n = gram(k, j).rows();
        CMatrix V = budget_.noise_power_w * CMatrix::Identity(n, n);
        for (std::size_t l = 0; l < num_ue_; ++l)
        {
            const auto i = a[l];
            if (l == k || i == ActivationVector::kDropped)
                continue;
            const double c = budget_.coefficient(i, l, loads[i]);
            V += c * (budget_.oim_variant == OimVariant::Literal ? gram(l, i) : gram(k, i));
        }
        UeMetrics m;
        m.served = true;
        m.rate = log2_det_rate(V, gram(k, j), budget_.coefficient(j, k, loads[j]));
        m.inp_dbw = 10.0 * std::log10(V.trace().real());
        return m;
    }

    UeMetrics bim(std::size_t k, std::size_t j, const ActivationVector &a, const std::vector<std::size_t> &loads) const
    {
        const auto &bf = svd_[k * num_bs_ + j];
        if (!bf)
            throw DegenerateChannelError("svd_beamformers: zero channel matrix for UE " + std::to_string(k));
        const CMatrix &W = bf->combiner;
        const auto n = gram(k, j).rows();
        CMatrix acc = CMatrix::Zero(n, n);
        for (std::size_t l = 0; l < num_ue_; ++l)
        {
            const auto i = a[l];
            if (l == k || i == ActivationVector::kDropped)
                continue;
            acc += budget_.coefficient(i, l, loads[i]) * projected(k, i, l);
        }
        const CMatrix V = W.adjoint() * acc * W + budget_.noise_power_w * (W.adjoint() * W);
        const CMatrix S = W.adjoint() * projected(k, j, k) * W;
        UeMetrics m;
        m.served = true;
        m.rate = log2_det_rate(V, S, budget_.coefficient(j, k, loads[j]));
        m.inp_dbw = 10.0 * std::log10(V.trace().real());
        return m;
    }

    LinkBudget budget_;
    std::size_t num_ue_;
    std::size_t num_bs_;
    std::vector<CMatrix> gram_;
    std::vector<std::optional<LinkBeamformer>> svd_;
    std::vector<std::optional<CMatrix>> projected_;
};

} // namespace mmwi

#endif
