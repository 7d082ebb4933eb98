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

#ifndef MMWI_ASSOCIATION_HPP
#define MMWI_ASSOCIATION_HPP

#include "mmwi/activation.hpp"
#include "mmwi/channel.hpp"
#include "mmwi/common.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mmwi
{

enum class Scheme
{
    MaxSinr,
    Wcs,
};

inline std::string_view to_string(Scheme s) { return s == Scheme::MaxSinr ? "max-sinr" : "wcs"; }

enum class Utility
{
    Sum,
    Log, // proportional fairness, sum of ln(rate + 1e-12)
};

inline std::string_view to_string(Utility u) { return u == Utility::Sum ? "sum" : "log"; }

inline double network_utility(std::span<const double> rates, Utility utility = Utility::Sum)
{
    constexpr double eps = 1e-12;
    double total = 0.0;
    for (double r : rates)
    {
        if (r < 0.0 || std::isnan(r))
            throw std::invalid_argument("network_utility: rates must be non-negative");
        total += utility == Utility::Sum ? r : std::log(r + eps);
    }
    return total;
}

struct AssociationOutcome
{
    ActivationVector activation;
    std::vector<std::size_t> dropped;
    double utility = 0.0;
    std::size_t accepted_moves = 0;       // WCS only
    std::size_t rounds = 0;               // WCS only: worst-UE examinations
    std::vector<double> utility_trace;    // WCS only: initial utility, then one entry per accepted move
};

// Raw activation sets. Used to validate hand-built associations that an
// ActivationVector cannot even represent (a UE listed under two BSs).
inline bool validate_activation_sets(const std::vector<std::vector<std::size_t>> &sets,
                                     const std::vector<std::size_t> &dropped, std::size_t num_ue,
                                     const std::vector<std::size_t> &quotas,
                                     const std::vector<std::size_t> &ue_streams = {},
                                     const std::vector<std::size_t> &bs_antennas = {})
{
    if (sets.size() != quotas.size())
        return false;
    std::vector<int> count(num_ue, 0);
    for (std::size_t j = 0; j < sets.size(); ++j)
    {
        if (sets[j].size() > quotas[j])
            return false;
        std::size_t streams = 0;
        for (auto k : sets[j])
        {
            if (k >= num_ue)
                return false;
            ++count[k];
            if (!ue_streams.empty())
                streams += ue_streams.at(k);
        }
        if (!ue_streams.empty() && !bs_antennas.empty() && streams > bs_antennas.at(j))
            return false;
    }
    for (auto k : dropped)
    {
        if (k >= num_ue)
            return false;
        ++count[k];
    }
    return std::all_of(count.begin(), count.end(), [](int c) { return c == 1; });
}

inline bool validate_association(const AssociationOutcome &outcome, const std::vector<std::size_t> &quotas,
                                 const std::vector<std::size_t> &ue_streams = {},
                                 const std::vector<std::size_t> &bs_antennas = {})
{
    const auto &a = outcome.activation;
    if (a.num_bs() != quotas.size())
        return false;
    std::vector<std::vector<std::size_t>> sets(a.num_bs());
    for (std::size_t j = 0; j < a.num_bs(); ++j)
        sets[j] = a.members(j);
    return validate_activation_sets(sets, outcome.dropped, a.num_ue(), quotas, ue_streams, bs_antennas);
}

// Wideband SINR proxy P_j |H_kj|_F^2 / (sum_{i != j} P_i |H_ki|_F^2 + N_k noise), K x J.
inline std::vector<std::vector<double>> sinr_proxy(const ChannelSet &channels, std::span<const double> powers,
                                                   double noise_power)
{
    if (powers.size() != channels.num_bs())
        throw std::invalid_argument("sinr_proxy: one power per BS is required");
    std::vector<std::vector<double>> proxy(channels.num_ue(), std::vector<double>(channels.num_bs()));
    for (std::size_t k = 0; k < channels.num_ue(); ++k)
    {
        std::vector<double> rx(channels.num_bs());
        double total = 0.0;
        for (std::size_t j = 0; j < channels.num_bs(); ++j)
        {
            const auto &H = channels.H(k, j);
            if (H.size() == 0)
                throw std::invalid_argument("sinr_proxy: missing channel for link (" + std::to_string(k) + "," +
                                            std::to_string(j) + ")");
            rx[j] = powers[j] * H.squaredNorm();
            total += rx[j];
        }
        const double noise = static_cast<double>(channels.H(k, 0).rows()) * noise_power;
        for (std::size_t j = 0; j < channels.num_bs(); ++j)
        {
            const double denom = (total - rx[j]) + noise;
            proxy[k][j] = denom > 0.0 ? rx[j] / denom : (rx[j] > 0.0 ? INFINITY : 0.0);
        }
    }
    return proxy;
}

namespace detail
{
// First index of the maximum; lowest index wins ties.
inline std::size_t argmax(const std::vector<double> &v)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best])
            best = i;
    return best;
}
} // namespace detail

// Each UE picks its best-proxy BS. An over-subscribed BS keeps its quota of
// highest-proxy UEs and drops the rest without reassigning them.
inline AssociationOutcome max_sinr_associate(const ChannelSet &channels, std::span<const double> powers,
                                             const std::vector<std::size_t> &quotas, double noise_power)
{
    if (quotas.size() != channels.num_bs())
        throw std::invalid_argument("max_sinr_associate: one quota per BS is required");
    const auto proxy = sinr_proxy(channels, powers, noise_power);

    std::vector<std::vector<std::size_t>> wanted(channels.num_bs());
    for (std::size_t k = 0; k < channels.num_ue(); ++k)
        wanted[detail::argmax(proxy[k])].push_back(k);

    AssociationOutcome out;
    out.activation = ActivationVector(channels.num_ue(), channels.num_bs());
    for (std::size_t j = 0; j < channels.num_bs(); ++j)
    {
        auto &cand = wanted[j];
        std::stable_sort(cand.begin(), cand.end(),
                         [&](std::size_t a, std::size_t b) { return proxy[a][j] > proxy[b][j]; });
        for (std::size_t r = 0; r < cand.size() && r < quotas[j]; ++r)
            out.activation.assign(cand[r], j);
    }
    out.dropped = out.activation.dropped();
    return out;
}

// Greedy quota-respecting start: visit (UE, BS) pairs by descending proxy and
// assign whenever the UE is free and the BS has room. Ties go to the lower UE,
// then the lower BS.
inline ActivationVector greedy_assignment(const std::vector<std::vector<double>> &proxy, std::size_t num_bs,
                                          const std::vector<std::size_t> &quotas)
{
    const std::size_t num_ue = proxy.size();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(num_ue * num_bs);
    for (std::size_t k = 0; k < num_ue; ++k)
        for (std::size_t j = 0; j < num_bs; ++j)
            pairs.emplace_back(k, j);
    std::stable_sort(pairs.begin(), pairs.end(), [&](const auto &a, const auto &b) {
        return proxy[a.first][a.second] > proxy[b.first][b.second];
    });

    ActivationVector act(num_ue, num_bs);
    std::vector<std::size_t> room = quotas;
    for (auto [k, j] : pairs)
        if (!act.served(k) && room[j] > 0)
        {
            act.assign(k, j);
            --room[j];
        }
    return act;
}

// Per-UE rates of a candidate activation (dropped UEs rate 0).
using RateEvaluator = std::function<std::vector<double>(const ActivationVector &)>;

struct WcsOptions
{
    Utility utility = Utility::Sum;
    std::size_t max_iterations = 200;
};

// Worst-connection swapping from a given feasible start. Each round takes the
// worst-rate UE not yet exhausted and tries moving it to every BS with spare
// quota and swapping it with every UE of another BS, each candidate fully
// re-evaluated. The best strictly improving candidate is accepted and all UEs
// become eligible again; otherwise the UE is marked exhausted. Stops when every
// UE is exhausted or after max_iterations rounds.
inline AssociationOutcome wcs_search(ActivationVector start, const std::vector<std::size_t> &quotas,
                                     const RateEvaluator &evaluate, const WcsOptions &options = {})
{
    const std::size_t num_ue = start.num_ue();
    const std::size_t num_bs = start.num_bs();

    auto score = [&](const ActivationVector &a, std::vector<double> &rates) {
        rates = evaluate(a);
        return network_utility(rates, options.utility);
    };
    // Strict improvement, ignoring differences at the rounding level.
    auto improves = [](double cand, double cur) { return cand > cur + 1e-12 * std::max(1.0, std::abs(cur)); };

    AssociationOutcome out;
    out.activation = std::move(start);
    std::vector<double> rates;
    out.utility = score(out.activation, rates);
    out.utility_trace.push_back(out.utility);

    std::vector<char> exhausted(num_ue, 0);
    std::vector<double> cand_rates;
    while (out.rounds < options.max_iterations)
    {
        std::vector<std::size_t> order;
        for (std::size_t k = 0; k < num_ue; ++k)
            if (out.activation.served(k) && !exhausted[k])
                order.push_back(k);
        if (order.empty())
            break;
        const std::size_t worst = *std::min_element(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return rates[a] < rates[b] || (rates[a] == rates[b] && a < b);
        });
        ++out.rounds;

        const std::size_t home = out.activation[worst];
        const auto loads = out.activation.loads();
        std::optional<ActivationVector> best;
        double best_utility = out.utility;
        std::vector<double> best_rates;

        auto consider = [&](ActivationVector cand) {
            const double u = score(cand, cand_rates);
            if (improves(u, best_utility))
            {
                best_utility = u;
                best = std::move(cand);
                best_rates = cand_rates;
            }
        };

        for (std::size_t j = 0; j < num_bs; ++j)
            if (j != home && loads[j] < quotas[j])
            {
                ActivationVector cand = out.activation;
                cand.assign(worst, j);
                consider(std::move(cand));
            }
        for (std::size_t l = 0; l < num_ue; ++l)
        {
            const auto other = out.activation[l];
            if (l == worst || other == ActivationVector::kDropped || other == home)
                continue;
            ActivationVector cand = out.activation;
            cand.assign(worst, other);
            cand.assign(l, home);
            consider(std::move(cand));
        }

        if (best)
        {
            out.activation = std::move(*best);
            out.utility = best_utility;
            rates = std::move(best_rates);
            out.utility_trace.push_back(out.utility);
            ++out.accepted_moves;
            std::fill(exhausted.begin(), exhausted.end(), 0);
        }
        else
            exhausted[worst] = 1;
    }
    out.dropped = out.activation.dropped();
    return out;
}

inline AssociationOutcome wcs_associate(const ChannelSet &channels, std::span<const double> powers,
                                        const std::vector<std::size_t> &quotas, double noise_power,
                                        const RateEvaluator &evaluate, const WcsOptions &options = {})
{
    if (quotas.size() != channels.num_bs())
        throw std::invalid_argument("wcs_associate: one quota per BS is required");
    const auto capacity = std::accumulate(quotas.begin(), quotas.end(), std::size_t{0});
    if (capacity < channels.num_ue())
        throw InfeasibleError("wcs_associate: total quota " + std::to_string(capacity) + " cannot serve " +
                              std::to_string(channels.num_ue()) + " UEs");
    const auto proxy = sinr_proxy(channels, powers, noise_power);
    return wcs_search(greedy_assignment(proxy, channels.num_bs(), quotas), quotas, evaluate, options);
}

} // namespace mmwi

#endif
