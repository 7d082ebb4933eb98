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

#ifndef MMWI_MONTECARLO_HPP
#define MMWI_MONTECARLO_HPP

#include "mmwi/activation.hpp"
#include "mmwi/association.hpp"
#include "mmwi/channel.hpp"
#include "mmwi/channel_io.hpp"
#include "mmwi/common.hpp"
#include "mmwi/linkmetrics.hpp"
#include "mmwi/rng.hpp"
#include "mmwi/topology.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace mmwi
{

enum class ChannelSource
{
    Acm,    // internal clustered analytical model
    Import, // channel file
};

inline std::string_view to_string(ChannelSource s) { return s == ChannelSource::Acm ? "acm" : "import"; }

// Invalid configuration value; the message starts with the offending key.
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Defaults reproduce the reference deployment: 4 BSs on a 2x2 grid over a
// 300 m square, 16 UEs, 8x8 BS arrays, 4x1 UE panels with 4 streams, 28 GHz,
// 1 GHz bandwidth, 30 dBm per BS, -174 dBm/Hz noise, quota 4 per BS.
struct SimulationConfig
{
    // network
    std::size_t bs_rows = 2;
    std::size_t bs_cols = 2;
    std::size_t ue_count = 16;
    double area_side_m = 300.0;
    double bs_height_m = 10.0;
    double ue_height_m = 1.5;
    std::vector<std::size_t> quotas{4}; // one entry broadcasts to every BS

    // antennas
    std::size_t bs_array_rows = 8;
    std::size_t bs_array_cols = 8;
    std::size_t ue_array_rows = 4;
    std::size_t ue_array_cols = 1;
    double spacing_wl = 0.5;
    std::size_t streams = 4;

    // radio
    double carrier_hz = 28e9;
    double bandwidth_hz = 1e9;
    double bs_power_dbm = 30.0;
    double noise_psd_dbm_hz = -174.0;

    // propagation
    double reference_distance_m = 1.0;
    double breakpoint_m = 27.0;
    double los_decay_m = 71.0;
    double exponent_los = 2.1;
    double exponent_nlos = 3.4;
    double shadowing_los_db = 3.6;
    double shadowing_nlos_db = 9.7;

    // clusters
    std::size_t cluster_count = 4;
    std::size_t subpath_count = 7;
    double center_elevation_halfwidth_deg = 15.0;
    double azimuth_spread_deg = 5.0;
    double elevation_spread_deg = 2.5;
    bool random_subpath_phase = true;

    // simulation
    std::size_t drops = 500;
    std::uint64_t first_drop = 0;
    std::uint64_t seed = 1;
    std::vector<Scheme> schemes{Scheme::MaxSinr, Scheme::Wcs};
    std::vector<Model> models{Model::Oim, Model::Bim};
    ChannelSource channel_source = ChannelSource::Acm;
    std::string channels_path;
    Utility utility = Utility::Sum;
    PowerNorm power_norm = PowerNorm::Paper;
    OimVariant oim_variant = OimVariant::Physical;
    std::size_t wcs_max_iterations = 200;
    std::size_t threads = 1; // 0 selects the hardware concurrency
    std::size_t histogram_bins = 50;

    std::size_t num_bs() const { return bs_rows * bs_cols; }
    std::size_t bs_antennas() const { return bs_array_rows * bs_array_cols; }
    std::size_t ue_antennas() const { return ue_array_rows * ue_array_cols; }

    std::vector<std::size_t> quota_vector() const
    {
        if (quotas.size() == 1)
            return std::vector<std::size_t>(num_bs(), quotas.front());
        if (quotas.size() != num_bs())
            throw ConfigError("network.quotas: expected 1 or " + std::to_string(num_bs()) + " values, got " +
                              std::to_string(quotas.size()));
        return quotas;
    }

    bool uses(Scheme s) const { return std::find(schemes.begin(), schemes.end(), s) != schemes.end(); }

    void validate() const
    {
        auto positive = [](double v, const char *key) {
            if (!(v > 0.0) || !std::isfinite(v))
                throw ConfigError(std::string(key) + ": must be positive");
        };
        auto at_least_one = [](std::size_t v, const char *key) {
            if (v == 0)
                throw ConfigError(std::string(key) + ": must be at least 1");
        };
        at_least_one(bs_rows, "network.bs_rows");
        at_least_one(bs_cols, "network.bs_cols");
        at_least_one(ue_count, "network.ue_count");
        positive(area_side_m, "network.area_side_m");
        positive(bs_height_m, "network.bs_height_m");
        positive(ue_height_m, "network.ue_height_m");
        at_least_one(bs_array_rows, "antenna.bs_rows");
        at_least_one(bs_array_cols, "antenna.bs_cols");
        at_least_one(ue_array_rows, "antenna.ue_rows");
        at_least_one(ue_array_cols, "antenna.ue_cols");
        positive(spacing_wl, "antenna.spacing_wl");
        at_least_one(streams, "antenna.streams");
        if (streams > std::min(ue_antennas(), bs_antennas()))
            throw ConfigError("antenna.streams: exceeds min(UE antennas, BS antennas)");
        positive(carrier_hz, "radio.carrier_hz");
        positive(bandwidth_hz, "radio.bandwidth_hz");
        if (!std::isfinite(bs_power_dbm))
            throw ConfigError("radio.bs_power_dbm: must be finite");
        if (!std::isfinite(noise_psd_dbm_hz))
            throw ConfigError("radio.noise_psd_dbm_hz: must be finite");
        positive(reference_distance_m, "propagation.reference_distance_m");
        positive(breakpoint_m, "propagation.breakpoint_m");
        positive(los_decay_m, "propagation.los_decay_m");
        positive(exponent_los, "propagation.exponent_los");
        positive(exponent_nlos, "propagation.exponent_nlos");
        if (!(shadowing_los_db >= 0.0) || !(shadowing_nlos_db >= 0.0))
            throw ConfigError("propagation.shadowing_*_db: must be non-negative");
        if (std::min(bs_height_m, ue_height_m) < 0.0 ||
            std::abs(bs_height_m - ue_height_m) < reference_distance_m)
            throw ConfigError("network.bs_height_m: BS/UE height difference must be at least the reference distance");
        at_least_one(cluster_count, "clusters.count");
        at_least_one(subpath_count, "clusters.subpaths");
        if (!(azimuth_spread_deg >= 0.0) || !(elevation_spread_deg >= 0.0) ||
            !(center_elevation_halfwidth_deg >= 0.0) || center_elevation_halfwidth_deg > 90.0)
            throw ConfigError("clusters: angular spreads must be non-negative (half-width at most 90 degrees)");
        at_least_one(drops, "simulation.drops");
        if (schemes.empty())
            throw ConfigError("simulation.association: at least one scheme is required");
        if (models.empty())
            throw ConfigError("simulation.interference: at least one model is required");
        if (channel_source == ChannelSource::Import && channels_path.empty())
            throw ConfigError("simulation.channels: a channel file is required when simulation.channel = import");
        at_least_one(histogram_bins, "simulation.histogram_bins");

        const auto q = quota_vector();
        for (std::size_t j = 0; j < q.size(); ++j)
            if (q[j] * streams > bs_antennas())
                throw ConfigError("network.quotas: quota of BS " + std::to_string(j) +
                                  " times antenna.streams exceeds the BS antenna count");
        if (uses(Scheme::Wcs))
        {
            const auto total = std::accumulate(q.begin(), q.end(), std::size_t{0});
            if (total < ue_count)
                throw ConfigError("network.quotas: total quota " + std::to_string(total) +
                                  " is below network.ue_count " + std::to_string(ue_count) +
                                  ", so wcs association is infeasible");
        }
    }

    ChannelModel channel_model() const
    {
        ChannelModel m;
        m.propagation.carrier_hz = carrier_hz;
        m.propagation.reference_distance_m = reference_distance_m;
        m.propagation.breakpoint_m = breakpoint_m;
        m.propagation.los_decay_m = los_decay_m;
        m.propagation.exponent_los = exponent_los;
        m.propagation.exponent_nlos = exponent_nlos;
        m.propagation.shadowing_los_db = shadowing_los_db;
        m.propagation.shadowing_nlos_db = shadowing_nlos_db;
        constexpr double deg = kPi / 180.0;
        m.clusters.clusters = cluster_count;
        m.clusters.subpaths = subpath_count;
        m.clusters.center_elevation_halfwidth = center_elevation_halfwidth_deg * deg;
        m.clusters.azimuth_spread = azimuth_spread_deg * deg;
        m.clusters.elevation_spread = elevation_spread_deg * deg;
        m.clusters.random_phase = random_subpath_phase;
        const double lambda = wavelength(carrier_hz);
        m.bs_array = ArrayGeometry{bs_array_rows, bs_array_cols, spacing_wl, lambda};
        m.ue_array = ArrayGeometry{ue_array_rows, ue_array_cols, spacing_wl, lambda};
        return m;
    }

    LinkBudget link_budget() const
    {
        LinkBudget b;
        b.bs_power_w.assign(num_bs(), dbm_to_watt(bs_power_dbm));
        b.ue_streams.assign(ue_count, streams);
        b.noise_power_w = noise_power_watt(noise_psd_dbm_hz, bandwidth_hz);
        b.power_norm = power_norm;
        b.oim_variant = oim_variant;
        return b;
    }

    ChannelShape channel_shape() const { return {ue_count, num_bs(), ue_antennas(), bs_antennas()}; }
};

// Channels supplied from a file, keyed by drop index.
using ChannelLibrary = std::map<std::uint64_t, ChannelSet>;

struct SchemeModelResult
{
    Scheme scheme = Scheme::MaxSinr;
    Model model = Model::Oim;
    AssociationOutcome outcome;
    std::vector<UeMetrics> ues;
    std::size_t dropped_count = 0;
    double utility = 0.0; // network utility of the final per-UE rates
};

struct DropResult
{
    std::uint64_t drop = 0;
    NetworkLayout layout;
    std::vector<SchemeModelResult> results;

    const SchemeModelResult &find(Scheme s, Model m) const
    {
        for (const auto &r : results)
            if (r.scheme == s && r.model == m)
                return r;
        throw std::out_of_range("drop result has no " + std::string(to_string(s)) + "/" + std::string(to_string(m)));
    }
};

class DropError : public std::runtime_error
{
  public:
    DropError(std::uint64_t drop, const std::string &what)
        : std::runtime_error("drop " + std::to_string(drop) + ": " + what), drop_(drop)
    {
    }
    std::uint64_t drop() const { return drop_; }

  private:
    std::uint64_t drop_;
};

inline NetworkLayout deploy_layout(const SimulationConfig &config, std::uint64_t drop)
{
    NetworkLayout layout;
    layout.area_side = config.area_side_m;
    layout.bs_height = config.bs_height_m;
    layout.ue_height = config.ue_height_m;
    layout.bs_positions = deploy_grid_bs(config.area_side_m, config.bs_rows, config.bs_cols, config.bs_height_m);
    Rng rng = substream(config.seed, drop, Stream::UePlacement);
    layout.ue_positions = deploy_uniform_ues(config.area_side_m, config.ue_count, rng, config.ue_height_m);
    return layout;
}

inline ChannelSet drop_channels(const SimulationConfig &config, const NetworkLayout &layout, std::uint64_t drop,
                                const ChannelLibrary *library)
{
    if (config.channel_source == ChannelSource::Acm)
        return synthesize_channels(layout, config.channel_model(), config.seed, drop);
    if (library == nullptr)
        throw std::invalid_argument("channel source is import but no channel library was loaded");
    const auto it = library->find(drop);
    if (it == library->end())
        throw ParseError("channel file has no records for drop " + std::to_string(drop));
    return it->second;
}

// One time slot: deploy UEs, draw or import the K x J channels, then for each
// configured scheme associate and evaluate every configured interference
// model on the same channels. WCS searches with the rates of the model it is
// paired with.
inline DropResult run_drop(const SimulationConfig &config, std::uint64_t drop, const ChannelLibrary *library = nullptr)
{
    try
    {
        DropResult res;
        res.drop = drop;
        res.layout = deploy_layout(config, drop);
        const ChannelSet channels = drop_channels(config, res.layout, drop, library);
        const LinkBudget budget = config.link_budget();
        const auto quotas = config.quota_vector();

        auto finish = [&](Scheme s, Model m, AssociationOutcome outcome) {
            SchemeModelResult r;
            r.scheme = s;
            r.model = m;
            r.ues = evaluate_metrics(outcome.activation, channels, budget, m);
            std::vector<double> rates(r.ues.size());
            for (std::size_t k = 0; k < rates.size(); ++k)
                rates[k] = r.ues[k].rate;
            r.utility = network_utility(rates, config.utility);
            r.dropped_count = outcome.dropped.size();
            r.outcome = std::move(outcome);
            res.results.push_back(std::move(r));
        };

        for (const auto scheme : config.schemes)
        {
            if (scheme == Scheme::MaxSinr)
            {
                const auto outcome = max_sinr_associate(channels, budget.bs_power_w, quotas, budget.noise_power_w);
                for (const auto model : config.models)
                    finish(scheme, model, outcome);
            }
            else
            {
                const CachedRateEvaluator cache(channels, budget);
                WcsOptions opts{config.utility, config.wcs_max_iterations};
                for (const auto model : config.models)
                {
                    auto outcome = wcs_associate(
                        channels, budget.bs_power_w, quotas, budget.noise_power_w,
                        [&](const ActivationVector &a) { return cache.rates(a, model); }, opts);
                    finish(scheme, model, std::move(outcome));
                }
            }
        }
        return res;
    }
    catch (const DropError &)
    {
        throw;
    }
    catch (const std::exception &e)
    {
        throw DropError(drop, e.what());
    }
}

// Drops [first, first + count), computed on `threads` workers. Output is
// ordered by drop index and independent of the thread count.
inline std::vector<DropResult> run_drops(const SimulationConfig &config, std::uint64_t first, std::size_t count,
                                         const ChannelLibrary *library = nullptr)
{
    std::vector<DropResult> out(count);
    std::vector<std::exception_ptr> errors(count);
    std::size_t threads = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
    threads = std::min(threads, std::max<std::size_t>(count, 1));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++)
        {
            try
            {
                out[i] = run_drop(config, first + i, library);
            }
            catch (...)
            {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads <= 1)
        worker();
    else
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t)
            pool.emplace_back(worker);
    }
    for (const auto &e : errors)
        if (e)
            std::rethrow_exception(e);
    return out;
}

struct HistogramBin
{
    double lo = 0.0;
    double hi = 0.0;
    double density = 0.0;
};

// Sorted sample set with a right-continuous empirical CDF.
class EmpiricalDistribution
{
  public:
    explicit EmpiricalDistribution(std::vector<double> samples) : sorted_(std::move(samples))
    {
        if (sorted_.empty())
            throw std::invalid_argument("empirical_cdf: at least one sample is required");
        for (double v : sorted_)
            if (!std::isfinite(v))
                throw std::invalid_argument("empirical_cdf: samples must be finite");
        std::sort(sorted_.begin(), sorted_.end());
    }

    std::size_t size() const { return sorted_.size(); }
    const std::vector<double> &sorted() const { return sorted_; }
    double min() const { return sorted_.front(); }
    double max() const { return sorted_.back(); }

    double mean() const
    {
        return std::accumulate(sorted_.begin(), sorted_.end(), 0.0) / static_cast<double>(sorted_.size());
    }

    // Fraction of samples <= x.
    double cdf(double x) const
    {
        const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
        return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
    }

    // One (value, F(value)) point per distinct sample value.
    std::vector<std::pair<double, double>> cdf_points() const
    {
        std::vector<std::pair<double, double>> pts;
        const double n = static_cast<double>(sorted_.size());
        for (std::size_t i = 0; i < sorted_.size(); ++i)
            if (i + 1 == sorted_.size() || sorted_[i + 1] != sorted_[i])
                pts.emplace_back(sorted_[i], static_cast<double>(i + 1) / n);
        return pts;
    }

    // Linear interpolation between order statistics at position p (n - 1).
    double quantile(double p) const
    {
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("quantile: probability must lie in [0, 1]");
        const double pos = p * static_cast<double>(sorted_.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, sorted_.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return sorted_[lo] + frac * (sorted_[hi] - sorted_[lo]);
    }

    // Equal-width bins over [min, max]; densities integrate to 1. A degenerate
    // sample set yields one unit-width bin centred on the value.
    std::vector<HistogramBin> histogram(std::size_t bins) const
    {
        if (bins == 0)
            throw std::invalid_argument("histogram: need at least one bin");
        const double n = static_cast<double>(sorted_.size());
        if (max() == min())
            return {{min() - 0.5, min() + 0.5, 1.0}};
        const double width = (max() - min()) / static_cast<double>(bins);
        std::vector<std::size_t> counts(bins, 0);
        for (double v : sorted_)
        {
            auto b = static_cast<std::size_t>((v - min()) / width);
            ++counts[std::min(b, bins - 1)];
        }
        std::vector<HistogramBin> out(bins);
        for (std::size_t b = 0; b < bins; ++b)
        {
            out[b].lo = min() + static_cast<double>(b) * width;
            out[b].hi = b + 1 == bins ? max() : min() + static_cast<double>(b + 1) * width;
            out[b].density = static_cast<double>(counts[b]) / (n * width);
        }
        return out;
    }

  private:
    std::vector<double> sorted_;
};

inline EmpiricalDistribution empirical_cdf(std::span<const double> samples)
{
    return EmpiricalDistribution(std::vector<double>(samples.begin(), samples.end()));
}

// Pooled samples of one series across drops.
struct SeriesKey
{
    std::string metric; // "rate", "inp" or "dropped"
    Scheme scheme = Scheme::MaxSinr;
    std::optional<Model> model; // empty for "dropped"

    std::string name() const
    {
        std::string n = metric + "_" + std::string(to_string(scheme));
        if (model)
            n += "_" + std::string(to_string(*model));
        return n;
    }
};

struct Series
{
    SeriesKey key;
    std::vector<double> samples;
    std::optional<EmpiricalDistribution> distribution; // empty when there are no samples
};

struct CampaignResult
{
    std::vector<DropResult> drops;
    std::vector<Series> series;

    const Series &find(const std::string &name) const
    {
        for (const auto &s : series)
            if (s.key.name() == name)
                return s;
        throw std::out_of_range("no series named " + name);
    }
};

// Rate and interference samples pool the served UEs of every drop; the
// dropped-UE series has one sample per drop.
inline std::vector<Series> summarize(const SimulationConfig &config, const std::vector<DropResult> &drops)
{
    std::vector<Series> out;
    for (const auto scheme : config.schemes)
    {
        for (const auto model : config.models)
        {
            Series rate{{"rate", scheme, model}, {}, {}};
            Series inp{{"inp", scheme, model}, {}, {}};
            for (const auto &d : drops)
                for (const auto &u : d.find(scheme, model).ues)
                    if (u.served)
                    {
                        rate.samples.push_back(u.rate);
                        inp.samples.push_back(u.inp_dbw);
                    }
            out.push_back(std::move(rate));
            out.push_back(std::move(inp));
        }
        Series dropped{{"dropped", scheme, std::nullopt}, {}, {}};
        for (const auto &d : drops)
            dropped.samples.push_back(static_cast<double>(d.find(scheme, config.models.front()).dropped_count));
        out.push_back(std::move(dropped));
    }
    for (auto &s : out)
        if (!s.samples.empty())
            s.distribution = empirical_cdf(s.samples);
    return out;
}

inline CampaignResult run_campaign(const SimulationConfig &config, const ChannelLibrary *library = nullptr)
{
    config.validate();
    CampaignResult res;
    res.drops = run_drops(config, config.first_drop, config.drops, library);
    res.series = summarize(config, res.drops);
    return res;
}

} // namespace mmwi

#endif
