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

#ifndef MMWI_CLI_HPP
#define MMWI_CLI_HPP

// Driver behind the `simulate` tool. Output directory layout:
//
//   manifest.txt        resolved configuration; `simulate --config manifest.txt`
//                       reproduces the directory byte for byte
//   rates.csv           drop,ue,scheme,model,rate_bps_hz,served
//   inp_power.csv       drop,ue,scheme,model,inp_dbw          (served UEs only)
//   dropped.csv         drop,scheme,count
//   cdf_<series>.csv    value,cum_prob
//   pdf_<series>.csv    bin_lo,bin_hi,density
//   summary.csv         metric,scheme,model,count,mean,p10,median,p90
//   drops.jsonl         per-drop layout and association record
//
// Series names are <metric>_<scheme>[_<model>] with metric rate, inp or dropped.
// Numbers in CSV files use 15 significant digits.

#include "mmwi/channel_io.hpp"
#include "mmwi/config.hpp"
#include "mmwi/montecarlo.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace mmwi
{

inline constexpr const char *kVersion = "0.1.0";

namespace cli
{

inline std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

inline std::ofstream open_out(const std::filesystem::path &p)
{
    std::ofstream os(p, std::ios::binary | std::ios::trunc);
    if (!os)
        throw std::runtime_error("cannot write " + p.string());
    return os;
}

inline nlohmann::ordered_json drop_record(const DropResult &d)
{
    using nlohmann::ordered_json;
    auto points = [](const std::vector<Point3> &pts) {
        ordered_json arr = ordered_json::array();
        for (const auto &p : pts)
            arr.push_back({p.x, p.y, p.z});
        return arr;
    };
    ordered_json rec;
    rec["drop"] = d.drop;
    rec["bs_positions"] = points(d.layout.bs_positions);
    rec["ue_positions"] = points(d.layout.ue_positions);
    ordered_json results = ordered_json::array();
    for (const auto &r : d.results)
    {
        ordered_json beta = ordered_json::array();
        for (std::size_t k = 0; k < r.outcome.activation.num_ue(); ++k)
        {
            if (r.outcome.activation.served(k))
                beta.push_back(r.outcome.activation[k]);
            else
                beta.push_back(nullptr);
        }
        ordered_json item;
        item["scheme"] = to_string(r.scheme);
        item["model"] = to_string(r.model);
        item["beta"] = beta;
        item["dropped"] = r.outcome.dropped;
        item["utility"] = r.utility;
        if (r.scheme == Scheme::Wcs)
        {
            item["accepted_moves"] = r.outcome.accepted_moves;
            item["rounds"] = r.outcome.rounds;
        }
        results.push_back(item);
    }
    rec["results"] = results;
    return rec;
}

inline void write_outputs(const std::filesystem::path &dir, const SimulationConfig &config,
                          const CampaignResult &result)
{
    std::filesystem::create_directories(dir);

    {
        auto os = open_out(dir / "manifest.txt");
        os << "# mmwi simulate " << kVersion << "\n" << format_config(config);
    }
    {
        auto rates = open_out(dir / "rates.csv");
        auto inp = open_out(dir / "inp_power.csv");
        auto dropped = open_out(dir / "dropped.csv");
        auto records = open_out(dir / "drops.jsonl");
        rates << "drop,ue,scheme,model,rate_bps_hz,served\n";
        inp << "drop,ue,scheme,model,inp_dbw\n";
        dropped << "drop,scheme,count\n";
        for (const auto &d : result.drops)
        {
            for (const auto scheme : config.schemes)
            {
                for (const auto model : config.models)
                {
                    const auto &r = d.find(scheme, model);
                    for (std::size_t k = 0; k < r.ues.size(); ++k)
                    {
                        const auto &u = r.ues[k];
                        rates << d.drop << ',' << k << ',' << to_string(scheme) << ',' << to_string(model) << ','
                              << num(u.rate) << ',' << (u.served ? 1 : 0) << '\n';
                        if (u.served)
                            inp << d.drop << ',' << k << ',' << to_string(scheme) << ',' << to_string(model) << ','
                                << num(u.inp_dbw) << '\n';
                    }
                }
                dropped << d.drop << ',' << to_string(scheme) << ','
                        << d.find(scheme, config.models.front()).dropped_count << '\n';
            }
            records << drop_record(d).dump() << '\n';
        }
    }

    auto summary = open_out(dir / "summary.csv");
    summary << "metric,scheme,model,count,mean,p10,median,p90\n";
    for (const auto &s : result.series)
    {
        const std::string name = s.key.name();
        auto cdf = open_out(dir / ("cdf_" + name + ".csv"));
        auto pdf = open_out(dir / ("pdf_" + name + ".csv"));
        cdf << "value,cum_prob\n";
        pdf << "bin_lo,bin_hi,density\n";
        summary << s.key.metric << ',' << to_string(s.key.scheme) << ','
                << (s.key.model ? std::string(to_string(*s.key.model)) : std::string()) << ',' << s.samples.size();
        if (!s.distribution)
        {
            summary << ",,,,\n";
            continue;
        }
        const auto &dist = *s.distribution;
        for (const auto &[v, p] : dist.cdf_points())
            cdf << num(v) << ',' << num(p) << '\n';
        for (const auto &b : dist.histogram(config.histogram_bins))
            pdf << num(b.lo) << ',' << num(b.hi) << ',' << num(b.density) << '\n';
        summary << ',' << num(dist.mean()) << ',' << num(dist.quantile(0.1)) << ',' << num(dist.quantile(0.5)) << ','
                << num(dist.quantile(0.9)) << '\n';
    }
}

inline ChannelLibrary load_channel_library(const SimulationConfig &config)
{
    std::ifstream in(config.channels_path);
    if (!in)
        throw ParseError(config.channels_path + ": cannot open channel file");
    return import_channels(in, config.channel_shape());
}

// Flags override config-file keys, which override the built-in defaults.
inline int run(int argc, const char *const *argv, std::ostream &out = std::cout, std::ostream &err = std::cerr)
{
    CLI::App app{"Monte Carlo interference and spectral-efficiency statistics for a downlink mmWave network",
                 "simulate"};
    std::string config_path, out_dir, export_path;
    std::optional<std::uint64_t> seed, first_drop;
    std::optional<std::size_t> drops, threads;
    std::optional<std::string> association, interference, channel, channels, utility, power_norm, literal;
    bool version = false;

    app.add_option("--config", config_path, "Configuration file (section.key = value lines)");
    app.add_option("--seed", seed, "Master random seed");
    app.add_option("--drops", drops, "Number of drops");
    app.add_option("--first-drop", first_drop, "Index of the first drop");
    app.add_option("--association", association, "max-sinr, wcs or both");
    app.add_option("--interference", interference, "oim, bim or both");
    app.add_option("--channel", channel, "acm (internal model) or import");
    app.add_option("--channels", channels, "Channel file for --channel import");
    app.add_option("--utility", utility, "WCS network utility: sum or log");
    app.add_option("--power-norm", power_norm, "paper or per_stream");
    app.add_option("--literal-eq12", literal,
                   "on: omnidirectional covariance sums the other served UEs' own channels");
    app.add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");
    app.add_option("--export-channels", export_path, "Also write every drop's channels to this file");
    app.add_option("--out", out_dir, "Output directory");
    app.add_flag("--version", version, "Print the version and exit");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        return app.exit(e, out, err);
    }
    if (version)
    {
        out << "simulate " << kVersion << "\n";
        return 0;
    }

    try
    {
        if (out_dir.empty())
            throw ConfigError("--out: an output directory is required");
        SimulationConfig config =
            config_path.empty() ? SimulationConfig{} : parse_config_text_unchecked(read_text_file(config_path));
        auto apply = [&](const char *key, const std::optional<std::string> &v) {
            if (v)
                set_config_value(config, key, *v);
        };
        if (seed)
            config.seed = *seed;
        if (drops)
            config.drops = *drops;
        if (first_drop)
            config.first_drop = *first_drop;
        if (threads)
            config.threads = *threads;
        apply("simulation.association", association);
        apply("simulation.interference", interference);
        apply("simulation.channel", channel);
        apply("simulation.channels", channels);
        apply("simulation.utility", utility);
        apply("simulation.power_norm", power_norm);
        apply("simulation.oim_literal", literal);
        config.validate();

        std::optional<ChannelLibrary> library;
        if (config.channel_source == ChannelSource::Import)
            library = load_channel_library(config);

        const auto result = run_campaign(config, library ? &*library : nullptr);
        write_outputs(out_dir, config, result);

        if (!export_path.empty())
        {
            auto os = open_out(export_path);
            for (const auto &d : result.drops)
                export_channels(os, d.drop,
                                library ? library->at(d.drop) : drop_channels(config, d.layout, d.drop, nullptr));
        }
        out << "wrote " << result.drops.size() << " drops to " << out_dir << "\n";
        return 0;
    }
    catch (const std::exception &e)
    {
        err << "simulate: " << e.what() << "\n";
        return 1;
    }
}

} // namespace cli
} // namespace mmwi

#endif
