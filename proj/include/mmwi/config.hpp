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

#ifndef MMWI_CONFIG_HPP
#define MMWI_CONFIG_HPP

// Config files are flat "section.key = value" lines. '#' starts a comment,
// blank lines are ignored, lists are comma separated and booleans are on/off.
// Every key is optional; unset keys keep the SimulationConfig defaults.
// format_config writes every key in a fixed order and parses back to the
// same configuration.

#include "mmwi/montecarlo.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace mmwi
{

namespace config_detail
{

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(const std::string &v)
{
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(trim(item));
    return out;
}

inline std::size_t to_count(const std::string &key, const std::string &v)
{
    std::size_t out = 0;
    const auto *end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (v.empty() || ec != std::errc() || ptr != end)
        throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
    return out;
}

inline std::uint64_t to_u64(const std::string &key, const std::string &v)
{
    std::uint64_t out = 0;
    const auto *end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (v.empty() || ec != std::errc() || ptr != end)
        throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
    return out;
}

inline double to_real(const std::string &key, const std::string &v)
{
    try
    {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used == v.size() && std::isfinite(d))
            return d;
    }
    catch (const std::exception &)
    {
    }
    throw ConfigError(key + ": expected a number, got '" + v + "'");
}

inline bool to_flag(const std::string &key, const std::string &v)
{
    if (v == "on" || v == "true")
        return true;
    if (v == "off" || v == "false")
        return false;
    throw ConfigError(key + ": expected on or off, got '" + v + "'");
}

inline std::string real_text(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::vector<Scheme> to_schemes(const std::string &key, const std::string &v)
{
    if (v == "max-sinr")
        return {Scheme::MaxSinr};
    if (v == "wcs")
        return {Scheme::Wcs};
    if (v == "both")
        return {Scheme::MaxSinr, Scheme::Wcs};
    throw ConfigError(key + ": expected max-sinr, wcs or both, got '" + v + "'");
}

inline std::string schemes_text(const std::vector<Scheme> &s)
{
    return s.size() == 2 ? "both" : std::string(to_string(s.front()));
}

inline std::vector<Model> to_models(const std::string &key, const std::string &v)
{
    if (v == "oim")
        return {Model::Oim};
    if (v == "bim")
        return {Model::Bim};
    if (v == "both")
        return {Model::Oim, Model::Bim};
    throw ConfigError(key + ": expected oim, bim or both, got '" + v + "'");
}

inline std::string models_text(const std::vector<Model> &m)
{
    return m.size() == 2 ? "both" : std::string(to_string(m.front()));
}

struct Field
{
    std::string key;
    std::function<void(SimulationConfig &, const std::string &)> set;
    std::function<std::string(const SimulationConfig &)> get;
};

#define MMWI_COUNT_FIELD(name, member)                                                                               \
    Field{name, [](SimulationConfig &c, const std::string &v) { c.member = to_count(name, v); },                   \
          [](const SimulationConfig &c) { return std::to_string(c.member); }}
#define MMWI_REAL_FIELD(name, member)                                                                                \
    Field{name, [](SimulationConfig &c, const std::string &v) { c.member = to_real(name, v); },                    \
          [](const SimulationConfig &c) { return real_text(c.member); }}

inline const std::vector<Field> &fields()
{
    static const std::vector<Field> table = {
        MMWI_COUNT_FIELD("network.bs_rows", bs_rows),
        MMWI_COUNT_FIELD("network.bs_cols", bs_cols),
        MMWI_COUNT_FIELD("network.ue_count", ue_count),
        MMWI_REAL_FIELD("network.area_side_m", area_side_m),
        MMWI_REAL_FIELD("network.bs_height_m", bs_height_m),
        MMWI_REAL_FIELD("network.ue_height_m", ue_height_m),
        Field{"network.quotas",
              [](SimulationConfig &c, const std::string &v) {
                  std::vector<std::size_t> q;
                  for (const auto &item : split_list(v))
                      q.push_back(to_count("network.quotas", item));
                  if (q.empty())
                      throw ConfigError("network.quotas: expected at least one value");
                  c.quotas = q;
              },
              [](const SimulationConfig &c) {
                  std::string s;
                  for (std::size_t i = 0; i < c.quotas.size(); ++i)
                      s += (i ? "," : "") + std::to_string(c.quotas[i]);
                  return s;
              }},
        MMWI_COUNT_FIELD("antenna.bs_rows", bs_array_rows),
        MMWI_COUNT_FIELD("antenna.bs_cols", bs_array_cols),
        MMWI_COUNT_FIELD("antenna.ue_rows", ue_array_rows),
        MMWI_COUNT_FIELD("antenna.ue_cols", ue_array_cols),
        MMWI_REAL_FIELD("antenna.spacing_wl", spacing_wl),
        MMWI_COUNT_FIELD("antenna.streams", streams),
        MMWI_REAL_FIELD("radio.carrier_hz", carrier_hz),
        MMWI_REAL_FIELD("radio.bandwidth_hz", bandwidth_hz),
        MMWI_REAL_FIELD("radio.bs_power_dbm", bs_power_dbm),
        MMWI_REAL_FIELD("radio.noise_psd_dbm_hz", noise_psd_dbm_hz),
        MMWI_REAL_FIELD("propagation.reference_distance_m", reference_distance_m),
        MMWI_REAL_FIELD("propagation.breakpoint_m", breakpoint_m),
        MMWI_REAL_FIELD("propagation.los_decay_m", los_decay_m),
        MMWI_REAL_FIELD("propagation.exponent_los", exponent_los),
        MMWI_REAL_FIELD("propagation.exponent_nlos", exponent_nlos),
        MMWI_REAL_FIELD("propagation.shadowing_los_db", shadowing_los_db),
        MMWI_REAL_FIELD("propagation.shadowing_nlos_db", shadowing_nlos_db),
        MMWI_COUNT_FIELD("clusters.count", cluster_count),
        MMWI_COUNT_FIELD("clusters.subpaths", subpath_count),
        MMWI_REAL_FIELD("clusters.center_elevation_halfwidth_deg", center_elevation_halfwidth_deg),
        MMWI_REAL_FIELD("clusters.azimuth_spread_deg", azimuth_spread_deg),
        MMWI_REAL_FIELD("clusters.elevation_spread_deg", elevation_spread_deg),
        Field{"clusters.random_phase",
              [](SimulationConfig &c, const std::string &v) { c.random_subpath_phase = to_flag("clusters.random_phase", v); },
              [](const SimulationConfig &c) { return std::string(c.random_subpath_phase ? "on" : "off"); }},
        MMWI_COUNT_FIELD("simulation.drops", drops),
        Field{"simulation.first_drop",
              [](SimulationConfig &c, const std::string &v) { c.first_drop = to_u64("simulation.first_drop", v); },
              [](const SimulationConfig &c) { return std::to_string(c.first_drop); }},
        Field{"simulation.seed",
              [](SimulationConfig &c, const std::string &v) { c.seed = to_u64("simulation.seed", v); },
              [](const SimulationConfig &c) { return std::to_string(c.seed); }},
        Field{"simulation.association",
              [](SimulationConfig &c, const std::string &v) { c.schemes = to_schemes("simulation.association", v); },
              [](const SimulationConfig &c) { return schemes_text(c.schemes); }},
        Field{"simulation.interference",
              [](SimulationConfig &c, const std::string &v) { c.models = to_models("simulation.interference", v); },
              [](const SimulationConfig &c) { return models_text(c.models); }},
        Field{"simulation.channel",
              [](SimulationConfig &c, const std::string &v) {
                  if (v == "acm")
                      c.channel_source = ChannelSource::Acm;
                  else if (v == "import")
                      c.channel_source = ChannelSource::Import;
                  else
                      throw ConfigError("simulation.channel: expected acm or import, got '" + v + "'");
              },
              [](const SimulationConfig &c) { return std::string(to_string(c.channel_source)); }},
        Field{"simulation.channels", [](SimulationConfig &c, const std::string &v) { c.channels_path = v; },
              [](const SimulationConfig &c) { return c.channels_path; }},
        Field{"simulation.utility",
              [](SimulationConfig &c, const std::string &v) {
                  if (v == "sum")
                      c.utility = Utility::Sum;
                  else if (v == "log")
                      c.utility = Utility::Log;
                  else
                      throw ConfigError("simulation.utility: expected sum or log, got '" + v + "'");
              },
              [](const SimulationConfig &c) { return std::string(to_string(c.utility)); }},
        Field{"simulation.power_norm",
              [](SimulationConfig &c, const std::string &v) {
                  if (v == "paper")
                      c.power_norm = PowerNorm::Paper;
                  else if (v == "per_stream")
                      c.power_norm = PowerNorm::PerStream;
                  else
                      throw ConfigError("simulation.power_norm: expected paper or per_stream, got '" + v + "'");
              },
              [](const SimulationConfig &c) {
                  return std::string(c.power_norm == PowerNorm::Paper ? "paper" : "per_stream");
              }},
        Field{"simulation.oim_literal",
              [](SimulationConfig &c, const std::string &v) {
                  c.oim_variant = to_flag("simulation.oim_literal", v) ? OimVariant::Literal : OimVariant::Physical;
              },
              [](const SimulationConfig &c) {
                  return std::string(c.oim_variant == OimVariant::Literal ? "on" : "off");
              }},
        MMWI_COUNT_FIELD("simulation.wcs_max_iterations", wcs_max_iterations),
        MMWI_COUNT_FIELD("simulation.threads", threads),
        MMWI_COUNT_FIELD("simulation.histogram_bins", histogram_bins),
    };
    return table;
}

#undef MMWI_COUNT_FIELD
#undef MMWI_REAL_FIELD

} // namespace config_detail

// Applies one key. Unknown keys are rejected.
inline void set_config_value(SimulationConfig &config, const std::string &key, const std::string &value)
{
    for (const auto &f : config_detail::fields())
        if (f.key == key)
        {
            f.set(config, value);
            return;
        }
    throw ConfigError(key + ": unknown key");
}

// Parses without the final constraint check, so callers can layer overrides first.
inline SimulationConfig parse_config_text_unchecked(const std::string &text)
{
    SimulationConfig config;
    std::istringstream is(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line))
    {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const auto body = config_detail::trim(line);
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        const auto key = config_detail::trim(std::string_view(body).substr(0, eq));
        const auto value = config_detail::trim(std::string_view(body).substr(eq + 1));
        set_config_value(config, key, value);
    }
    return config;
}

inline SimulationConfig parse_config_text(const std::string &text)
{
    auto config = parse_config_text_unchecked(text);
    config.validate();
    return config;
}

inline std::string read_text_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline SimulationConfig parse_config(const std::string &path) { return parse_config_text(read_text_file(path)); }

inline std::string format_config(const SimulationConfig &config)
{
    std::string out;
    for (const auto &f : config_detail::fields())
        out += f.key + " = " + f.get(config) + "\n";
    return out;
}

} // namespace mmwi

#endif
