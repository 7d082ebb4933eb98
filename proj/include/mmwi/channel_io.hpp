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

#ifndef MMWI_CHANNEL_IO_HPP
#define MMWI_CHANNEL_IO_HPP

// Line-delimited JSON channel files, one record per link:
//
//   {"drop":0,"ue_index":3,"bs_index":2,"N_k":4,"M_j":64,"link_state":"NLoS",
//    "path_loss_db":1.1e+02,"entries":[re00,im00,re01,im01,...]}
//
// "entries" holds the N_k x M_j matrix in row-major order as interleaved
// real/imaginary pairs. "drop" is optional on import and defaults to 0.
// Floats are written with 17 significant digits so export/import is exact.

#include "mmwi/channel.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace mmwi
{

namespace detail
{
inline void append_double(std::string &out, double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    out += buf;
}

inline std::string link_name(std::size_t ue, std::size_t bs)
{
    return "(" + std::to_string(ue) + "," + std::to_string(bs) + ")";
}
} // namespace detail

inline std::string channel_record(std::uint64_t drop, std::size_t ue, std::size_t bs, const ChannelRealization &ch)
{
    std::string line;
    line.reserve(64 + static_cast<std::size_t>(ch.H.size()) * 50);
    line += "{\"drop\":" + std::to_string(drop);
    line += ",\"ue_index\":" + std::to_string(ue);
    line += ",\"bs_index\":" + std::to_string(bs);
    line += ",\"N_k\":" + std::to_string(ch.H.rows());
    line += ",\"M_j\":" + std::to_string(ch.H.cols());
    line += ",\"link_state\":\"" + std::string(to_string(ch.state)) + "\"";
    line += ",\"path_loss_db\":";
    detail::append_double(line, ch.path_loss_db);
    line += ",\"entries\":[";
    for (Eigen::Index r = 0; r < ch.H.rows(); ++r)
        for (Eigen::Index c = 0; c < ch.H.cols(); ++c)
        {
            if (r != 0 || c != 0)
                line += ',';
            detail::append_double(line, ch.H(r, c).real());
            line += ',';
            detail::append_double(line, ch.H(r, c).imag());
        }
    line += "]}";
    return line;
}

inline void export_channels(std::ostream &os, std::uint64_t drop, const ChannelSet &set)
{
    for (std::size_t k = 0; k < set.num_ue(); ++k)
        for (std::size_t j = 0; j < set.num_bs(); ++j)
            os << channel_record(drop, k, j, set.at(k, j)) << '\n';
}

// Expected shape of every drop in a channel file.
struct ChannelShape
{
    std::size_t num_ue = 0;
    std::size_t num_bs = 0;
    std::size_t ue_antennas = 0;
    std::size_t bs_antennas = 0;
};

// Reads every drop in the stream. Each drop must carry the full K x J link set.
inline std::map<std::uint64_t, ChannelSet> import_channels(std::istream &is, const ChannelShape &shape)
{
    using nlohmann::json;
    std::map<std::uint64_t, ChannelSet> drops;
    std::map<std::uint64_t, std::vector<char>> seen;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line))
    {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        json rec;
        try
        {
            rec = json::parse(line);
        }
        catch (const json::parse_error &e)
        {
            throw ParseError("channel file line " + std::to_string(line_no) + ": " + e.what());
        }

        std::size_t ue = 0, bs = 0;
        std::uint64_t drop = 0;
        try
        {
            ue = rec.at("ue_index").get<std::size_t>();
            bs = rec.at("bs_index").get<std::size_t>();
            if (rec.contains("drop"))
                drop = rec.at("drop").get<std::uint64_t>();
        }
        catch (const json::exception &e)
        {
            throw ParseError("channel file line " + std::to_string(line_no) + ": bad link index: " + e.what());
        }
        const std::string where = "link " + detail::link_name(ue, bs) + " of drop " + std::to_string(drop);
        if (ue >= shape.num_ue || bs >= shape.num_bs)
            throw ParseError(where + ": index outside the configured " + std::to_string(shape.num_ue) + "x" +
                             std::to_string(shape.num_bs) + " network");

        ChannelRealization ch;
        try
        {
            const auto rows = rec.at("N_k").get<std::size_t>();
            const auto cols = rec.at("M_j").get<std::size_t>();
            if (rows != shape.ue_antennas || cols != shape.bs_antennas)
                throw ParseError(where + ": matrix is " + std::to_string(rows) + "x" + std::to_string(cols) +
                                 ", expected " + std::to_string(shape.ue_antennas) + "x" +
                                 std::to_string(shape.bs_antennas));
            ch.state = link_state_from_string(rec.at("link_state").get<std::string>());
            ch.path_loss_db = rec.at("path_loss_db").get<double>();
            const auto &entries = rec.at("entries");
            if (!entries.is_array() || entries.size() != 2 * rows * cols)
                throw ParseError(where + ": expected " + std::to_string(2 * rows * cols) + " matrix entries");
            ch.H.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
            std::size_t i = 0;
            for (std::size_t r = 0; r < rows; ++r)
                for (std::size_t c = 0; c < cols; ++c, i += 2)
                {
                    const auto &re = entries[i];
                    const auto &im = entries[i + 1];
                    if (!re.is_number() || !im.is_number())
                        throw ParseError(where + ": malformed complex entry at row " + std::to_string(r) +
                                         ", column " + std::to_string(c));
                    ch.H(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                        cplx(re.get<double>(), im.get<double>());
                }
        }
        catch (const ParseError &)
        {
            throw;
        }
        catch (const std::exception &e)
        {
            throw ParseError(where + ": " + e.what());
        }

        auto [it, fresh] = drops.try_emplace(drop, shape.num_ue, shape.num_bs);
        auto &mask = seen[drop];
        if (fresh)
            mask.assign(shape.num_ue * shape.num_bs, 0);
        if (mask[ue * shape.num_bs + bs])
            throw ParseError("duplicate " + where);
        mask[ue * shape.num_bs + bs] = 1;
        it->second.at(ue, bs) = std::move(ch);
    }

    for (const auto &[drop, mask] : seen)
        for (std::size_t k = 0; k < shape.num_ue; ++k)
            for (std::size_t j = 0; j < shape.num_bs; ++j)
                if (!mask[k * shape.num_bs + j])
                    throw ParseError("missing link " + detail::link_name(k, j) + " in drop " + std::to_string(drop));
    return drops;
}

} // namespace mmwi

#endif
