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

#ifndef MMWI_TOPOLOGY_HPP
#define MMWI_TOPOLOGY_HPP

#include "mmwi/rng.hpp"

#include <cmath>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <vector>

namespace mmwi
{

struct Point3
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Point3 &, const Point3 &) = default;
};

inline double distance_3d(const Point3 &a, const Point3 &b)
{
    return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

// Square deployment area [0, area_side]^2 with fixed BS and UE antenna heights.
struct NetworkLayout
{
    double area_side = 300.0;
    double bs_height = 10.0;
    double ue_height = 1.5;
    std::vector<Point3> bs_positions;
    std::vector<Point3> ue_positions;

    std::size_t num_bs() const { return bs_positions.size(); }
    std::size_t num_ue() const { return ue_positions.size(); }

    double link_distance(std::size_t ue, std::size_t bs) const
    {
        return distance_3d(ue_positions.at(ue), bs_positions.at(bs));
    }
};

// BSs at the centers of a rows x cols partition of the square. Point index is
// r * cols + c, with columns running along x and rows along y, so (100, 1, 2)
// yields (25, 50) and (75, 50).
inline std::vector<Point3> deploy_grid_bs(double area_side, std::size_t rows, std::size_t cols,
                                          double height = 10.0)
{
    if (area_side <= 0.0 || rows == 0 || cols == 0)
        throw std::invalid_argument("deploy_grid_bs: area side, rows and cols must be positive");
    const double dx = area_side / static_cast<double>(cols);
    const double dy = area_side / static_cast<double>(rows);
    std::vector<Point3> out;
    out.reserve(rows * cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            out.push_back({(static_cast<double>(c) + 0.5) * dx, (static_cast<double>(r) + 0.5) * dy, height});
    return out;
}

inline std::vector<Point3> deploy_uniform_ues(double area_side, std::size_t count, Rng &rng,
                                              double height = 1.5)
{
    if (count == 0)
        throw std::invalid_argument("deploy_uniform_ues: at least one UE is required");
    if (area_side <= 0.0)
        throw std::invalid_argument("deploy_uniform_ues: area side must be positive");
    std::uniform_real_distribution<double> coord(0.0, area_side);
    std::vector<Point3> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k)
    {
        const double x = coord(rng);
        const double y = coord(rng);
        out.push_back({x, y, height});
    }
    return out;
}

} // namespace mmwi

#endif
