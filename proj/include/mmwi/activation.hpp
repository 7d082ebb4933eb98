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

#ifndef MMWI_ACTIVATION_HPP
#define MMWI_ACTIVATION_HPP

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace mmwi
{

// UE -> BS assignment for one time slot. Each UE is either served by exactly
// one BS or dropped.
class ActivationVector
{
  public:
    static constexpr std::size_t kDropped = std::numeric_limits<std::size_t>::max();

    ActivationVector() = default;
    ActivationVector(std::size_t num_ue, std::size_t num_bs) : beta_(num_ue, kDropped), num_bs_(num_bs) {}

    std::size_t num_ue() const { return beta_.size(); }
    std::size_t num_bs() const { return num_bs_; }

    void assign(std::size_t ue, std::size_t bs)
    {
        if (bs >= num_bs_)
            throw std::out_of_range("ActivationVector::assign: BS index out of range");
        beta_.at(ue) = bs;
    }
    void drop(std::size_t ue) { beta_.at(ue) = kDropped; }

    bool served(std::size_t ue) const { return beta_.at(ue) != kDropped; }
    std::optional<std::size_t> serving(std::size_t ue) const
    {
        const auto b = beta_.at(ue);
        return b == kDropped ? std::nullopt : std::optional<std::size_t>(b);
    }
    std::size_t operator[](std::size_t ue) const { return beta_.at(ue); }
    const std::vector<std::size_t> &beta() const { return beta_; }

    // Activation set of a BS, ascending UE order.
    std::vector<std::size_t> members(std::size_t bs) const
    {
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < beta_.size(); ++k)
            if (beta_[k] == bs)
                out.push_back(k);
        return out;
    }

    std::size_t load(std::size_t bs) const
    {
        std::size_t n = 0;
        for (auto b : beta_)
            n += b == bs ? 1 : 0;
        return n;
    }

    std::vector<std::size_t> loads() const
    {
        std::vector<std::size_t> out(num_bs_, 0);
        for (auto b : beta_)
            if (b != kDropped)
                ++out[b];
        return out;
    }

    std::vector<std::size_t> dropped() const
    {
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < beta_.size(); ++k)
            if (beta_[k] == kDropped)
                out.push_back(k);
        return out;
    }

    friend bool operator==(const ActivationVector &, const ActivationVector &) = default;

  private:
    std::vector<std::size_t> beta_;
    std::size_t num_bs_ = 0;
};

} // namespace mmwi

#endif
