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

#ifndef MMWI_RNG_HPP
#define MMWI_RNG_HPP

#include <cstdint>
#include <random>

namespace mmwi
{

using Rng = std::mt19937_64;

// Purposes for which a drop draws random numbers. Each purpose gets its own
// substream so toggling one feature leaves the other draws untouched.
enum class Stream : std::uint64_t
{
    UePlacement = 1,
    PanelOrientation = 2,
    LinkState = 3,
    Shadowing = 4,
    Clusters = 5,
};

namespace detail
{
// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
} // namespace detail

// Substream keyed by (master seed, drop, purpose, a, b). a and b are typically
// the UE and BS indices of a link.
inline Rng substream(std::uint64_t master_seed, std::uint64_t drop, Stream purpose,
                     std::uint64_t a = 0, std::uint64_t b = 0)
{
    std::uint64_t h = detail::mix64(master_seed);
    h = detail::mix64(h ^ drop);
    h = detail::mix64(h ^ static_cast<std::uint64_t>(purpose));
    h = detail::mix64(h ^ a);
    h = detail::mix64(h ^ (b + 0x5851f42d4c957f2dULL));
    std::seed_seq seq{static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
    return Rng(seq);
}

} // namespace mmwi

#endif
