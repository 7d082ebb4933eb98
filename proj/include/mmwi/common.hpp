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

#ifndef MMWI_COMMON_HPP
#define MMWI_COMMON_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mmwi
{

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kSpeedOfLight = 299792458.0; // m/s
inline constexpr double kPi = std::numbers::pi;

// Thrown when a channel cannot carry any stream (all-zero matrix).
class DegenerateChannelError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Malformed channel file or config file content.
class ParseError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Quotas cannot accommodate every UE.
class InfeasibleError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

// Per-antenna thermal noise power in watts for a PSD in dBm/Hz over a bandwidth in Hz.
inline double noise_power_watt(double psd_dbm_hz, double bandwidth_hz)
{
    if (bandwidth_hz <= 0.0)
        throw std::invalid_argument("bandwidth must be positive");
    return dbm_to_watt(psd_dbm_hz + 10.0 * std::log10(bandwidth_hz));
}

inline double wavelength(double carrier_hz)
{
    if (carrier_hz <= 0.0)
        throw std::invalid_argument("carrier frequency must be positive");
    return kSpeedOfLight / carrier_hz;
}

} // namespace mmwi

#endif
