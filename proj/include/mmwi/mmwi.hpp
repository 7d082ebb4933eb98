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

// Umbrella header.
#ifndef MMWI_MMWI_HPP
#define MMWI_MMWI_HPP

#include "mmwi/activation.hpp"
#include "mmwi/association.hpp"
#include "mmwi/beamforming.hpp"
#include "mmwi/channel.hpp"
#include "mmwi/channel_io.hpp"
#include "mmwi/common.hpp"
#include "mmwi/config.hpp"
#include "mmwi/linkmetrics.hpp"
#include "mmwi/montecarlo.hpp"
#include "mmwi/rng.hpp"
#include "mmwi/topology.hpp"

#endif
