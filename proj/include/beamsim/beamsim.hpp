// SPDX-License-Identifier: Apache-2.0
//
// beamsim - beamspace entropy analysis for sparse mm-wave MIMO channels

#pragma once

#include "beamsim/array.hpp"
#include "beamsim/beamstats.hpp"
#include "beamsim/beamtrain.hpp"
#include "beamsim/channel.hpp"
#include "beamsim/cmatrix.hpp"
#include "beamsim/io.hpp"
#include "beamsim/montecarlo.hpp"
#include "beamsim/rng.hpp"
#include "beamsim/specdecomp.hpp"
