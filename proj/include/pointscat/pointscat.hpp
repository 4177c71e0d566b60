#pragma once
/// @file pointscat.hpp
/// @brief Umbrella header for the point-scatterer forward/inverse toolkit.

#include "pointscat/forward.hpp"
#include "pointscat/imaging.hpp"
#include "pointscat/noise.hpp"
#include "pointscat/runner.hpp"
#include "pointscat/wavecore.hpp"
