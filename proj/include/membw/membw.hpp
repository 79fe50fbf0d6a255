#pragma once

/// @file membw.hpp
/// @brief Umbrella include for the analysis library.

#include "membw/analysis_result.hpp"
#include "membw/dynamic_analysis.hpp"
#include "membw/errors.hpp"
#include "membw/oracles.hpp"
#include "membw/rational.hpp"
#include "membw/schedule.hpp"
#include "membw/stall_curve.hpp"
#include "membw/static_analysis.hpp"

#include "membw/ima/experiment.hpp"
#include "membw/ima/partitions.hpp"
#include "membw/ima/policies.hpp"
