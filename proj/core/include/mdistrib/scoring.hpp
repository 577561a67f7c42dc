/*
 * Copyright 2026 The MDistrib Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>

#include "mdistrib/frequency_sketch.hpp"

namespace mdistrib {

/// Current-tick estimate a_hat, cumulative estimate s_hat (which includes the
/// current tick) and the 1-based global tick index t.
struct ScoreInputs {
  double a_hat = 0.0;
  double s_hat = 0.0;
  std::uint64_t t = 1;
};

/// Two-category chi-squared statistic comparing the current tick's count
/// against the historical mean:
///   (a - s/t)^2 * t^2 / (s * (t - 1))
/// Returns 0 when t <= 1, s <= 0 or an input is not finite. Never NaN or
/// infinite; values that would overflow saturate at the largest double.
double chi2_score(const ScoreInputs& in) noexcept;

double score_edge_plain(double ce_estimate, double cs_estimate, std::uint64_t t) noexcept;

struct ScoreComponents {
  double edge = 0.0;
  double src = 0.0;
  double dst = 0.0;

  friend bool operator==(const ScoreComponents&, const ScoreComponents&) = default;
};

struct RelationalScore {
  double score = 0.0;
  ScoreComponents components;
};

/// Max of the edge, source-node and destination-node scores.
RelationalScore score_edge_relational(const ScoreInputs& edge, const ScoreInputs& src,
                                      const ScoreInputs& dst) noexcept;

enum class DecayMode { constant, inverse_tick };

/// Factor applied to the current-tick sketches when a partition enters its
/// local_tick-th tick (1-based): alpha for constant mode, alpha^(1/local_tick)
/// for inverse_tick mode.
double decay_factor(double alpha, DecayMode mode, std::uint64_t local_tick);

/// Scales every sketch in the set by decay_factor(alpha, mode, local_tick).
/// Throws std::invalid_argument unless 0 < alpha <= 1.
void apply_decay(SketchSet& current, double alpha, DecayMode mode = DecayMode::constant,
                 std::uint64_t local_tick = 2);

struct TickPolicy {
  bool relational = true;
  double alpha = 0.6;
  DecayMode mode = DecayMode::constant;
};

/// Tick-boundary transition of the current-tick sketches: relational mode
/// decays them, plain mode resets them to zero.
void advance_tick(SketchSet& current, const TickPolicy& policy, std::uint64_t local_tick);

}  // namespace mdistrib
