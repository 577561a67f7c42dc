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

#include "mdistrib/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mdistrib {

double chi2_score(const ScoreInputs& in) noexcept {
  if (in.t <= 1 || !std::isfinite(in.a_hat) || !std::isfinite(in.s_hat) || !(in.s_hat > 0.0)) {
    return 0.0;
  }
  const double t = static_cast<double>(in.t);
  // (a - s/t) * t, with a single rounding.
  const double dev = std::fma(in.a_hat, t, -in.s_hat);
  const double score = (dev / in.s_hat) * (dev / (t - 1.0));
  if (std::isnan(score)) return 0.0;
  return std::min(score, std::numeric_limits<double>::max());
}

double score_edge_plain(double ce_estimate, double cs_estimate, std::uint64_t t) noexcept {
  return chi2_score({ce_estimate, cs_estimate, t});
}

RelationalScore score_edge_relational(const ScoreInputs& edge, const ScoreInputs& src,
                                      const ScoreInputs& dst) noexcept {
  RelationalScore out;
  out.components = {chi2_score(edge), chi2_score(src), chi2_score(dst)};
  out.score = std::max({out.components.edge, out.components.src, out.components.dst});
  return out;
}

double decay_factor(double alpha, DecayMode mode, std::uint64_t local_tick) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("decay alpha must be in (0, 1]");
  }
  if (mode == DecayMode::constant) return alpha;
  return std::pow(alpha, 1.0 / static_cast<double>(std::max<std::uint64_t>(local_tick, 1)));
}

void apply_decay(SketchSet& current, double alpha, DecayMode mode, std::uint64_t local_tick) {
  current.scale(decay_factor(alpha, mode, local_tick));
}

void advance_tick(SketchSet& current, const TickPolicy& policy, std::uint64_t local_tick) {
  if (policy.relational) {
    apply_decay(current, policy.alpha, policy.mode, local_tick);
  } else {
    current.clear();
  }
}

}  // namespace mdistrib
