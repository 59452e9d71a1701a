// Copyright 2026 The ultrawalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Walks a p = 3 hierarchy of depth 4, prints the spectrum, a few snapshots
// of the class probabilities and the exact long-time averages, then checks
// the numbers against a dense exp(itH).

#include <cstdio>

#include "ultrawalk/ultrawalk.hpp"

int main() {
  using namespace ultrawalk;
  const TreeParams tp = TreeParams::make(3, 4);
  const WalkParams wp = WalkParams::make(ExplicitLandscape{{8.0, 4.0, 2.0, 1.0}}, tp);

  std::printf("p=%d M=%d sites=%llu\n", tp.p(), tp.depth(),
              static_cast<unsigned long long>(tp.sites()));
  const Spectrum& sp = wp.spectrum();
  for (std::size_t m = 0; m < sp.size(); ++m) {
    std::printf("eta_%zu = %-10g x%llu\n", m, sp.etas[m],
                static_cast<unsigned long long>(sp.mults[m]));
  }

  for (double t : {0.0, 0.05, 0.5, 5.0}) {
    const ProbabilityProfile pr = probabilities(wp, t);
    std::printf("t=%-5g", t);
    for (std::size_t k = 0; k < pr.size(); ++k) std::printf("  V%zu %.6f", k, pr[k]);
    std::printf("\n");
  }

  const ExactProfile avg = time_averaged_exact(tp);
  std::printf("long-time average per site:\n");
  for (int k = 0; k <= tp.depth(); ++k) {
    std::printf("  V%d  %s\n", k, to_exact_string(avg[static_cast<std::size_t>(k)]).c_str());
  }
  std::printf("limit at origin: %s\n", to_exact_string(time_averaged_limit(3, 0)).c_str());
  std::printf("mean distance: %s\n", to_exact_string(time_averaged_mean_distance(tp)).c_str());

  const auto dense = evolve_oracle(wp, 0.5);
  const auto closed = expand_profile(amplitude(wp, 0.5), tp);
  double worst = 0.0;
  for (std::size_t n = 0; n < dense.size(); ++n) worst = std::max(worst, std::abs(dense[n] - closed[n]));
  std::printf("max |closed - dense| at t=0.5: %.3g\n", worst);
  return worst < 1e-10 ? 0 : 1;
}
