// Copyright 2026 The qlhl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Combines a 256-bit QKD key with a 255-bit PQC shared secret under each
// threat case and prints how much output each one allows.

#include <cstdio>
#include <random>

#include "qlhl/qlhl.hpp"

int main() {
  using namespace qlhl;
  std::mt19937_64 rng(2026);
  const auto eps = SecurityLevel::pow2(32);

  for (auto threat : {ThreatCase::kNoReveal, ThreatCase::kControlledKey, ThreatCase::kRevealedKey,
                      ThreatCase::kRevealOutput, ThreatCase::kRevealOutputAndKey}) {
    CombineRequest req;
    req.keys = {{BitString::random(256, rng), SourceSpec::secure("qkd", 256)},
                {BitString::random(255, rng), model_pqc_key(255, SecurityLevel::pow2(128))}};
    req.independence = Independence::assert_mutual({"qkd", "pqc"});
    req.eps_hash = eps;
    req.threat = threat;
    req.lambdas = {64, 64};
    try {
      const auto r = combine_private(req);
      std::printf("%-14s %3zu bits, eps 2^-%.2f\n", threat_name(threat), r.output.size(),
                  r.out_spec.eps().neg_log2());
    } catch (const InfeasibleError& e) {
      std::printf("%-14s infeasible (%s)\n", threat_name(threat), e.what());
    }
  }
}
