// Copyright 2026 The cbmrep Authors
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

#ifndef CBMREP_CORE_HPP
#define CBMREP_CORE_HPP

#include "cbmrep/types.hpp"

namespace cbmrep {

/// Probability that one block-level measurement fully discriminates its
/// block Bell state: (1 - 2^-(j+1)) * (eta*eta')^m.
double block_success_prob(const EncodingParams& enc, const ChannelPoint& ch);

/// Probability that one block-level measurement fails outright (no psi-type
/// success and every remaining pair measurement hits a loss):
/// sum over the number l of lossy pair measurements, l = m-j .. m, of
/// (eta*eta'/2)^(m-l) * (1 - eta*eta')^l.
double block_failure_prob(const EncodingParams& enc, const ChannelPoint& ch);

/// Same failure probability computed along an independent route: a double sum
/// over the per-qubit lost-photon counts (l1, l2), weighting each pair of
/// binomial loss distributions by the count of protocol histories that end in
/// failure for that loss split. Kept separate from block_failure_prob so the
/// two routes can cross-check each other.
double block_failure_prob_alt(const EncodingParams& enc, const ChannelPoint& ch);

/// Success / failure / sign-only distribution of one block-level measurement.
BlockOutcomeProbs block_outcome_probs(const EncodingParams& enc, const ChannelPoint& ch);

/// Overall success probability of the concatenated Bell measurement:
/// (1 - p_f)^n - (1 - p_s - p_f)^n.
double cbm_success_prob(const EncodingParams& enc, const ChannelPoint& ch);

/// Success probability with every photon surviving: 1 - 2^-((j+1)*n).
/// Equals 1 - 2^-(n*m) at j = m-1.
double lossless_success_prob(const EncodingParams& enc);

/// Ceiling on any linear-optical Bell measurement with N photons per qubit
/// and detectors resolving up to two photons: 1 - 2^-N.
double linear_optics_bound(int n_photons);

struct BestJ {
    int j;
    double p_success;
};

/// Exhaustive scan of the retry depth j in [0, m-1] maximizing the overall
/// success probability. Ties break toward the smaller j.
BestJ best_over_j(int n, int m, const ChannelPoint& ch);

}  // namespace cbmrep

#endif
