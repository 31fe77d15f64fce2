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

#ifndef CBMREP_NOISE_HPP
#define CBMREP_NOISE_HPP

#include "cbmrep/types.hpp"

namespace cbmrep {

/// Independent bit- and sign-flip rates per photon mode.
struct FlipRates {
    double e_x;  // bit flip
    double e_z;  // sign flip
};

/// Logical flip rates of one pair-level Bell measurement. Both photons of a
/// pair may flip, so each rate is 2e(1-e) when derived from per-mode rates.
struct PairErrorRates {
    double e0_x;
    double e0_z;

    static PairErrorRates none() { return PairErrorRates{0.0, 0.0}; }
};

/// Flip rates of a block-level measurement result, split by how the block
/// outcome was reached. The sign-only rate is a conditional probability; when
/// the sign-only outcome itself has vanishing probability the rate is
/// reported as zero with `degenerate_sign_only` set.
struct BlockErrorRates {
    double e1_x_success;
    double e1_z_success;
    double e1_z_sign_only;
    bool degenerate_sign_only = false;
};

/// Split of the overall success probability by the logical Pauli error the
/// reconstructed result carries. Components sum to the overall success
/// probability. Labels follow the convention used throughout this library:
/// p_x carries a symbol-vote failure alone, p_y a sign-parity failure alone,
/// and p_z both at once.
struct PauliPartition {
    double p_identity;
    double p_x;
    double p_y;
    double p_z;

    double total() const { return p_identity + p_x + p_y + p_z; }
};

/// Detector dark-count model. `lambda` is the spurious-click rate per
/// detector; `gamma` the resulting rate of single-spurious-click events among
/// the four detectors of one pair measurement. The closed forms neglect
/// multi-click events, so construction rejects lambda above 1e-3 where that
/// neglect stops being quantitatively safe.
struct DarkCountModel {
    double lambda;
    double gamma;

    explicit DarkCountModel(double lambda_per_detector);

    static DarkCountModel off() { return DarkCountModel(0.0); }

    bool enabled() const { return lambda > 0.0; }
};

/// Per-mode flip rates of the depolarizing channel with error weight e_d.
FlipRates depolarizing_to_flips(double e_d);

/// Pair-level flip rates from per-mode rates: 2e(1-e) for each component.
PairErrorRates pair_error_rates(const FlipRates& fr);

/// Flip rates of the block-level result, by outcome class. The success-path
/// sign rate majority-votes over the sign readings that accompany a full
/// discrimination; the sign-only rate votes over the readings available in
/// each loss/retry history, weighted by that history's probability.
BlockErrorRates block_error_rates(const EncodingParams& enc, const ChannelPoint& ch, const PairErrorRates& per);

/// Pauli split of the overall success probability, mixing the per-block flip
/// rates over the number k of fully discriminated blocks.
PauliPartition pauli_partition(const EncodingParams& enc, const ChannelPoint& ch, const BlockErrorRates& ber);

/// Same split with explicit block outcome probabilities (used when dark
/// counts modify them).
PauliPartition pauli_partition(const BlockOutcomeProbs& probs, int n_blocks, const BlockErrorRates& ber);

/// Block outcome probabilities with detector dark counts folded in. A single
/// spurious click converts half of the affected pair successes to failures
/// and a quarter of the affected failures to spurious successes, shifting the
/// per-pair success and failure rates from 1/2 to 1/2 -+ gamma/8.
BlockOutcomeProbs block_probs_with_dark(const EncodingParams& enc, const ChannelPoint& ch, const DarkCountModel& dc);

}  // namespace cbmrep

#endif
