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

#ifndef CBMREP_MC_HPP
#define CBMREP_MC_HPP

#include "cbmrep/noise.hpp"
#include "cbmrep/rng.hpp"
#include "cbmrep/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cbmrep {

enum class Symbol : uint8_t { phi, psi };
enum class Sign : uint8_t { plus, minus };

inline Sign flip(Sign s) {
    return s == Sign::plus ? Sign::minus : Sign::plus;
}
inline Symbol flip(Symbol s) {
    return s == Symbol::phi ? Symbol::psi : Symbol::phi;
}

/// One pair-level Bell state.
struct PairState {
    Symbol symbol;
    Sign sign;
};

/// The three pair-level measurement settings: psi-type distinguishes the two
/// psi states; the sign types distinguish the two states of matching sign.
enum class B0Type : uint8_t { b_psi, b_plus, b_minus };

struct B0Result {
    enum class Kind : uint8_t { success, failure, loss };
    Kind kind;
    PairState identified;        // valid when kind == success
    bool has_sign_hint = false;  // failures of sign-type measurements reveal the opposite sign
    Sign sign_hint = Sign::plus;
    bool spoiled_success = false;  // a would-be success a dark count turned into a failure
};

struct B1Result {
    enum class Kind : uint8_t { success, sign_only, failure };
    Kind kind;
    Symbol symbol = Symbol::phi;  // valid when kind == success
    Sign sign = Sign::plus;       // valid unless kind == failure
};

enum class LogicalInput : uint8_t { phi_plus, phi_minus, psi_plus, psi_minus };

struct TrialConfig {
    EncodingParams enc;
    ChannelPoint ch;
    PairErrorRates per = PairErrorRates::none();
    DarkCountModel dc = DarkCountModel::off();
    LogicalInput input = LogicalInput::phi_plus;
    uint64_t seed = 0;
    uint64_t trials = 1;
    // Cross-validation mode: when set, flips are drawn per photon mode at
    // these rates (two draws per pair and component, net flip = exactly one
    // of the two) and `per` is ignored. The pair-level rates this induces
    // are 2e(1-e).
    std::optional<FlipRates> photon_flips = {};
};

struct TallyEstimate {
    double p_hat;
    double std_err;  // sqrt(p_hat * (1 - p_hat) / trials)
    uint64_t trials;
};

/// Raw counters of a Monte Carlo run. Error counters condition on the trial
/// being an overall success.
struct McTallies {
    uint64_t trials = 0;
    uint64_t success = 0;
    uint64_t sign_only_all = 0;
    uint64_t failure = 0;
    uint64_t succ_err_x = 0;     // symbol reconstruction wrong
    uint64_t succ_err_z = 0;     // sign reconstruction wrong
    uint64_t succ_err_x_only = 0;
    uint64_t succ_err_z_only = 0;
    uint64_t succ_err_both = 0;
    uint64_t succ_err_none = 0;

    McTallies& operator+=(const McTallies& other);

    /// Named estimates: success, sign_only_all and failure over all trials;
    /// x_error|success and z_error|success over the success count.
    std::map<std::string, TallyEstimate> estimates() const;

    static TallyEstimate make_estimate(uint64_t count, uint64_t denom);
};

/// Per-trial outcome record.
struct TrialOutcome {
    enum class Kind : uint8_t { success, sign_only_all, failure };
    Kind kind;
    Symbol symbol = Symbol::phi;  // reconstructed, valid on success
    Sign sign = Sign::plus;       // reconstructed, valid on success
    bool x_error = false;
    bool z_error = false;
};

/// Uniform sample of the lower-level Bell states consistent with a logical
/// input: block signs with minus-parity matching the logical sign, pair
/// symbols per block with psi-parity matching the block symbol, pair signs
/// all equal to the block sign.
struct Decomposition {
    Symbol block_symbol;
    Sign logical_sign;
    std::vector<Sign> block_signs;      // n entries
    std::vector<Symbol> pair_symbols;   // n*m entries, block-major
};

Decomposition sample_decomposition(LogicalInput input, const EncodingParams& enc, uint64_t seed, uint64_t trial);

/// One photon pair at a pair-level measurement: its (possibly flipped) state,
/// the loss flags of its two photons, and the random stream driving detector
/// dark counts for this site.
struct PairSite {
    PairState state;
    bool lost_a;
    bool lost_b;
    CounterRng noise;
};

/// One pair-level measurement, including dark-count conversions: a single
/// spurious click turns half of the affected successes into failures and a
/// quarter of the affected failures into spurious successes reading a random
/// state of the pair the setting can identify; a spurious click alongside a
/// lost photon restores normal two-click statistics, half success and half
/// failure.
B0Result run_b0(B0Type type, const PairState& state, bool lost_a, bool lost_b, const DarkCountModel& dc,
                CounterRng& rng);

struct BlockTruth {
    Symbol symbol;
    Sign sign;
};

/// One block-level measurement over m pair sites: psi-type attempts until a
/// success, a loss, or j consecutive failures, then the matching (or, absent
/// an anchor, a uniformly chosen) sign-type measurement on every remaining
/// pair. The sign is majority-voted over all sign readings, ties pessimistic;
/// the symbol is the psi-parity of the per-pair symbol readings.
B1Result run_b1(std::span<PairSite> pairs, const BlockTruth& truth, int j, const DarkCountModel& dc,
                CounterRng& block_rng);

/// One full trial: sample the decomposition, apply pair flips and photon
/// losses, run the n block measurements, and classify. The overall result is
/// a success when at least one block fully discriminates and none fails.
TrialOutcome run_cbm(const TrialConfig& cfg, uint64_t trial_index);

enum class Execution { serial, parallel };

/// Tally `cfg.trials` independent trials. Deterministic for a fixed seed:
/// serial and parallel execution, at any worker count, produce identical
/// tallies. `workers` <= 0 uses the runtime default.
McTallies estimate(const TrialConfig& cfg, Execution mode = Execution::parallel, int workers = 0);

}  // namespace cbmrep

#endif
