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

#include "cbmrep/mc.hpp"

#include "cbmrep/binomial.hpp"

#include <array>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cbmrep {

namespace {

constexpr int kMaxBlockSize = 64;

// Slot layout of the per-(trial, block) random streams. Pair slots start at
// zero; block-level draws (sign coin, arbitrary-choice coin) use a slot far
// past any pair index.
constexpr uint64_t kBlockSlot = 0x40000000ULL;

struct Reading {
    bool measured = false;
    bool has_vote = false;
    Sign vote = Sign::plus;
    Symbol symbol = Symbol::phi;
};

bool logical_is_phi(LogicalInput input) {
    return input == LogicalInput::phi_plus || input == LogicalInput::phi_minus;
}

Sign logical_sign_of(LogicalInput input) {
    return (input == LogicalInput::phi_plus || input == LogicalInput::psi_plus) ? Sign::plus : Sign::minus;
}

PairState uniform_identified_state(B0Type type, CounterRng& rng) {
    switch (type) {
        case B0Type::b_psi:
            return PairState{Symbol::psi, rng.coin() ? Sign::minus : Sign::plus};
        case B0Type::b_plus:
            return PairState{rng.coin() ? Symbol::psi : Symbol::phi, Sign::plus};
        case B0Type::b_minus:
        default:
            return PairState{rng.coin() ? Symbol::psi : Symbol::phi, Sign::minus};
    }
}

B0Result plain_failure(B0Type type) {
    B0Result r{};
    r.kind = B0Result::Kind::failure;
    if (type == B0Type::b_plus) {
        r.has_sign_hint = true;
        r.sign_hint = Sign::minus;
    } else if (type == B0Type::b_minus) {
        r.has_sign_hint = true;
        r.sign_hint = Sign::plus;
    }
    return r;
}

// Outcome with both photons present and ideal detectors.
B0Result plain_measure(B0Type type, const PairState& state) {
    switch (type) {
        case B0Type::b_psi:
            if (state.symbol == Symbol::psi) {
                return B0Result{B0Result::Kind::success, state, false, Sign::plus, false};
            }
            return plain_failure(type);
        case B0Type::b_plus:
            if (state.sign == Sign::plus) {
                return B0Result{B0Result::Kind::success, state, false, Sign::plus, false};
            }
            return plain_failure(type);
        case B0Type::b_minus:
        default:
            if (state.sign == Sign::minus) {
                return B0Result{B0Result::Kind::success, state, false, Sign::plus, false};
            }
            return plain_failure(type);
    }
}

}  // namespace

B0Result run_b0(B0Type type, const PairState& state, bool lost_a, bool lost_b, const DarkCountModel& dc,
                CounterRng& rng) {
    const int photons = (lost_a ? 0 : 1) + (lost_b ? 0 : 1);

    int spurious_clicks = 0;
    if (dc.enabled()) {
        const double keep = 1.0 - dc.lambda;
        const double p_none = keep * keep * keep * keep;
        const double u = rng.next_unit();
        if (u >= p_none) {
            spurious_clicks = (u < p_none + dc.gamma) ? 1 : 2;
        }
    }

    if (photons == 2) {
        B0Result normal = plain_measure(type, state);
        if (spurious_clicks == 0) {
            return normal;
        }
        if (normal.kind == B0Result::Kind::success) {
            if (spurious_clicks >= 2 || rng.coin()) {
                B0Result r = plain_failure(type);
                r.spoiled_success = true;
                return r;
            }
            return normal;  // the extra click lands where it reads as the same success
        }
        if (spurious_clicks == 1 && rng.next_unit() < 0.25) {
            return B0Result{B0Result::Kind::success, uniform_identified_state(type, rng), false, Sign::plus, false};
        }
        return normal;
    }

    if (photons == 1 && spurious_clicks == 1) {
        // A spurious click stands in for the lost photon: two clicks total,
        // half success and half failure, the success reading a random
        // identifiable state.
        if (rng.coin()) {
            return B0Result{B0Result::Kind::success, uniform_identified_state(type, rng), false, Sign::plus, false};
        }
        return plain_failure(type);
    }
    if (photons == 1 && spurious_clicks >= 2) {
        return plain_failure(type);
    }
    return B0Result{B0Result::Kind::loss, PairState{Symbol::phi, Sign::plus}, false, Sign::plus, false};
}

B1Result run_b1(std::span<PairSite> pairs, const BlockTruth& truth, int j, const DarkCountModel& dc,
                CounterRng& block_rng) {
    const int m = static_cast<int>(pairs.size());
    if (m < 1 || m > kMaxBlockSize) {
        throw std::invalid_argument("run_b1: block size outside the simulator cap");
    }
    std::array<Reading, kMaxBlockSize> readings{};

    int idx = 0;
    int fails = 0;
    bool psi_success = false;
    bool loss_exit = false;
    Sign anchor = Sign::plus;

    while (idx < m && fails < j && !psi_success && !loss_exit) {
        PairSite& site = pairs[static_cast<size_t>(idx)];
        const B0Result r = run_b0(B0Type::b_psi, site.state, site.lost_a, site.lost_b, dc, site.noise);
        Reading& rd = readings[static_cast<size_t>(idx)];
        switch (r.kind) {
            case B0Result::Kind::success:
                rd = Reading{true, true, r.identified.sign, Symbol::psi};
                psi_success = true;
                anchor = r.identified.sign;
                break;
            case B0Result::Kind::failure:
                // A psi-type failure certifies the pair as phi-like but says
                // nothing about its sign.
                rd = Reading{true, false, Sign::plus, Symbol::phi};
                ++fails;
                break;
            case B0Result::Kind::loss:
                loss_exit = true;
                break;
        }
        ++idx;
    }

    bool guessed_after_fails = false;
    Sign type_sign;
    if (psi_success) {
        type_sign = anchor;
    } else {
        type_sign = block_rng.coin() ? Sign::minus : Sign::plus;
        guessed_after_fails = !loss_exit;
    }
    const B0Type phase2_type = type_sign == Sign::plus ? B0Type::b_plus : B0Type::b_minus;

    bool spoiled = false;
    for (; idx < m; ++idx) {
        PairSite& site = pairs[static_cast<size_t>(idx)];
        const B0Result r = run_b0(phase2_type, site.state, site.lost_a, site.lost_b, dc, site.noise);
        Reading& rd = readings[static_cast<size_t>(idx)];
        switch (r.kind) {
            case B0Result::Kind::success:
                rd = Reading{true, true, r.identified.sign, r.identified.symbol};
                break;
            case B0Result::Kind::failure:
                // The failure still pins the sign (opposite to the setting).
                // The symbol reading is taken from the pair itself: a sign
                // mismatch alone does not erase the symbol information in
                // this model.
                rd = Reading{true, true, r.sign_hint, site.state.symbol};
                if (r.spoiled_success) {
                    spoiled = true;
                }
                break;
            case B0Result::Kind::loss:
                break;
        }
    }

    int votes_right = 0;
    int votes_wrong = 0;
    bool all_measured = true;
    int psi_readings = 0;
    for (int i = 0; i < m; ++i) {
        const Reading& rd = readings[static_cast<size_t>(i)];
        if (!rd.measured) {
            all_measured = false;
            continue;
        }
        if (rd.symbol == Symbol::psi) {
            ++psi_readings;
        }
        if (rd.has_vote) {
            (rd.vote == truth.sign ? votes_right : votes_wrong)++;
        }
    }

    if (!psi_success && votes_right + votes_wrong == 0) {
        return B1Result{B1Result::Kind::failure, Symbol::phi, Sign::plus};
    }

    const Sign sign_reading = votes_wrong >= votes_right ? flip(truth.sign) : truth.sign;

    const bool full = all_measured &&
                      (psi_success || (guessed_after_fails && type_sign == truth.sign && !spoiled));
    if (full) {
        const Symbol symbol_reading = (psi_readings % 2 == 1) ? Symbol::psi : Symbol::phi;
        return B1Result{B1Result::Kind::success, symbol_reading, sign_reading};
    }
    return B1Result{B1Result::Kind::sign_only, Symbol::phi, sign_reading};
}

Decomposition sample_decomposition(LogicalInput input, const EncodingParams& enc, uint64_t seed, uint64_t trial) {
    Decomposition d;
    d.block_symbol = logical_is_phi(input) ? Symbol::phi : Symbol::psi;
    d.logical_sign = logical_sign_of(input);
    d.block_signs.resize(static_cast<size_t>(enc.n));
    d.pair_symbols.resize(static_cast<size_t>(enc.n) * static_cast<size_t>(enc.m));

    int minus_count = 0;
    for (int b = 0; b < enc.n; ++b) {
        CounterRng block_rng(seed, trial, static_cast<uint64_t>(b), kBlockSlot);
        Sign s;
        if (b < enc.n - 1) {
            s = block_rng.coin() ? Sign::minus : Sign::plus;
        } else {
            // Fix the last block so the minus-parity matches the logical sign.
            const bool want_odd = d.logical_sign == Sign::minus;
            s = ((minus_count % 2 == 1) != want_odd) ? Sign::minus : Sign::plus;
        }
        if (s == Sign::minus) {
            ++minus_count;
        }
        d.block_signs[static_cast<size_t>(b)] = s;

        int psi_count = 0;
        for (int p = 0; p < enc.m; ++p) {
            CounterRng pair_rng(seed, trial, static_cast<uint64_t>(b), static_cast<uint64_t>(p));
            Symbol sym;
            if (p < enc.m - 1) {
                sym = pair_rng.coin() ? Symbol::psi : Symbol::phi;
            } else {
                const bool want_odd = d.block_symbol == Symbol::psi;
                sym = ((psi_count % 2 == 1) != want_odd) ? Symbol::psi : Symbol::phi;
            }
            if (sym == Symbol::psi) {
                ++psi_count;
            }
            d.pair_symbols[static_cast<size_t>(b) * static_cast<size_t>(enc.m) + static_cast<size_t>(p)] = sym;
        }
    }
    return d;
}

TrialOutcome run_cbm(const TrialConfig& cfg, uint64_t trial_index) {
    const EncodingParams& enc = cfg.enc;
    if (enc.m > kMaxBlockSize) {
        throw std::invalid_argument("run_cbm: block size above simulator cap");
    }
    const Symbol block_symbol = logical_is_phi(cfg.input) ? Symbol::phi : Symbol::psi;
    const Sign logical_sign = logical_sign_of(cfg.input);
    const double loss_a = 1.0 - cfg.ch.eta;
    const double loss_b = 1.0 - cfg.ch.eta_prime;

    int minus_count = 0;
    int failures = 0;
    int successes = 0;
    int wrong_symbols = 0;
    bool sign_parity_error = false;

    std::array<PairSite, kMaxBlockSize> sites;
    for (int b = 0; b < enc.n; ++b) {
        CounterRng block_rng(cfg.seed, trial_index, static_cast<uint64_t>(b), kBlockSlot);
        Sign block_sign;
        if (b < enc.n - 1) {
            block_sign = block_rng.coin() ? Sign::minus : Sign::plus;
        } else {
            const bool want_odd = logical_sign == Sign::minus;
            block_sign = ((minus_count % 2 == 1) != want_odd) ? Sign::minus : Sign::plus;
        }
        if (block_sign == Sign::minus) {
            ++minus_count;
        }

        int psi_count = 0;
        for (int p = 0; p < enc.m; ++p) {
            CounterRng pair_rng(cfg.seed, trial_index, static_cast<uint64_t>(b), static_cast<uint64_t>(p));
            Symbol sym;
            if (p < enc.m - 1) {
                sym = pair_rng.coin() ? Symbol::psi : Symbol::phi;
            } else {
                const bool want_odd = block_symbol == Symbol::psi;
                sym = ((psi_count % 2 == 1) != want_odd) ? Symbol::psi : Symbol::phi;
            }
            if (sym == Symbol::psi) {
                ++psi_count;
            }
            PairState state{sym, block_sign};
            if (cfg.photon_flips) {
                // Per-mode injection: flips on both photons of a pair cancel.
                const FlipRates& fr = *cfg.photon_flips;
                const bool x_a = pair_rng.bernoulli(fr.e_x);
                const bool x_b = pair_rng.bernoulli(fr.e_x);
                if (x_a != x_b) {
                    state.symbol = flip(state.symbol);
                }
                const bool z_a = pair_rng.bernoulli(fr.e_z);
                const bool z_b = pair_rng.bernoulli(fr.e_z);
                if (z_a != z_b) {
                    state.sign = flip(state.sign);
                }
            } else {
                if (pair_rng.bernoulli(cfg.per.e0_x)) {
                    state.symbol = flip(state.symbol);
                }
                if (pair_rng.bernoulli(cfg.per.e0_z)) {
                    state.sign = flip(state.sign);
                }
            }
            const bool la = pair_rng.bernoulli(loss_a);
            const bool lb = pair_rng.bernoulli(loss_b);
            sites[static_cast<size_t>(p)] = PairSite{state, la, lb, pair_rng};
        }

        const B1Result r = run_b1(std::span<PairSite>(sites.data(), static_cast<size_t>(enc.m)),
                                  BlockTruth{block_symbol, block_sign}, enc.j, cfg.dc, block_rng);
        switch (r.kind) {
            case B1Result::Kind::failure:
                ++failures;
                break;
            case B1Result::Kind::success:
                ++successes;
                if (r.symbol != block_symbol) {
                    ++wrong_symbols;
                }
                if (r.sign != block_sign) {
                    sign_parity_error = !sign_parity_error;
                }
                break;
            case B1Result::Kind::sign_only:
                if (r.sign != block_sign) {
                    sign_parity_error = !sign_parity_error;
                }
                break;
        }
    }

    TrialOutcome out{};
    if (failures > 0) {
        out.kind = TrialOutcome::Kind::failure;
        return out;
    }
    if (successes == 0) {
        out.kind = TrialOutcome::Kind::sign_only_all;
        return out;
    }
    out.kind = TrialOutcome::Kind::success;
    // Symbol by majority over the fully discriminated blocks, exact halves
    // pessimistic; sign by minus-parity over every block reading.
    out.x_error = 2 * wrong_symbols >= successes;
    out.z_error = sign_parity_error;
    out.symbol = out.x_error ? flip(block_symbol) : block_symbol;
    out.sign = out.z_error ? flip(logical_sign) : logical_sign;
    return out;
}

McTallies& McTallies::operator+=(const McTallies& other) {
    trials += other.trials;
    success += other.success;
    sign_only_all += other.sign_only_all;
    failure += other.failure;
    succ_err_x += other.succ_err_x;
    succ_err_z += other.succ_err_z;
    succ_err_x_only += other.succ_err_x_only;
    succ_err_z_only += other.succ_err_z_only;
    succ_err_both += other.succ_err_both;
    succ_err_none += other.succ_err_none;
    return *this;
}

TallyEstimate McTallies::make_estimate(uint64_t count, uint64_t denom) {
    if (denom == 0) {
        return TallyEstimate{0.0, 0.0, 0};
    }
    const double p = static_cast<double>(count) / static_cast<double>(denom);
    return TallyEstimate{p, std::sqrt(p * (1.0 - p) / static_cast<double>(denom)), denom};
}

std::map<std::string, TallyEstimate> McTallies::estimates() const {
    std::map<std::string, TallyEstimate> out;
    out["success"] = make_estimate(success, trials);
    out["sign_only_all"] = make_estimate(sign_only_all, trials);
    out["failure"] = make_estimate(failure, trials);
    out["x_error|success"] = make_estimate(succ_err_x, success);
    out["z_error|success"] = make_estimate(succ_err_z, success);
    return out;
}

namespace {

void tally_one(McTallies& t, const TrialOutcome& o) {
    ++t.trials;
    switch (o.kind) {
        case TrialOutcome::Kind::failure:
            ++t.failure;
            return;
        case TrialOutcome::Kind::sign_only_all:
            ++t.sign_only_all;
            return;
        case TrialOutcome::Kind::success:
            break;
    }
    ++t.success;
    if (o.x_error) {
        ++t.succ_err_x;
    }
    if (o.z_error) {
        ++t.succ_err_z;
    }
    if (o.x_error && o.z_error) {
        ++t.succ_err_both;
    } else if (o.x_error) {
        ++t.succ_err_x_only;
    } else if (o.z_error) {
        ++t.succ_err_z_only;
    } else {
        ++t.succ_err_none;
    }
}

}  // namespace

McTallies estimate(const TrialConfig& cfg, Execution mode, int workers) {
    if (cfg.trials < 1) {
        throw std::invalid_argument("estimate: trials must be >= 1");
    }
    McTallies total;
    const int64_t trials = static_cast<int64_t>(cfg.trials);

#ifdef _OPENMP
    if (mode == Execution::parallel) {
        const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel num_threads(threads)
        {
            McTallies local;
#pragma omp for schedule(static) nowait
            for (int64_t i = 0; i < trials; ++i) {
                tally_one(local, run_cbm(cfg, static_cast<uint64_t>(i)));
            }
#pragma omp critical
            total += local;
        }
        return total;
    }
#else
    (void)workers;
    (void)mode;
#endif
    for (int64_t i = 0; i < trials; ++i) {
        tally_one(total, run_cbm(cfg, static_cast<uint64_t>(i)));
    }
    return total;
}

}  // namespace cbmrep
