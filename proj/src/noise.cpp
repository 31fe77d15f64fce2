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

#include "cbmrep/noise.hpp"

#include "cbmrep/binomial.hpp"
#include "cbmrep/core.hpp"

#include <algorithm>
#include <cmath>

namespace cbmrep {

namespace {

constexpr double kDarkCountValidityCap = 1e-3;
constexpr double kDegenerateDenominator = 1e-15;

// P[at least ceil(count/2) of count voters flipped], the chance a majority
// vote over `count` sign readings goes wrong. Exact half splits count as
// errors.
double vote_failure(int count, double flip_rate, const BinomialTable& table) {
    if (count <= 0) {
        return 0.0;
    }
    return binomial_tail(count, (count + 1) / 2, flip_rate, table);
}

}  // namespace

DarkCountModel::DarkCountModel(double lambda_per_detector) : lambda(lambda_per_detector) {
    if (!(lambda >= 0.0)) {
        throw std::invalid_argument("DarkCountModel: lambda must be non-negative");
    }
    if (lambda > kDarkCountValidityCap) {
        throw std::invalid_argument("DarkCountModel: lambda above validity cap 1e-3");
    }
    const double keep = 1.0 - lambda;
    gamma = 4.0 * lambda * keep * keep * keep;
}

FlipRates depolarizing_to_flips(double e_d) {
    if (!(e_d >= 0.0 && e_d <= 1.0)) {
        throw std::invalid_argument("depolarizing_to_flips: e_d must lie in [0,1]");
    }
    return FlipRates{0.5 * e_d, 0.5 * e_d};
}

PairErrorRates pair_error_rates(const FlipRates& fr) {
    return PairErrorRates{2.0 * fr.e_x * (1.0 - fr.e_x), 2.0 * fr.e_z * (1.0 - fr.e_z)};
}

BlockErrorRates block_error_rates(const EncodingParams& enc, const ChannelPoint& ch, const PairErrorRates& per) {
    const BinomialTable& table = BinomialTable::shared();
    const int m = enc.m;
    const int j = enc.j;
    const double t = ch.product();

    BlockErrorRates out{};

    // A full discrimination misreads the block symbol when an odd number of
    // its m pair readings carry bit flips.
    out.e1_x_success = odd_parity_prob(m, per.e0_x);

    // Sign flips on the success path: after q failed psi-type attempts the
    // sign is voted over the m-q remaining readings. The q = j term is the
    // all-failures branch with a lucky arbitrary choice.
    double z_success = 0.0;
    for (int q = 0; q <= j; ++q) {
        z_success += std::ldexp(1.0, -(q + 1)) * vote_failure(m - q, per.e0_z, table);
    }
    out.e1_z_success = z_success / (1.0 - std::ldexp(1.0, -(j + 1)));

    // Sign flips on the sign-only path, weighted by the probability of each
    // loss/retry history and voted over the readings that history leaves.
    const double p_s = block_success_prob(enc, ch);
    const double p_f = block_failure_prob(enc, ch);
    const double p_sign_only = 1.0 - p_s - p_f;
    if (p_sign_only < kDegenerateDenominator) {
        out.e1_z_sign_only = 0.0;
        out.degenerate_sign_only = true;
        return out;
    }
    double z_sign_only = 0.0;
    for (int q = 0; q <= j - 1; ++q) {
        const double reach = ipow(0.5 * t, q);
        const double branch = 1.0 - 0.5 * t - 0.5 * ipow(t, m - q) - ipow(1.0 - t, m - q);
        z_sign_only += reach * branch * vote_failure(m - 1 - q, per.e0_z, table);
    }
    {
        const double reach = ipow(0.5 * t, j);
        const double branch = 1.0 - 0.5 * ipow(t, m - j) - ipow(1.0 - t, m - j);
        z_sign_only += reach * branch * vote_failure(m - j, per.e0_z, table);
    }
    out.e1_z_sign_only = z_sign_only / p_sign_only;
    return out;
}

PauliPartition pauli_partition(const BlockOutcomeProbs& probs, int n_blocks, const BlockErrorRates& ber) {
    const BinomialTable& table = BinomialTable::shared();
    const int n = n_blocks;
    const double p_s = probs.p_success;
    const double p_so = probs.p_sign_only;

    PauliPartition part{0.0, 0.0, 0.0, 0.0};
    for (int k = 1; k <= n; ++k) {
        const double weight = table.choose(n, k) * ipow(p_s, k) * ipow(p_so, n - k);
        if (weight == 0.0) {
            continue;
        }
        // Symbol vote over the k full discriminations.
        const double xr = vote_failure(k, ber.e1_x_success, table);
        // Sign parity over all n block readings: flipped when the total flip
        // count across success and sign-only blocks is odd.
        const double zr = odd_parity_prob(k, ber.e1_z_success) * even_parity_prob(n - k, ber.e1_z_sign_only) +
                          even_parity_prob(k, ber.e1_z_success) * odd_parity_prob(n - k, ber.e1_z_sign_only);
        part.p_x += weight * xr * (1.0 - zr);
        part.p_y += weight * (1.0 - xr) * zr;
        part.p_z += weight * xr * zr;
        part.p_identity += weight * (1.0 - xr) * (1.0 - zr);
    }
    return part;
}

PauliPartition pauli_partition(const EncodingParams& enc, const ChannelPoint& ch, const BlockErrorRates& ber) {
    return pauli_partition(block_outcome_probs(enc, ch), enc.n, ber);
}

BlockOutcomeProbs block_probs_with_dark(const EncodingParams& enc, const ChannelPoint& ch, const DarkCountModel& dc) {
    const BinomialTable& table = BinomialTable::shared();
    const int m = enc.m;
    const int j = enc.j;
    const double t = ch.product();
    const double g = dc.gamma;
    const double fail_rate = 0.5 + g / 8.0;  // per-pair failure reading, photons present

    // Success: no pair lost, and the psi-type stage does not run through j
    // failure readings followed by either a wrong arbitrary choice or a
    // dark-count-spoiled sign measurement.
    double spoiled = 0.0;
    for (int k = 1; k <= m - j; ++k) {
        spoiled += ipow(0.5, k) * table.choose(m - j, k) * ipow(g, k) * ipow(1.0 - g, m - j - k);
    }
    const double p_s = (1.0 - ipow(fail_rate, j) * (0.5 + 0.5 * spoiled)) * ipow(ch.eta, m) * ipow(ch.eta_prime, m);

    double p_f = 0.0;
    for (int l = m - j; l <= m; ++l) {
        p_f += ipow(fail_rate * t, m - l) * ipow(1.0 - t, l);
    }
    return BlockOutcomeProbs{p_s, p_f, std::max(0.0, 1.0 - p_s - p_f)};
}

}  // namespace cbmrep
