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

#include "cbmrep/core.hpp"

#include "cbmrep/binomial.hpp"

#include <algorithm>
#include <cmath>

namespace cbmrep {

const BinomialTable& BinomialTable::shared() {
    static const BinomialTable table(256);
    return table;
}

double block_success_prob(const EncodingParams& enc, const ChannelPoint& ch) {
    const double retain = 1.0 - std::ldexp(1.0, -(enc.j + 1));
    return retain * ipow(ch.product(), enc.m);
}

double block_failure_prob(const EncodingParams& enc, const ChannelPoint& ch) {
    const double t = ch.product();
    double total = 0.0;
    for (int l = enc.m - enc.j; l <= enc.m; ++l) {
        total += ipow(0.5 * t, enc.m - l) * ipow(1.0 - t, l);
    }
    return total;
}

double block_failure_prob_alt(const EncodingParams& enc, const ChannelPoint& ch) {
    const BinomialTable& table = BinomialTable::shared();
    const int m = enc.m;
    const int j = enc.j;
    const double eta = ch.eta;
    const double etap = ch.eta_prime;

    double total = 0.0;
    for (int l1 = 0; l1 <= m; ++l1) {
        for (int l2 = 0; l2 <= m; ++l2) {
            if (l1 + l2 < m - j) {
                continue;  // too few losses for any failure history
            }
            // Histories are split by l, the number of pair measurements hit
            // by loss; of those, l_d = l1 + l2 - l lose both photons.
            double p_events = 0.0;
            const int l_lo = std::max(m - j, std::max(l1, l2));
            const int l_hi = std::min(l1 + l2, m);
            for (int l = l_lo; l <= l_hi; ++l) {
                const int l_d = l1 + l2 - l;
                const double ways = table.choose(l, l_d) * table.choose(l - l_d, l1 - l_d);
                p_events += ipow(0.5, m - l) * ways;
            }
            if (p_events == 0.0) {
                continue;
            }
            p_events /= table.choose(m, l1) * table.choose(m, l2);
            const double loss_weight = table.choose(m, l1) * ipow(eta, m - l1) * ipow(1.0 - eta, l1) *
                                       table.choose(m, l2) * ipow(etap, m - l2) * ipow(1.0 - etap, l2);
            total += p_events * loss_weight;
        }
    }
    return total;
}

BlockOutcomeProbs block_outcome_probs(const EncodingParams& enc, const ChannelPoint& ch) {
    const double p_s = block_success_prob(enc, ch);
    const double p_f = block_failure_prob(enc, ch);
    return BlockOutcomeProbs{p_s, p_f, std::max(0.0, 1.0 - p_s - p_f)};
}

double cbm_success_prob(const EncodingParams& enc, const ChannelPoint& ch) {
    const double p_s = block_success_prob(enc, ch);
    const double p_f = block_failure_prob(enc, ch);
    const double p = ipow(1.0 - p_f, enc.n) - ipow(1.0 - p_s - p_f, enc.n);
    return std::max(0.0, p);
}

double lossless_success_prob(const EncodingParams& enc) {
    return 1.0 - std::ldexp(1.0, -(enc.j + 1) * enc.n);
}

double linear_optics_bound(int n_photons) {
    if (n_photons < 1) {
        throw std::invalid_argument("linear_optics_bound: photon count must be >= 1");
    }
    return 1.0 - std::ldexp(1.0, -n_photons);
}

BestJ best_over_j(int n, int m, const ChannelPoint& ch) {
    BestJ best{0, -1.0};
    for (int j = 0; j <= m - 1; ++j) {
        const double p = cbm_success_prob(EncodingParams(n, m, j), ch);
        if (p > best.p_success) {
            best = BestJ{j, p};
        }
    }
    return best;
}

}  // namespace cbmrep
