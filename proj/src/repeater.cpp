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

#include "cbmrep/repeater.hpp"

#include "cbmrep/binomial.hpp"
#include "cbmrep/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace cbmrep {

namespace {

constexpr double kUnderflowFloor = 1e-300;

int ceil_log2(int x) {
    return std::bit_width(static_cast<unsigned>(x - 1));
}

double overall_success(const BlockOutcomeProbs& probs, int n) {
    const double p = ipow(1.0 - probs.p_failure, n) - ipow(probs.p_sign_only, n);
    return std::max(0.0, p);
}

// (ratio)^links evaluated in log space; 0 when the base is not positive.
double chain_power(double ratio, double links, bool* underflow = nullptr) {
    if (ratio <= 0.0) {
        if (underflow != nullptr) {
            *underflow = true;
        }
        return 0.0;
    }
    if (ratio >= 1.0) {
        return 1.0;
    }
    const double log_value = links * std::log(ratio);
    if (log_value < std::log(kUnderflowFloor)) {
        if (underflow != nullptr) {
            *underflow = true;
        }
        return 0.0;
    }
    return std::exp(log_value);
}

}  // namespace

void HardwareParams::validate() const {
    auto prob = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!prob(eps_s) || !prob(eps_d) || !prob(lambda)) {
        throw std::invalid_argument("HardwareParams: efficiencies and rates must lie in [0,1]");
    }
    if (!(tau_s >= 0.0) || !(c_m_per_s > 0.0) || !(l_att_km > 0.0) || !(t0_s > 0.0)) {
        throw std::invalid_argument("HardwareParams: times, speed and lengths must be positive");
    }
}

double prep_time_s(int n, int m, double tau_s) {
    if (n < 1 || m < 1) {
        throw std::invalid_argument("prep_time_s: n and m must be >= 1");
    }
    return static_cast<double>(ceil_log2(m) + ceil_log2(n) + 2) * tau_s;
}

double repeater_loss(const EncodingParams& enc, const HardwareParams& hw) {
    hw.validate();
    const double tau_p = prep_time_s(enc.n, enc.m, hw.tau_s);
    const double stationary_km = hw.c_m_per_s * (tau_p + hw.tau_s) / 1000.0;
    return hw.eps_s * hw.eps_d * std::exp(-stationary_km / hw.l_att_km);
}

LinkPoint link_success(const EncodingParams& enc, const HardwareParams& hw, double l0_km, double e_d,
                       bool include_dark_counts, std::optional<double> eta0_override) {
    if (!(l0_km > 0.0)) {
        throw std::invalid_argument("link_success: spacing must be positive");
    }
    LinkPoint out{};
    out.tau_p_s = prep_time_s(enc.n, enc.m, hw.tau_s);
    out.eta0 = eta0_override ? *eta0_override : repeater_loss(enc, hw);
    out.eta_link = out.eta0 * std::exp(-l0_km / hw.l_att_km);

    const ChannelPoint one_way(out.eta_link, out.eta0);
    const double eta_half = out.eta0 * std::exp(-0.5 * l0_km / hw.l_att_km);
    const ChannelPoint symmetric(eta_half, eta_half);

    const DarkCountModel dc = include_dark_counts ? DarkCountModel(hw.lambda) : DarkCountModel::off();
    auto probs_at = [&](const ChannelPoint& ch) {
        return dc.enabled() ? block_probs_with_dark(enc, ch, dc) : block_outcome_probs(enc, ch);
    };
    out.probs = probs_at(one_way);
    out.p_success = overall_success(out.probs, enc.n);

    const double p_symmetric = overall_success(probs_at(symmetric), enc.n);
    if (std::abs(out.p_success - p_symmetric) > 1e-12) {
        throw std::logic_error("link_success: one-way and symmetric designs disagree");
    }

    const PairErrorRates per = pair_error_rates(depolarizing_to_flips(e_d));
    const BlockErrorRates ber = block_error_rates(enc, one_way, per);
    out.partition = pauli_partition(out.probs, enc.n, ber);
    return out;
}

ChainMetrics chain_metrics(const EncodingParams& enc, const HardwareParams& hw, double l_km, double l0_km,
                           double e_d, bool include_dark_counts, std::optional<double> eta0_override) {
    if (!(l0_km > 0.0) || l0_km > l_km) {
        throw std::invalid_argument("chain_metrics: need 0 < L0 <= L");
    }
    ChainMetrics out{};
    out.link = link_success(enc, hw, l0_km, e_d, include_dark_counts, eta0_override);
    out.links = l_km / l0_km;

    out.rt0 = chain_power(out.link.p_success, out.links, &out.rt0_underflow);
    const double photons_per_link = 2.0 * enc.total_photons();
    out.q_cost = out.rt0 > 0.0 ? photons_per_link * out.links / out.rt0
                               : std::numeric_limits<double>::infinity();

    const PauliPartition& part = out.link.partition;
    const double p = part.total();
    if (p > 0.0) {
        const double combo_x = part.p_identity - part.p_x + part.p_z - part.p_y;
        const double combo_z = part.p_identity + part.p_x - part.p_z - part.p_y;
        out.q_x = 0.5 * (1.0 - chain_power(combo_x / p, out.links));
        out.q_z = 0.5 * (1.0 - chain_power(combo_z / p, out.links));
    } else {
        out.q_x = 0.5;
        out.q_z = 0.5;
    }
    out.fidelity = (1.0 - out.q_x) * (1.0 - out.q_z);
    const double q_bar = 0.5 * (out.q_x + out.q_z);
    out.key_rate_per_t0 = std::max(out.rt0 * (1.0 - 2.0 * binary_entropy(q_bar)), 0.0);
    return out;
}

double binary_entropy(double q) {
    if (!(q >= 0.0 && q <= 1.0)) {
        throw std::invalid_argument("binary_entropy: argument must lie in [0,1]");
    }
    if (q == 0.0 || q == 1.0) {
        return 0.0;
    }
    return -q * std::log2(q) - (1.0 - q) * std::log2(1.0 - q);
}

double direct_transmission(int n, int m, double l_km, const HardwareParams& hw) {
    if (!(l_km >= 0.0)) {
        throw std::invalid_argument("direct_transmission: length must be non-negative");
    }
    const EncodingParams enc(n, m, 0);
    const double eta = repeater_loss(enc, hw) * std::exp(-l_km / hw.l_att_km);
    const double block_alive = 1.0 - ipow(1.0 - eta, m);  // at least one photon per block
    const double p = ipow(block_alive, n) - ipow(block_alive - ipow(eta, m), n);
    return std::max(0.0, p);
}

double single_photon_transmission(double l_km, const HardwareParams& hw) {
    if (!(l_km >= 0.0)) {
        throw std::invalid_argument("single_photon_transmission: length must be non-negative");
    }
    hw.validate();
    return std::exp(-l_km / hw.l_att_km);
}

}  // namespace cbmrep
