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

#ifndef CBMREP_TYPES_HPP
#define CBMREP_TYPES_HPP

#include <stdexcept>
#include <string>

namespace cbmrep {

/// Structure of a parity-encoded qubit and the feedforward policy of the
/// block-level Bell measurement.
///
/// A logical qubit is made of `n` blocks of `m` photons each (n*m photons in
/// total). Within a block, the psi-discriminating pair measurement is retried
/// on fresh photon pairs until it succeeds, detects a loss, or has failed `j`
/// consecutive times, after which a sign-discriminating measurement is applied
/// to all remaining pairs.
struct EncodingParams {
    int n;  // blocks per logical qubit
    int m;  // photons per block
    int j;  // maximum consecutive psi-type attempts, 0 <= j <= m-1

    EncodingParams(int n_blocks, int m_photons, int j_attempts)
        : n(n_blocks), m(m_photons), j(j_attempts) {
        if (n < 1) {
            throw std::invalid_argument("EncodingParams: n must be >= 1, got " + std::to_string(n));
        }
        if (m < 1) {
            throw std::invalid_argument("EncodingParams: m must be >= 1, got " + std::to_string(m));
        }
        if (j < 0 || j > m - 1) {
            throw std::invalid_argument(
                "EncodingParams: j must lie in [0, m-1], got j=" + std::to_string(j) +
                " for m=" + std::to_string(m));
        }
    }

    int total_photons() const { return n * m; }
};

/// Per-photon survival rates of the two qubits entering a Bell measurement.
/// All loss-only outcome probabilities depend on the two rates only through
/// their product.
struct ChannelPoint {
    double eta;        // survival rate of each photon of qubit 1
    double eta_prime;  // survival rate of each photon of qubit 2

    ChannelPoint(double eta_1, double eta_2) : eta(eta_1), eta_prime(eta_2) {
        if (!(eta >= 0.0 && eta <= 1.0) || !(eta_prime >= 0.0 && eta_prime <= 1.0)) {
            throw std::invalid_argument("ChannelPoint: survival rates must lie in [0,1]");
        }
    }

    static ChannelPoint from_product(double eta_eta_prime) {
        return ChannelPoint(eta_eta_prime, 1.0);
    }

    double product() const { return eta * eta_prime; }
};

/// Outcome distribution of one block-level measurement: full discrimination,
/// failure, or sign-only discrimination. Components sum to one.
struct BlockOutcomeProbs {
    double p_success;
    double p_failure;
    double p_sign_only;
};

}  // namespace cbmrep

#endif
