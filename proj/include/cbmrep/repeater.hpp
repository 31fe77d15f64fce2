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

#ifndef CBMREP_REPEATER_HPP
#define CBMREP_REPEATER_HPP

#include "cbmrep/noise.hpp"
#include "cbmrep/types.hpp"

#include <optional>

namespace cbmrep {

/// Hardware model of one repeater node and the fiber. Lengths in km, times
/// in seconds, speed of light in m/s; conversions happen once, inside the
/// formulas.
struct HardwareParams {
    double eps_s = 1.0;       // source efficiency
    double eps_d = 1.0;       // detector efficiency
    double tau_s = 150e-9;    // one measurement step with feedforward
    double c_m_per_s = 2e8;   // speed of light in fiber
    double l_att_km = 22.0;   // attenuation length
    double t0_s = 10e-6;      // repeater processing time, scales reported rates
    double lambda = 0.0;      // dark-count rate per detector

    void validate() const;
};

/// One building block evaluated at a repeater spacing.
struct LinkPoint {
    double eta0;       // per-photon survival through the stationary process
    double eta_link;   // eta0 attenuated over the spacing
    double tau_p_s;    // resource-state preparation time
    BlockOutcomeProbs probs;
    PauliPartition partition;
    double p_success;  // overall success probability of the block
};

/// End-to-end figures of a repeater chain.
struct ChainMetrics {
    double rt0;              // end-to-end transmission success probability
    double q_cost;           // average photons consumed per transmitted qubit
    double q_x;              // effective bit-flip rate at the receiver
    double q_z;              // effective sign-flip rate at the receiver
    double fidelity;
    double key_rate_per_t0;  // dimensionless; divide by t0 for Hz
    double links;            // L / L0
    bool rt0_underflow = false;
    LinkPoint link;
};

/// Average time to assemble the encoded resource pair from photon pairs with
/// tournament-style fusion: (ceil(log2 m) + ceil(log2 n) + 2) * tau.
double prep_time_s(int n, int m, double tau_s);

/// Survival probability of a photon through source, resource preparation and
/// measurement inside a node: eps_s * eps_d * exp(-c*(tau_p + tau)/L_att).
double repeater_loss(const EncodingParams& enc, const HardwareParams& hw);

/// Building-block evaluation at spacing l0_km. The one-way design
/// (traveling, stationary) and the symmetric design (both qubits meeting in
/// the middle) give the same probabilities; the evaluation checks this and
/// refuses to continue if the two routes ever disagree.
LinkPoint link_success(const EncodingParams& enc, const HardwareParams& hw, double l0_km, double e_d = 0.0,
                       bool include_dark_counts = false, std::optional<double> eta0_override = {});

/// Chain of length l_km with nodes every l0_km. The chain exponent is the
/// real-valued ratio l/l0. Dark counts are off unless requested.
ChainMetrics chain_metrics(const EncodingParams& enc, const HardwareParams& hw, double l_km, double l0_km,
                           double e_d, bool include_dark_counts = false,
                           std::optional<double> eta0_override = {});

/// Binary entropy in bits, continuous at 0 and 1.
double binary_entropy(double q);

/// Transmission probability of a parity-encoded qubit sent directly over
/// l_km: every block keeps at least one photon and at least one block
/// arrives intact.
double direct_transmission(int n, int m, double l_km, const HardwareParams& hw);

/// Survival of a bare photon over l_km of fiber.
double single_photon_transmission(double l_km, const HardwareParams& hw);

}  // namespace cbmrep

#endif
