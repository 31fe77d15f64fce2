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

// End-to-end acceptance suite. Each criterion prints exactly one PASS/FAIL
// line; the exit code is the number of failed criteria. Tolerances are fixed
// here, in code, and are not configurable.

#include "cbmrep/binomial.hpp"
#include "cbmrep/core.hpp"
#include "cbmrep/fixtures.hpp"
#include "cbmrep/mc.hpp"
#include "cbmrep/noise.hpp"
#include "cbmrep/optimizer.hpp"
#include "cbmrep/repeater.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

namespace {

using namespace cbmrep;
using Clock = std::chrono::steady_clock;

constexpr uint64_t kMcSeed = 20260808;
constexpr uint64_t kMcTrials = 1000000;

struct Criterion {
    std::string name;
    bool pass = true;
    std::vector<std::string> notes;
    double seconds = 0.0;

    explicit Criterion(std::string criterion_name) : name(std::move(criterion_name)) {}

    void require(bool ok, const std::string& detail) {
        if (!ok) {
            pass = false;
            notes.push_back(detail);
        }
    }
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// z = (p_hat - p) / sigma(p) with the analytic binomial spread.
double zscore(double p_hat, double p, double trials) {
    const double sigma = std::sqrt(p * (1.0 - p) / trials);
    if (sigma == 0.0) {
        return p_hat == p ? 0.0 : 1e9;
    }
    return (p_hat - p) / sigma;
}

// --------------------------------------------------------------------------

Criterion criterion_success_table() {
    Criterion c("criterion 1: published success-probability table, 30 entries within 0.01 pp");
    const auto start = Clock::now();
    using namespace cbmrep::fixtures;
    for (const SuccessTableRow& row : kSuccessTable) {
        for (size_t i = 0; i < kSuccessTableEtas.size(); ++i) {
            const double eta = kSuccessTableEtas[i];
            const BestJ best = best_over_j(row.n, row.m, ChannelPoint(eta, 1.0));
            const double delta = 100.0 * best.p_success - row.cbm_percent[i];
            c.require(std::abs(delta) <= 0.01, "(" + std::to_string(row.n) + "," + std::to_string(row.m) +
                                                   ") eta=" + fmt(eta) + " off by " + fmt(delta) + " pp");
        }
    }
    c.seconds = seconds_since(start);
    c.require(c.seconds < 1.0, "runtime " + fmt(c.seconds) + " s exceeds 1 s");
    return c;
}

Criterion criterion_chain_check() {
    Criterion c("criterion 2: 1000 km chain figures at the published optimum");
    const auto start = Clock::now();
    HardwareParams hw;  // eps_s = eps_d = 1, tau 150 ns, L_att 22 km, c 2e8 m/s
    const ChainMetrics cm = chain_metrics(EncodingParams(13, 6, 2), hw, 1000.0, 1.7, 5.6e-5);
    c.require(std::abs(cm.link.eta0 - 0.986) <= 1e-3, "eta0 = " + fmt(cm.link.eta0));
    c.require(cm.link.tau_p_s == 1.35e-6, "tau_p = " + fmt(cm.link.tau_p_s) + " s, expected exactly 1.35e-6");
    c.require(std::abs(cm.rt0 - 0.702) <= 0.005, "Rt0 = " + fmt(cm.rt0));
    c.require(std::abs(cm.q_cost - 1.3e5) <= 0.05 * 1.3e5, "Q = " + fmt(cm.q_cost));
    c.seconds = seconds_since(start);
    c.require(c.seconds < 1.0, "runtime " + fmt(c.seconds) + " s exceeds 1 s");
    return c;
}

Criterion criterion_optimizer_table() {
    Criterion c("criterion 3: optimizer reproduces the six published strategies");
    const auto start = Clock::now();
    using namespace cbmrep::fixtures;
    for (const OptimalStrategyRow& row : kOptimalStrategies) {
        HardwareParams hw;
        hw.eps_s = row.eps_product;
        const OptReport report = optimize(hw, row.l_km, kTableDepolarizingRate, SearchSpace{}, {}, 1);
        const Candidate& best = report.best;
        const std::string tag = "L=" + fmt(row.l_km) + " eps=" + fmt(row.eps_product) + ": ";
        c.require(std::abs(best.metrics.q_cost - row.q_min) <= 0.05 * row.q_min,
                  tag + "Q = " + fmt(best.metrics.q_cost) + " vs " + fmt(row.q_min));
        c.require(std::abs(best.metrics.rt0 - row.rt0) <= 0.02,
                  tag + "Rt0 = " + fmt(best.metrics.rt0) + " vs " + fmt(row.rt0));
        c.require(std::abs(best.metrics.fidelity - row.fidelity) <= 0.01,
                  tag + "F = " + fmt(best.metrics.fidelity) + " vs " + fmt(row.fidelity));
        const ChainMetrics again = chain_metrics(best.enc, hw, row.l_km, best.l0_km, kTableDepolarizingRate);
        c.require(std::abs(again.q_cost - row.q_min) <= 0.05 * row.q_min,
                  tag + "re-evaluated Q = " + fmt(again.q_cost));
    }
    c.seconds = seconds_since(start);
    c.require(c.seconds < 600.0, "runtime " + fmt(c.seconds) + " s exceeds 10 min");
    return c;
}

Criterion criterion_bound_suite() {
    Criterion c("criterion 4: photon-count bound saturated losslessly and never exceeded");
    const auto start = Clock::now();
    for (int n = 1; n <= 20; ++n) {
        for (int m = 1; n * m <= 20 && m <= 20; ++m) {
            const EncodingParams enc(n, m, m - 1);
            const double p = cbm_success_prob(enc, ChannelPoint(1.0, 1.0));
            c.require(p == linear_optics_bound(n * m),
                      "(" + std::to_string(n) + "," + std::to_string(m) + ") lossless " + fmt(p));
        }
    }
    std::mt19937 gen(4);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int sample = 0; sample < 2000; ++sample) {
        const int n = 1 + static_cast<int>(gen() % 24);
        const int m = 1 + static_cast<int>(gen() % 8);
        const int j = static_cast<int>(gen() % static_cast<unsigned>(m));
        const double eta = 0.3 + 0.7 * unit(gen);
        const double eta_prime = 0.3 + 0.7 * unit(gen);
        const double p = cbm_success_prob(EncodingParams(n, m, j), ChannelPoint(eta, eta_prime));
        c.require(p <= linear_optics_bound(n * m) + 1e-12, "bound exceeded at n=" + std::to_string(n));
    }
    c.seconds = seconds_since(start);
    return c;
}

Criterion criterion_oracle_equivalence() {
    Criterion c("criterion 5: Monte Carlo protocol oracle agrees with every closed form");
    const auto start = Clock::now();
    using namespace cbmrep::fixtures;

    // Loss-only outcome classes over the published grid, retry depth
    // optimized per point exactly as in criterion 1.
    for (const SuccessTableRow& row : kSuccessTable) {
        for (const double eta : kSuccessTableEtas) {
            const ChannelPoint ch(eta, 1.0);
            const BestJ best = best_over_j(row.n, row.m, ch);
            const EncodingParams enc(row.n, row.m, best.j);
            const TrialConfig cfg{enc, ch, PairErrorRates::none(), DarkCountModel::off(),
                                  LogicalInput::phi_plus, kMcSeed, kMcTrials};
            const McTallies t = estimate(cfg);
            const BlockOutcomeProbs probs = block_outcome_probs(enc, ch);
            const double trials = static_cast<double>(t.trials);
            const double p_success = cbm_success_prob(enc, ch);
            const double p_failure = 1.0 - ipow(1.0 - probs.p_failure, enc.n);
            const double p_all_sign = ipow(probs.p_sign_only, enc.n);
            const std::string tag =
                "(" + std::to_string(row.n) + "," + std::to_string(row.m) + ") eta=" + fmt(eta) + " ";
            const double z_s = zscore(static_cast<double>(t.success) / trials, p_success, trials);
            const double z_f = zscore(static_cast<double>(t.failure) / trials, p_failure, trials);
            const double z_o = zscore(static_cast<double>(t.sign_only_all) / trials, p_all_sign, trials);
            c.require(std::abs(z_s) <= 3.0, tag + "success z=" + fmt(z_s));
            c.require(std::abs(z_f) <= 3.0, tag + "failure z=" + fmt(z_f));
            c.require(std::abs(z_o) <= 3.0, tag + "sign-only z=" + fmt(z_o));
        }
    }

    // Pauli split of the success probability under depolarization.
    struct PartitionPoint {
        int n, m, j;
        double t;
    };
    const PartitionPoint partition_points[] = {{3, 3, 2, 1.0}, {3, 3, 2, 0.95}, {2, 2, 1, 0.99}, {5, 2, 1, 1.0}};
    for (const double e_d : {1e-3, 1e-2}) {
        for (const PartitionPoint& pt : partition_points) {
            const EncodingParams enc(pt.n, pt.m, pt.j);
            const ChannelPoint ch = ChannelPoint::from_product(pt.t);
            const PairErrorRates per = pair_error_rates(depolarizing_to_flips(e_d));
            const TrialConfig cfg{enc, ch, per, DarkCountModel::off(), LogicalInput::phi_plus, kMcSeed + 1,
                                  kMcTrials};
            const McTallies t = estimate(cfg);
            const PauliPartition part = pauli_partition(enc, ch, block_error_rates(enc, ch, per));
            const double trials = static_cast<double>(t.trials);
            const std::string tag = "partition (" + std::to_string(pt.n) + "," + std::to_string(pt.m) + "," +
                                    std::to_string(pt.j) + ") t=" + fmt(pt.t) + " ed=" + fmt(e_d) + " ";
            const struct {
                const char* name;
                uint64_t count;
                double expected;
            } rows[] = {{"identity", t.succ_err_none, part.p_identity},
                        {"x", t.succ_err_x_only, part.p_x},
                        {"y", t.succ_err_z_only, part.p_y},
                        {"z", t.succ_err_both, part.p_z}};
            for (const auto& r : rows) {
                const double z = zscore(static_cast<double>(r.count) / trials, r.expected, trials);
                c.require(std::abs(z) <= 3.0, tag + r.name + " z=" + fmt(z));
            }
        }
    }

    // Detector dark counts against the modified block outcome forms.
    struct DarkPoint {
        int m, j;
        double eta;
    };
    const DarkPoint dark_points[] = {{4, 3, 0.95}, {2, 1, 1.0}, {3, 1, 0.9}};
    for (const double lambda : {1e-5, 1e-4}) {
        for (const DarkPoint& pt : dark_points) {
            const EncodingParams enc(1, pt.m, pt.j);
            const ChannelPoint ch(pt.eta, 1.0);
            const DarkCountModel dc(lambda);
            const TrialConfig cfg{enc, ch, PairErrorRates::none(), dc, LogicalInput::phi_plus, kMcSeed + 2,
                                  kMcTrials};
            const McTallies t = estimate(cfg);
            const BlockOutcomeProbs probs = block_probs_with_dark(enc, ch, dc);
            const double trials = static_cast<double>(t.trials);
            const std::string tag =
                "dark (m=" + std::to_string(pt.m) + ",j=" + std::to_string(pt.j) + ") lambda=" + fmt(lambda) + " ";
            const double z_s = zscore(static_cast<double>(t.success) / trials, probs.p_success, trials);
            const double z_f = zscore(static_cast<double>(t.failure) / trials, probs.p_failure, trials);
            const double z_o = zscore(static_cast<double>(t.sign_only_all) / trials, probs.p_sign_only, trials);
            c.require(std::abs(z_s) <= 3.0, tag + "success z=" + fmt(z_s));
            c.require(std::abs(z_f) <= 3.0, tag + "failure z=" + fmt(z_f));
            c.require(std::abs(z_o) <= 3.0, tag + "sign-only z=" + fmt(z_o));
        }
    }

    c.seconds = seconds_since(start);
    c.require(c.seconds < 300.0, "runtime " + fmt(c.seconds) + " s exceeds 5 min");
    return c;
}

Criterion criterion_identities() {
    Criterion c("criterion 6: algebraic identities");
    const auto start = Clock::now();

    std::mt19937 gen(6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // Two routes to the block failure probability.
    for (int sample = 0; sample < 500; ++sample) {
        const int m = 1 + static_cast<int>(gen() % 8);
        const int j = static_cast<int>(gen() % static_cast<unsigned>(m));
        const double t = 0.3 + 0.7 * unit(gen);
        const double eta = t + (1.0 - t) * unit(gen);
        const EncodingParams enc(1, m, j);
        const ChannelPoint ch(eta, t / eta);
        const double diff = std::abs(block_failure_prob(enc, ch) - block_failure_prob_alt(enc, ch));
        c.require(diff <= 1e-10, "failure-form gap " + fmt(diff) + " at m=" + std::to_string(m));
    }

    for (int sample = 0; sample < 300; ++sample) {
        const int n = 1 + static_cast<int>(gen() % 16);
        const int m = 1 + static_cast<int>(gen() % 8);
        const int j = static_cast<int>(gen() % static_cast<unsigned>(m));
        const double t = 0.5 + 0.5 * unit(gen);
        const double e_d = unit(gen) * 1e-2;
        const EncodingParams enc(n, m, j);

        // Pauli split sums back to the overall success probability.
        const ChannelPoint ch = ChannelPoint::from_product(t);
        const PairErrorRates per = pair_error_rates(depolarizing_to_flips(e_d));
        const PauliPartition part = pauli_partition(enc, ch, block_error_rates(enc, ch, per));
        c.require(std::abs(part.total() - cbm_success_prob(enc, ch)) <= 1e-12, "partition sum gap");

        // Only the product of the two survival rates matters.
        const double eta = t + (1.0 - t) * unit(gen);
        const ChannelPoint split(eta, t / eta);
        c.require(std::abs(cbm_success_prob(enc, split) - cbm_success_prob(enc, ch)) <= 1e-12,
                  "product dependence gap");
    }

    // Symmetric and one-way building blocks agree (link_success would throw
    // beyond 1e-12; verify a tighter bound directly).
    HardwareParams hw;
    for (const double l0 : {0.5, 1.0, 1.7, 2.9}) {
        for (const int n : {1, 5, 13}) {
            for (const int m : {2, 6, 9}) {
                const EncodingParams enc(n, m, 1);
                const double eta0 = repeater_loss(enc, hw);
                const double one_way = cbm_success_prob(enc, ChannelPoint(eta0 * std::exp(-l0 / hw.l_att_km), eta0));
                const double eta_half = eta0 * std::exp(-0.5 * l0 / hw.l_att_km);
                const double symmetric = cbm_success_prob(enc, ChannelPoint(eta_half, eta_half));
                c.require(std::abs(one_way - symmetric) <= 1e-12, "design equivalence gap at l0=" + fmt(l0));
            }
        }
    }

    // Photon-cost accounting: q_cost * rt0 == 2nm L / L0.
    for (const double l : {100.0, 1000.0, 10000.0}) {
        for (const double l0 : {0.8, 1.7, 2.5}) {
            const EncodingParams enc(13, 6, 2);
            const ChainMetrics cm = chain_metrics(enc, hw, l, l0, 5.6e-5);
            const double base = 2.0 * enc.total_photons() * l / l0;
            c.require(std::abs(cm.q_cost * cm.rt0 - base) <= 1e-12 * base, "cost accounting gap");
        }
    }

    c.seconds = seconds_since(start);
    return c;
}

Criterion criterion_baselines() {
    Criterion c("criterion 7: direct-transmission baselines");
    const auto start = Clock::now();
    HardwareParams bare;
    bare.tau_s = 0.0;

    const double rate = 1e10 * single_photon_transmission(1000.0, bare);
    c.require(std::abs(rate - 1.8e-10) <= 0.05 * 1.8e-10, "10 GHz source at 1000 km gives " + fmt(rate) + " Hz");

    for (const double l : {0.0, 7.0, 50.0}) {
        const double eta = single_photon_transmission(l, bare);
        c.require(direct_transmission(1, 1, l, bare) == eta, "trivial encoding differs from eta at " + fmt(l));
    }

    // Scan for an encoding of at most 25 photons beating the bare photon at
    // 50 km.
    double best = 0.0;
    int best_n = 1;
    int best_m = 1;
    for (int n = 1; n <= 25; ++n) {
        for (int m = 1; n * m <= 25; ++m) {
            const double p = direct_transmission(n, m, 50.0, bare);
            if (p > best) {
                best = p;
                best_n = n;
                best_m = m;
            }
        }
    }
    c.require(best > single_photon_transmission(50.0, bare),
              "best encoded transmission at 50 km is (" + std::to_string(best_n) + "," + std::to_string(best_m) +
                  ") at " + fmt(best) + ", not above the bare photon " +
                  fmt(single_photon_transmission(50.0, bare)));

    c.seconds = seconds_since(start);
    return c;
}

}  // namespace

int main() {
    std::vector<Criterion> results;
    results.push_back(criterion_success_table());
    results.push_back(criterion_chain_check());
    results.push_back(criterion_optimizer_table());
    results.push_back(criterion_bound_suite());
    results.push_back(criterion_oracle_equivalence());
    results.push_back(criterion_identities());
    results.push_back(criterion_baselines());

    int failed = 0;
    for (const Criterion& c : results) {
        std::printf("[%s] %s (%.2f s)\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.seconds);
        for (const std::string& note : c.notes) {
            std::printf("        - %s\n", note.c_str());
        }
        if (!c.pass) {
            ++failed;
        }
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
    return failed;
}
