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

#ifndef CBMREP_OPTIMIZER_HPP
#define CBMREP_OPTIMIZER_HPP

#include "cbmrep/mc.hpp"
#include "cbmrep/repeater.hpp"
#include "cbmrep/types.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace cbmrep {

/// Grid over (n, m, j, L0). `fixed_j` pins the retry depth; otherwise every
/// j in [0, m-1] is scanned. Spacings are l0_min + i*l0_step up to l0_max.
struct SearchSpace {
    int n_min = 1;
    int n_max = 120;
    int m_min = 1;
    int m_max = 12;
    std::optional<int> fixed_j = {};
    double l0_min_km = 0.5;
    double l0_max_km = 3.0;
    double l0_step_km = 0.1;

    void validate() const;
    std::vector<double> l0_grid() const;
};

struct Constraints {
    std::optional<double> min_rt0 = {};
    std::optional<double> min_fidelity = {};
};

struct Candidate {
    EncodingParams enc;
    double l0_km;
    ChainMetrics metrics;
};

using OptResult = Candidate;

struct OptReport {
    Candidate best;
    std::vector<Candidate> top;  // ranked, includes best
    uint64_t evaluated = 0;
    uint64_t feasible = 0;
};

/// Raised when no grid point satisfies the constraints; distinct from any
/// numerical failure inside the evaluation.
class InfeasibleSearchError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Strict total order used for minimization and ranking: smaller photon cost,
/// then smaller n*m, then smaller n, then smaller L0, then smaller j.
bool candidate_precedes(const Candidate& a, const Candidate& b);

/// Exhaustive scan of the grid minimizing the photon cost subject to the
/// constraints. Deterministic: the result is independent of evaluation order
/// and worker count. Cells where a pinned retry depth is out of range are
/// skipped.
OptReport optimize(const HardwareParams& hw, double l_km, double e_d, const SearchSpace& space,
                   const Constraints& constraints = {}, int top_k = 10,
                   Execution mode = Execution::parallel, int workers = 0);

struct SweepRow {
    int n;
    int m;
    int best_j;  // retry depth maximizing the end-to-end success at this cell
    double l0_km;
    double rt0;
    double q_cost;
    double fidelity;
};

/// Full grid dump for plotting: one row per (n, m, L0) with the retry depth
/// maximizing the end-to-end success at that cell (a pinned depth is clamped
/// to m-1 so every cell stays present). `fixed_eta0` freezes the stationary
/// survival rate instead of deriving it from the hardware model.
std::vector<SweepRow> sweep(const HardwareParams& hw, double l_km, double e_d, const SearchSpace& space,
                            std::optional<double> fixed_eta0 = {}, Execution mode = Execution::parallel,
                            int workers = 0);

}  // namespace cbmrep

#endif
