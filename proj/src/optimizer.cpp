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

#include "cbmrep/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cbmrep {

void SearchSpace::validate() const {
    if (n_min < 1 || n_max < n_min || m_min < 1 || m_max < m_min) {
        throw std::invalid_argument("SearchSpace: encoding ranges must be non-empty with n, m >= 1");
    }
    if (!(l0_min_km > 0.0) || l0_max_km < l0_min_km || !(l0_step_km > 0.0)) {
        throw std::invalid_argument("SearchSpace: spacing grid must be positive and non-empty");
    }
    if (fixed_j && (*fixed_j < 0 || *fixed_j > m_max - 1)) {
        throw std::invalid_argument("SearchSpace: fixed j outside [0, m_max-1]");
    }
}

std::vector<double> SearchSpace::l0_grid() const {
    std::vector<double> grid;
    const int count = static_cast<int>(std::floor((l0_max_km - l0_min_km) / l0_step_km + 1e-9)) + 1;
    grid.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        // Snap to the step lattice so printed spacings stay clean.
        grid.push_back(std::round((l0_min_km + i * l0_step_km) * 1e9) / 1e9);
    }
    return grid;
}

bool candidate_precedes(const Candidate& a, const Candidate& b) {
    if (a.metrics.q_cost != b.metrics.q_cost) {
        return a.metrics.q_cost < b.metrics.q_cost;
    }
    const int nm_a = a.enc.total_photons();
    const int nm_b = b.enc.total_photons();
    if (nm_a != nm_b) {
        return nm_a < nm_b;
    }
    if (a.enc.n != b.enc.n) {
        return a.enc.n < b.enc.n;
    }
    if (a.l0_km != b.l0_km) {
        return a.l0_km < b.l0_km;
    }
    return a.enc.j < b.enc.j;
}

namespace {

struct Shard {
    std::vector<Candidate> top;
    uint64_t evaluated = 0;
    uint64_t feasible = 0;
};

bool feasible_under(const ChainMetrics& metrics, const Constraints& constraints) {
    if (metrics.rt0_underflow || !std::isfinite(metrics.q_cost)) {
        return false;
    }
    if (constraints.min_rt0 && metrics.rt0 < *constraints.min_rt0) {
        return false;
    }
    if (constraints.min_fidelity && metrics.fidelity < *constraints.min_fidelity) {
        return false;
    }
    return true;
}

void keep_top(std::vector<Candidate>& top, const Candidate& c, size_t k) {
    top.push_back(c);
    std::sort(top.begin(), top.end(), candidate_precedes);
    if (top.size() > k) {
        top.erase(top.begin() + static_cast<std::ptrdiff_t>(k), top.end());
    }
}

}  // namespace

OptReport optimize(const HardwareParams& hw, double l_km, double e_d, const SearchSpace& space,
                   const Constraints& constraints, int top_k, Execution mode, int workers) {
    space.validate();
    hw.validate();
    if (top_k < 1) {
        throw std::invalid_argument("optimize: top_k must be >= 1");
    }
    const std::vector<double> grid = space.l0_grid();
    const int n_count = space.n_max - space.n_min + 1;
    const int m_count = space.m_max - space.m_min + 1;
    const int64_t cells = static_cast<int64_t>(n_count) * m_count * static_cast<int64_t>(grid.size());

    auto scan_cell = [&](int64_t cell, Shard& shard) {
        const int n = space.n_min + static_cast<int>(cell % n_count);
        const int m = space.m_min + static_cast<int>((cell / n_count) % m_count);
        const double l0 = grid[static_cast<size_t>(cell / (static_cast<int64_t>(n_count) * m_count))];
        if (l0 > l_km) {
            return;
        }
        const int j_lo = space.fixed_j ? *space.fixed_j : 0;
        const int j_hi = space.fixed_j ? *space.fixed_j : m - 1;
        for (int j = j_lo; j <= j_hi; ++j) {
            if (j > m - 1) {
                continue;
            }
            const EncodingParams enc(n, m, j);
            const ChainMetrics metrics = chain_metrics(enc, hw, l_km, l0, e_d);
            ++shard.evaluated;
            if (!feasible_under(metrics, constraints)) {
                continue;
            }
            ++shard.feasible;
            keep_top(shard.top, Candidate{enc, l0, metrics}, static_cast<size_t>(top_k));
        }
    };

    Shard merged;
#ifdef _OPENMP
    if (mode == Execution::parallel) {
        const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel num_threads(threads)
        {
            Shard local;
#pragma omp for schedule(dynamic, 16) nowait
            for (int64_t cell = 0; cell < cells; ++cell) {
                scan_cell(cell, local);
            }
#pragma omp critical
            {
                merged.evaluated += local.evaluated;
                merged.feasible += local.feasible;
                for (const Candidate& c : local.top) {
                    keep_top(merged.top, c, static_cast<size_t>(top_k));
                }
            }
        }
    } else
#else
    (void)workers;
    (void)mode;
#endif
    {
        for (int64_t cell = 0; cell < cells; ++cell) {
            scan_cell(cell, merged);
        }
    }

    if (merged.top.empty()) {
        throw InfeasibleSearchError("optimize: no grid point satisfies the constraints");
    }
    OptReport report{merged.top.front(), merged.top, merged.evaluated, merged.feasible};
    return report;
}

std::vector<SweepRow> sweep(const HardwareParams& hw, double l_km, double e_d, const SearchSpace& space,
                            std::optional<double> fixed_eta0, Execution mode, int workers) {
    space.validate();
    hw.validate();
    const std::vector<double> grid = space.l0_grid();
    const int n_count = space.n_max - space.n_min + 1;
    const int m_count = space.m_max - space.m_min + 1;
    const int64_t cells = static_cast<int64_t>(n_count) * m_count * static_cast<int64_t>(grid.size());

    std::vector<SweepRow> rows(static_cast<size_t>(cells));
    auto fill_cell = [&](int64_t cell) {
        const int n = space.n_min + static_cast<int>(cell % n_count);
        const int m = space.m_min + static_cast<int>((cell / n_count) % m_count);
        const double l0 = grid[static_cast<size_t>(cell / (static_cast<int64_t>(n_count) * m_count))];
        SweepRow row{n, m, 0, l0, 0.0, std::numeric_limits<double>::infinity(), 0.0};
        if (l0 <= l_km) {
            const int j_lo = space.fixed_j ? std::min(*space.fixed_j, m - 1) : 0;
            const int j_hi = space.fixed_j ? std::min(*space.fixed_j, m - 1) : m - 1;
            bool first = true;
            for (int j = j_lo; j <= j_hi; ++j) {
                const ChainMetrics metrics = chain_metrics(EncodingParams(n, m, j), hw, l_km, l0, e_d, false, fixed_eta0);
                if (first || metrics.rt0 > row.rt0) {
                    row.best_j = j;
                    row.rt0 = metrics.rt0;
                    row.q_cost = metrics.q_cost;
                    row.fidelity = metrics.fidelity;
                    first = false;
                }
            }
        }
        rows[static_cast<size_t>(cell)] = row;
    };

#ifdef _OPENMP
    if (mode == Execution::parallel) {
        const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
        for (int64_t cell = 0; cell < cells; ++cell) {
            fill_cell(cell);
        }
    } else
#else
    (void)workers;
    (void)mode;
#endif
    {
        for (int64_t cell = 0; cell < cells; ++cell) {
            fill_cell(cell);
        }
    }
    return rows;
}

}  // namespace cbmrep
