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

// Times the serial reference against the parallel kernels: Monte Carlo
// tallies and the cost-minimization scan. Also asserts that both paths
// produce identical results, which is the whole point of keeping the serial
// reference around.

#include "cbmrep/mc.hpp"
#include "cbmrep/noise.hpp"
#include "cbmrep/optimizer.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
    const uint64_t trials = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 2000000ULL;

    cbmrep::TrialConfig cfg{cbmrep::EncodingParams(6, 5, 2),
                            cbmrep::ChannelPoint(0.9, 1.0),
                            cbmrep::pair_error_rates(cbmrep::depolarizing_to_flips(1e-3)),
                            cbmrep::DarkCountModel::off(),
                            cbmrep::LogicalInput::phi_plus,
                            12345,
                            trials};

    auto t0 = std::chrono::steady_clock::now();
    const cbmrep::McTallies serial = cbmrep::estimate(cfg, cbmrep::Execution::serial);
    const double mc_serial_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const cbmrep::McTallies parallel = cbmrep::estimate(cfg, cbmrep::Execution::parallel);
    const double mc_parallel_s = seconds_since(t0);

    if (serial.success != parallel.success || serial.failure != parallel.failure ||
        serial.succ_err_x != parallel.succ_err_x || serial.succ_err_z != parallel.succ_err_z) {
        throw std::runtime_error("serial and parallel Monte Carlo tallies disagree");
    }

    cbmrep::SearchSpace space;
    space.n_max = 60;
    space.m_max = 10;

    t0 = std::chrono::steady_clock::now();
    const cbmrep::OptReport opt_serial =
        cbmrep::optimize(cbmrep::HardwareParams{}, 1000.0, 5.6e-5, space, {}, 10, cbmrep::Execution::serial);
    const double opt_serial_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const cbmrep::OptReport opt_parallel =
        cbmrep::optimize(cbmrep::HardwareParams{}, 1000.0, 5.6e-5, space, {}, 10, cbmrep::Execution::parallel);
    const double opt_parallel_s = seconds_since(t0);

    if (opt_serial.best.metrics.q_cost != opt_parallel.best.metrics.q_cost ||
        opt_serial.best.enc.n != opt_parallel.best.enc.n || opt_serial.best.l0_km != opt_parallel.best.l0_km) {
        throw std::runtime_error("serial and parallel optimizer results disagree");
    }

    std::printf("mc        trials=%llu       serial %8.3f s   parallel %8.3f s   speedup %.2fx\n",
                static_cast<unsigned long long>(trials), mc_serial_s, mc_parallel_s, mc_serial_s / mc_parallel_s);
    std::printf("optimize  cells=%llu   serial %8.3f s   parallel %8.3f s   speedup %.2fx\n",
                static_cast<unsigned long long>(opt_serial.evaluated), opt_serial_s, opt_parallel_s,
                opt_serial_s / opt_parallel_s);
    std::printf("agreement: serial and parallel results identical\n");
    return 0;
}
