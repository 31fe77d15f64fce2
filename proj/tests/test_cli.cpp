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

#include "doctest.h"

#include "json.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#ifndef CBMREP_CLI_PATH
#error "CBMREP_CLI_PATH must point at the built command-line binary"
#endif

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path dir = fs::temp_directory_path() / "cbmrep_cli_tests";
    fs::create_directories(dir);
    const fs::path out = dir / ("out" + std::to_string(counter) + ".txt");
    const fs::path err = dir / ("err" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string cmd =
        std::string(CBMREP_CLI_PATH) + " " + args + " > " + out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(status);
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        lines.push_back(line);
    }
    return lines;
}

// Column lookup in a simple CSV (no embedded commas in these tables).
std::string csv_field(const std::string& header, const std::string& row, const std::string& column) {
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::istringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) {
            out.push_back(item);
        }
        return out;
    };
    const auto names = split(header);
    const auto values = split(row);
    for (size_t i = 0; i < names.size() && i < values.size(); ++i) {
        if (names[i] == column) {
            return values[i];
        }
    }
    return "";
}

fs::path temp_file(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "cbmrep_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("eval reports the closed-form success probability") {
    const RunResult r = run_cli("eval --n 2 --m 2 --j 1 --eta 0.99");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() >= 3);
    const std::string p = csv_field(lines[1], lines[2], "p_overall_success");
    CHECK(std::abs(std::stod(p) - 0.9224) < 5e-5);

    const RunResult single = run_cli("eval --n 1 --m 1 --j 0 --eta 1");
    const auto single_lines = lines_of(single.out);
    CHECK(std::stod(csv_field(single_lines[1], single_lines[2], "p_overall_success")) == 0.5);
}

TEST_CASE("csv schemas are pinned") {
    const RunResult eval = run_cli("eval");
    CHECK(lines_of(eval.out)[1] ==
          "n,m,j,eta,eta_prime,ed,lambda,p_block_success,p_block_failure,p_block_sign_only,"
          "p_overall_success,p_identity,p_x,p_y,p_z");

    const RunResult mc = run_cli("mc --trials 1000 --seed 1");
    CHECK(lines_of(mc.out)[1] == "class,analytic,p_hat,std_err,z,count,denom");

    const RunResult sweep = run_cli(
        "sweep --L 100 --n-min 2 --n-max 2 --m-min 2 --m-max 2 --l0-min 1 --l0-max 1");
    CHECK(lines_of(sweep.out)[1] == "n,m,best_j,l0_km,rt0,q_cost,fidelity");

    const RunResult opt = run_cli(
        "optimize --L 100 --n-min 2 --n-max 3 --m-min 2 --m-max 2 --l0-min 1 --l0-max 1 --top-k 2");
    CHECK(lines_of(opt.out)[1] ==
          "rank,n,m,j,l0_km,q_cost,rt0,fidelity,q_x,q_z,key_rate_per_t0,eta0,tau_p_s,link_success");

    const RunResult cmp = run_cli("compare --max-photons 6 --l-max 10 --l-step 5");
    REQUIRE(cmp.exit_code == 0);
    CHECK(lines_of(cmp.out)[1] ==
          "l_km,single_photon,direct_best,direct_n,direct_m,cbm_one_node,cbm_n,cbm_m,cbm_j");
}

TEST_CASE("figure datasets regenerate") {
    for (const std::string target : {"fig2", "figA4"}) {
        const RunResult r = run_cli("reproduce " + target);
        CHECK(r.exit_code == 0);
        CHECK(lines_of(r.out).size() > 10);
    }
}

TEST_CASE("malformed flags are configuration errors and write nothing") {
    const fs::path out = temp_file("never_written.csv");
    fs::remove(out);
    const RunResult r = run_cli("eval --no-such-flag 3 --output " + out.string());
    CHECK(r.exit_code != 0);
    CHECK_FALSE(fs::exists(out));

    const RunResult bad_j = run_cli("eval --n 2 --m 2 --j 5");
    CHECK(bad_j.exit_code == 2);
}

TEST_CASE("monte carlo runs are byte-identical for a fixed seed") {
    const std::string args = "mc --n 2 --m 2 --j 1 --eta 0.99 --trials 200000 --seed 7";
    const RunResult a = run_cli(args);
    const RunResult b = run_cli(args);
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);

    const RunResult w1 = run_cli(args + " --workers 1");
    const RunResult w4 = run_cli(args + " --workers 4");
    CHECK(w1.out == w4.out);

    // Every z-score of this healthy run stays within three sigma.
    const auto lines = lines_of(a.out);
    for (size_t i = 2; i < lines.size(); ++i) {
        const double z = std::stod(csv_field(lines[1], lines[i], "z"));
        CHECK(std::abs(z) <= 3.0);
    }
}

TEST_CASE("monte carlo guard rails") {
    CHECK(run_cli("mc --trials 1000 ").exit_code != 0);  // seed is required
    CHECK(run_cli("mc --trials 2000000000 --seed 1").exit_code == 2);
    const RunResult warn = run_cli("mc --trials 10 --seed 1");
    CHECK(warn.exit_code == 0);
    CHECK(warn.err.find("statistical power") != std::string::npos);
}

TEST_CASE("json output round-trips") {
    const RunResult r = run_cli("eval --n 3 --m 4 --j 2 --eta 0.97 --ed 1e-3 --format json");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 2);
    const nlohmann::json head = nlohmann::json::parse(lines[0]);
    const nlohmann::json row = nlohmann::json::parse(lines[1]);
    CHECK(head.at("config").at("encoding").at("n") == 3);
    CHECK(head.at("config").at("encoding").at("j") == 2);
    CHECK(head.at("config").at("channel").at("eta") == 0.97);
    CHECK(row.at("n") == 3);
    CHECK(row.at("p_overall_success").is_number());

    // Feed the echoed configuration back as a config file: same result.
    const fs::path cfg = temp_file("roundtrip.json");
    {
        nlohmann::json file_cfg = head.at("config");
        file_cfg.erase("command");
        file_cfg.erase("hardware");
        file_cfg.erase("search");
        file_cfg["run"].erase("l_km");
        std::ofstream out(cfg);
        out << file_cfg.dump();
    }
    const RunResult again = run_cli("eval --config " + cfg.string() + " --format json");
    REQUIRE(again.exit_code == 0);
    CHECK(lines_of(again.out)[1] == lines[1]);
}

TEST_CASE("config file layering and validation") {
    const fs::path cfg = temp_file("layering.json");
    {
        std::ofstream out(cfg);
        out << R"({"encoding": {"n": 2, "m": 2, "j": 1}, "channel": {"eta": 0.99}})";
    }
    // File value used when the flag is absent...
    const RunResult file_only = run_cli("eval --config " + cfg.string());
    auto lines = lines_of(file_only.out);
    CHECK(csv_field(lines[1], lines[2], "eta") == "0.99");
    // ...and the command line wins when both are present.
    const RunResult overridden = run_cli("eval --config " + cfg.string() + " --eta 0.9");
    lines = lines_of(overridden.out);
    CHECK(csv_field(lines[1], lines[2], "eta") == "0.9");

    const fs::path bad = temp_file("bad_key.json");
    {
        std::ofstream out(bad);
        out << R"({"encoding": {"n": 2, "blocks": 3}})";
    }
    CHECK(run_cli("eval --config " + bad.string()).exit_code == 2);

    const fs::path bad_section = temp_file("bad_section.json");
    {
        std::ofstream out(bad_section);
        out << R"({"tuning": {"n": 2}})";
    }
    CHECK(run_cli("eval --config " + bad_section.string()).exit_code == 2);
}

TEST_CASE("output files are written on demand") {
    const fs::path out = temp_file("eval_out.csv");
    fs::remove(out);
    const RunResult r = run_cli("eval --n 2 --m 2 --j 1 --output " + out.string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.empty());
    CHECK(fs::exists(out));
    CHECK(slurp(out).find("p_overall_success") != std::string::npos);
}

TEST_CASE("infeasible searches use their own exit code") {
    const RunResult r = run_cli(
        "optimize --L 1000 --n-min 1 --n-max 2 --m-min 1 --m-max 2 --l0-min 1 --l0-max 1 --min-rt0 0.99");
    CHECK(r.exit_code == 3);
}

TEST_CASE("published success table reproduces within tolerance") {
    const RunResult r = run_cli("reproduce tableA1");
    CHECK(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 32);  // comment, header, 30 entries
    for (size_t i = 2; i < lines.size(); ++i) {
        CHECK(csv_field(lines[1], lines[i], "pass") == "pass");
    }
    CHECK(run_cli("reproduce no_such_table").exit_code == 2);
}

TEST_SUITE_END();
