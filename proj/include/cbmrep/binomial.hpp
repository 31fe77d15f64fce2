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

#ifndef CBMREP_BINOMIAL_HPP
#define CBMREP_BINOMIAL_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace cbmrep {

/// Pascal-triangle cache of binomial coefficients in double precision.
/// Immutable after construction; safe to share across threads.
class BinomialTable {
  public:
    explicit BinomialTable(int max_n = 256) : max_n_(max_n) {
        if (max_n < 0) {
            throw std::invalid_argument("BinomialTable: max_n must be non-negative");
        }
        rows_.resize(static_cast<size_t>(max_n) + 1);
        for (int r = 0; r <= max_n; ++r) {
            rows_[r].resize(static_cast<size_t>(r) + 1);
            rows_[r][0] = 1.0;
            rows_[r][static_cast<size_t>(r)] = 1.0;
            for (int k = 1; k < r; ++k) {
                rows_[r][static_cast<size_t>(k)] =
                    rows_[r - 1][static_cast<size_t>(k) - 1] + rows_[r - 1][static_cast<size_t>(k)];
            }
        }
    }

    // choose(a, b) == 0 whenever b < 0 or b > a, matching the usual
    // convention for vanishing terms in truncated sums.
    double choose(int a, int b) const {
        if (b < 0 || a < 0 || b > a) {
            return 0.0;
        }
        if (a > max_n_) {
            throw std::out_of_range("BinomialTable: coefficient above cached maximum");
        }
        return rows_[static_cast<size_t>(a)][static_cast<size_t>(b)];
    }

    int max_n() const { return max_n_; }

    /// Process-wide table with the default size.
    static const BinomialTable& shared();

  private:
    int max_n_;
    std::vector<std::vector<double>> rows_;
};

/// Exponentiation by squaring for non-negative integer powers. Exact for
/// powers of two, deterministic across platforms.
inline double ipow(double base, int exponent) {
    double result = 1.0;
    double acc = base;
    int e = exponent;
    while (e > 0) {
        if (e & 1) {
            result *= acc;
        }
        acc *= acc;
        e >>= 1;
    }
    return result;
}

/// P[X >= from] for X ~ Binomial(count, p).
inline double binomial_tail(int count, int from, double p, const BinomialTable& table = BinomialTable::shared()) {
    if (from <= 0) {
        return 1.0;
    }
    double total = 0.0;
    for (int i = from; i <= count; ++i) {
        total += table.choose(count, i) * ipow(p, i) * ipow(1.0 - p, count - i);
    }
    return total;
}

/// P[X odd] for X ~ Binomial(count, p); the even case is the complement.
inline double odd_parity_prob(int count, double p) {
    return 0.5 * (1.0 - ipow(1.0 - 2.0 * p, count));
}

inline double even_parity_prob(int count, double p) {
    return 1.0 - odd_parity_prob(count, p);
}

}  // namespace cbmrep

#endif
