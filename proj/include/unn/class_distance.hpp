#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace unn {

// ---------------------------------------------------------------------------
// Probability that at least k of the independent events with probabilities
// p_1..p_n occur: the upper tail of a Poisson-binomial distribution. Given
// p_j = Pr(d(q, x_j) <= R) over the class-c candidates, this is
// Pr(D_q(c) <= R), the probability that the k-th nearest class-c object
// lies within R.
// ---------------------------------------------------------------------------

// Dynamic program over P(i, j) = Pr(exactly i of the first j events occur),
//   P(i, j) = p_j * P(i-1, j-1) + (1 - p_j) * P(i, j-1)
// with P(0, 0) = 1, P(0, j) = prod_h (1 - p_h), P(i, j) = 0 for i > j.
// The result is sum_j p_j * P(k-1, j-1). Two rolling rows: O(k n) time,
// O(n) space. Returns 0 when k > n (k events cannot occur among fewer).
inline double class_cdf_at_radius(std::span<const double> p, int k) {
    if (k <= 0) throw std::invalid_argument("class_cdf_at_radius: k must be >= 1");
    const std::size_t n = p.size();
    if (n == 0 || static_cast<std::size_t>(k) > n) return 0.0;

    std::vector<double> prev(n + 1), cur(n + 1);
    prev[0] = 1.0;
    for (std::size_t j = 1; j <= n; ++j) prev[j] = prev[j - 1] * (1.0 - p[j - 1]);
    for (int i = 1; i <= k - 1; ++i) {
        cur[0] = 0.0;
        for (std::size_t j = 1; j <= n; ++j)
            cur[j] = p[j - 1] * prev[j - 1] + (1.0 - p[j - 1]) * cur[j - 1];
        std::swap(prev, cur);
    }
    double total = 0.0;
    for (std::size_t j = 1; j <= n; ++j) total += p[j - 1] * prev[j - 1];
    return std::clamp(total, 0.0, 1.0);
}

// Subset-enumeration oracle for class_cdf_at_radius:
// 1 - sum over S with |S| < k of prod_{j in S} p_j * prod_{j not in S} (1 - p_j).
// Exponential; capped at 20 events.
inline double brute_force_class_cdf(std::span<const double> p, int k) {
    if (k <= 0) throw std::invalid_argument("brute_force_class_cdf: k must be >= 1");
    const std::size_t n = p.size();
    if (n > 20) throw std::invalid_argument("brute_force_class_cdf: more than 20 events");
    if (n == 0 || static_cast<std::size_t>(k) > n) return 0.0;

    double below = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        if (std::popcount(mask) >= k) continue;
        double term = 1.0;
        for (std::size_t j = 0; j < n; ++j)
            term *= (mask >> j) & 1 ? p[j] : 1.0 - p[j];
        below += term;
    }
    return 1.0 - below;
}

} // namespace unn
