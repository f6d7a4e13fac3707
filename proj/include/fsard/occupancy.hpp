#ifndef FSARD_OCCUPANCY_HPP
#define FSARD_OCCUPANCY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsard {

// Distribution of the number of mini-slots holding exactly one reservation
// packet when `contenders` users each pick one of `cells` mini-slots
// uniformly at random. probs[n3] = Pr(N_s = n3), n3 = 0..min(cells,contenders).
struct SingletonPmf {
    int contenders = 0;
    int cells = 1;
    std::vector<double> probs;

    double at(int n3) const {
        if (n3 < 0 || n3 >= static_cast<int>(probs.size())) return 0.0;
        return probs[static_cast<std::size_t>(n3)];
    }
    int max_singletons() const { return static_cast<int>(probs.size()) - 1; }
};

namespace detail {

// Per-ball DP over (s singleton cells, d collided cells). Each new ball lands
// in an empty cell with prob (V-s-d)/V, on a singleton with prob s/V, on an
// already-collided cell with prob d/V. States are packed as s*(V+1)+d.
inline std::vector<double> singleton_dp_states(int k, int v) {
    const int stride = v + 1;
    std::vector<double> cur(static_cast<std::size_t>(stride) * stride, 0.0);
    std::vector<double> nxt(cur.size(), 0.0);
    cur[0] = 1.0;
    const double inv_v = 1.0 / v;
    for (int ball = 0; ball < k; ++ball) {
        std::fill(nxt.begin(), nxt.end(), 0.0);
        const int occ_max = std::min(ball, v);
        for (int s = 0; s <= occ_max; ++s) {
            for (int d = 0; s + d <= occ_max; ++d) {
                const double pr = cur[static_cast<std::size_t>(s) * stride + d];
                if (pr == 0.0) continue;
                const int empty = v - s - d;
                if (empty > 0)
                    nxt[static_cast<std::size_t>(s + 1) * stride + d] += pr * empty * inv_v;
                if (s > 0)
                    nxt[static_cast<std::size_t>(s - 1) * stride + (d + 1)] += pr * s * inv_v;
                if (d > 0)
                    nxt[static_cast<std::size_t>(s) * stride + d] += pr * d * inv_v;
            }
        }
        cur.swap(nxt);
    }
    return cur;
}

inline SingletonPmf marginalize_singletons(std::vector<double> const& states, int k, int v) {
    SingletonPmf pmf;
    pmf.contenders = k;
    pmf.cells = v;
    const int stride = v + 1;
    const int n3_max = std::min(v, k);
    pmf.probs.assign(static_cast<std::size_t>(n3_max) + 1, 0.0);
    for (int s = 0; s <= n3_max; ++s) {
        double total = 0.0;
        for (int d = 0; d <= v - s; ++d)
            total += states[static_cast<std::size_t>(s) * stride + d];
        pmf.probs[static_cast<std::size_t>(s)] = total;
    }
    return pmf;
}

}  // namespace detail

// Exact singleton-occupancy distribution via the per-ball DP. Stable for any
// k, v that fit in memory (no alternating sums, all transitions nonnegative).
inline SingletonPmf singleton_pmf(int k, int v) {
    if (k < 0) throw std::domain_error("singleton_pmf: contenders must be >= 0");
    if (v < 1) throw std::domain_error("singleton_pmf: cells must be >= 1");
    return detail::marginalize_singletons(detail::singleton_dp_states(k, v), k, v);
}

// Distributions for every contender count 1..k_max in one DP pass.
// table[k] is the pmf for k contenders (table[0] is the empty-throw pmf).
inline std::vector<SingletonPmf> singleton_pmf_table(int k_max, int v) {
    if (k_max < 0) throw std::domain_error("singleton_pmf_table: k_max must be >= 0");
    if (v < 1) throw std::domain_error("singleton_pmf_table: cells must be >= 1");
    std::vector<SingletonPmf> table;
    table.reserve(static_cast<std::size_t>(k_max) + 1);
    const int stride = v + 1;
    std::vector<double> cur(static_cast<std::size_t>(stride) * stride, 0.0);
    std::vector<double> nxt(cur.size(), 0.0);
    cur[0] = 1.0;
    table.push_back(detail::marginalize_singletons(cur, 0, v));
    const double inv_v = 1.0 / v;
    for (int ball = 0; ball < k_max; ++ball) {
        std::fill(nxt.begin(), nxt.end(), 0.0);
        const int occ_max = std::min(ball, v);
        for (int s = 0; s <= occ_max; ++s) {
            for (int d = 0; s + d <= occ_max; ++d) {
                const double pr = cur[static_cast<std::size_t>(s) * stride + d];
                if (pr == 0.0) continue;
                const int empty = v - s - d;
                if (empty > 0)
                    nxt[static_cast<std::size_t>(s + 1) * stride + d] += pr * empty * inv_v;
                if (s > 0)
                    nxt[static_cast<std::size_t>(s - 1) * stride + (d + 1)] += pr * s * inv_v;
                if (d > 0)
                    nxt[static_cast<std::size_t>(s) * stride + d] += pr * d * inv_v;
            }
        }
        cur.swap(nxt);
        table.push_back(detail::marginalize_singletons(cur, ball + 1, v));
    }
    return table;
}

// Alternating-sum closed form of the same distribution. Oracle for small
// instances only: the terms alternate in sign and grow factorially, so the
// evaluation throws std::range_error once the largest intermediate term
// exceeds the accumulated result by more than 1e8 (about 8 lost digits).
inline SingletonPmf singleton_pmf_closed(int k, int v) {
    if (k < 1) throw std::domain_error("singleton_pmf_closed: contenders must be >= 1");
    if (v < 1) throw std::domain_error("singleton_pmf_closed: cells must be >= 1");
    SingletonPmf pmf;
    pmf.contenders = k;
    pmf.cells = v;
    const int n3_max = std::min(v, k);
    pmf.probs.assign(static_cast<std::size_t>(n3_max) + 1, 0.0);

    auto log_fact = [](int n) { return std::lgamma(static_cast<double>(n) + 1.0); };
    const double log_vk = k * std::log(static_cast<double>(v));
    // The result is a probability (<= 1); a term of magnitude T contributes
    // roundoff ~ T * eps, so T > 1e8 means the absolute error can exceed 1e-8.
    constexpr double kMaxTermMagnitude = 1e8;

    for (int n3 = 0; n3 <= n3_max; ++n3) {
        double sum = 0.0;
        double max_abs_term = 0.0;
        for (int m = n3; m <= n3_max; ++m) {
            // (-1)^(n3+m) V! k! (V-m)^(k-m) / (V^k n3! (m-n3)! (V-m)! (k-m)!)
            double log_term = log_fact(v) + log_fact(k) - log_vk - log_fact(n3)
                            - log_fact(m - n3) - log_fact(v - m) - log_fact(k - m);
            if (k - m > 0)
                log_term += (k - m) * std::log(static_cast<double>(v - m));
            else if (v - m == 0 && k - m == 0)
                log_term += 0.0;  // (V-m)^0 with V==m: 0^0 = 1 by convention
            const double term = ((n3 + m) % 2 == 0 ? 1.0 : -1.0) * std::exp(log_term);
            sum += term;
            max_abs_term = std::max(max_abs_term, std::abs(term));
        }
        if (max_abs_term > kMaxTermMagnitude)
            throw std::range_error(
                "singleton_pmf_closed: catastrophic cancellation at k=" + std::to_string(k)
                + " v=" + std::to_string(v) + " n3=" + std::to_string(n3));
        pmf.probs[static_cast<std::size_t>(n3)] = std::max(sum, 0.0);
    }
    return pmf;
}

}  // namespace fsard

#endif  // FSARD_OCCUPANCY_HPP
