#ifndef FSARD_ANALYTIC_HPP
#define FSARD_ANALYTIC_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fsard/config.hpp"
#include "fsard/occupancy.hpp"

namespace fsard {

// Every closed-form quantity of one configuration. phi is stored densely for
// alpha = 2..M; use phi_at(alpha) rather than indexing by hand.
struct AnalyticReport {
    double p = 0.0;    // per-frame arrival probability
    double p_s = 0.0;  // reservation success probability
    std::vector<double> phi;  // phi[alpha - 2], alpha = 2..M
    double e_l = 0.0, e_alpha = 0.0, e_s = 0.0;
    double e_w = 0.0, e_w2 = 0.0;
    double e_k = 0.0, e_k2 = 0.0;
    double e_y = 0.0, e_y2 = 0.0;
    double aaoi = 0.0;

    double phi_at(int alpha) const {
        if (alpha < 2 || alpha - 2 >= static_cast<int>(phi.size())) return 0.0;
        return phi[static_cast<std::size_t>(alpha - 2)];
    }
};

struct ServiceMoments {
    double e_l, e_alpha, e_s;
};

struct RenewalMoments {
    double e_k, e_k2, e_y, e_y2;
};

// Probability that a user has at least one arrival during an m-slot frame.
inline double frame_arrival_prob(double rho, int m) {
    if (!(rho > 0.0) || rho > 1.0)
        throw std::domain_error("frame_arrival_prob: rho must be in (0,1]");
    if (m < 1) throw std::domain_error("frame_arrival_prob: m must be >= 1");
    return 1.0 - std::pow(1.0 - rho, m);
}

// First two moments of the waiting time W, supported on {0, M, 2M, ...} with
// Pr{W = xM} = (1-p)^x p.
inline std::pair<double, double> waiting_moments(double p, int m) {
    if (!(p > 0.0) || p > 1.0)
        throw std::domain_error("waiting_moments: p must be in (0,1]");
    const double e_w = (1.0 - p) * m / p;
    const double e_w2 = (p * p - 3.0 * p + 2.0) * m * m / (p * p);
    return {e_w, e_w2};
}

namespace detail {

// Binomial(n, p) pmf by ratio recurrence; no factorials, stable for large n.
inline std::vector<double> binomial_pmf(int n, double p) {
    std::vector<double> pmf(static_cast<std::size_t>(n) + 1, 0.0);
    if (p <= 0.0) {
        pmf[0] = 1.0;
        return pmf;
    }
    if (p >= 1.0) {
        pmf[static_cast<std::size_t>(n)] = 1.0;
        return pmf;
    }
    // Start at the mode's side with the log of (1-p)^n to dodge underflow for
    // large n: fall back to log-space seeding when (1-p)^n underflows.
    double term = std::pow(1.0 - p, n);
    if (term > 0.0) {
        const double ratio = p / (1.0 - p);
        for (int j = 0; j <= n; ++j) {
            pmf[static_cast<std::size_t>(j)] = term;
            if (j < n) term *= ratio * (n - j) / (j + 1.0);
        }
    } else {
        const double lp = std::log(p), lq = std::log1p(-p);
        for (int j = 0; j <= n; ++j) {
            const double log_c = std::lgamma(n + 1.0) - std::lgamma(j + 1.0)
                               - std::lgamma(n - j + 1.0);
            pmf[static_cast<std::size_t>(j)] = std::exp(log_c + j * lp + (n - j) * lq);
        }
    }
    return pmf;
}

// Shared double sum over (n1 other users with packets, n2 of them reserving).
// Calls f(n2, weight, pmf of n2+1 contenders) for every pair with weight
// Binom(N-1, n1, p) * Binom(n1, n2, gamma).
template <typename F>
void for_each_contention_mix(const SystemConfig& cfg, double p, F&& f) {
    const int n_others = cfg.num_users - 1;
    const auto occupancy = singleton_pmf_table(n_others + 1, cfg.mini_slots);
    const auto outer = binomial_pmf(n_others, p);
    for (int n1 = 0; n1 <= n_others; ++n1) {
        const double w1 = outer[static_cast<std::size_t>(n1)];
        if (w1 == 0.0) continue;
        const auto inner = binomial_pmf(n1, cfg.reservation_prob);
        for (int n2 = 0; n2 <= n1; ++n2) {
            const double w = w1 * inner[static_cast<std::size_t>(n2)];
            if (w == 0.0) continue;
            f(n2, w, occupancy[static_cast<std::size_t>(n2) + 1]);
        }
    }
}

}  // namespace detail

// Probability that the tagged user's reservation attempt ends in a delivered
// status update, conditioned on it having a packet and choosing to reserve.
inline double reservation_success_prob(const SystemConfig& cfg) {
    cfg.validate();
    const double p = frame_arrival_prob(cfg.arrival_prob, cfg.frame_size);
    const int data_slots = cfg.frame_size - 1;
    double p_s = 0.0;
    detail::for_each_contention_mix(cfg, p, [&](int n2, double w, const SingletonPmf& pmf) {
        double cond = 0.0;
        for (int n3 = 1; n3 <= pmf.max_singletons(); ++n3)
            cond += pmf.at(n3) * std::min(n3, data_slots);
        p_s += w * cond / (n2 + 1);
    });
    return p_s;
}

// phi[alpha-2] = probability the tagged reserver delivers in frame slot alpha
// (data slot alpha-1), alpha = 2..M. Sums to reservation_success_prob.
inline std::vector<double> data_slot_success_pmf(const SystemConfig& cfg) {
    cfg.validate();
    const double p = frame_arrival_prob(cfg.arrival_prob, cfg.frame_size);
    std::vector<double> phi(static_cast<std::size_t>(cfg.frame_size - 1), 0.0);
    detail::for_each_contention_mix(cfg, p, [&](int n2, double w, const SingletonPmf& pmf) {
        const double per_position = w / (n2 + 1);
        for (int n3 = 1; n3 <= pmf.max_singletons(); ++n3) {
            const double contrib = per_position * pmf.at(n3);
            if (contrib == 0.0) continue;
            // the tagged user is equally likely to be any of the first n3
            // reservation positions; position j delivers in frame slot j+1
            const int alpha_max = std::min(n3 + 1, cfg.frame_size);
            for (int alpha = 2; alpha <= alpha_max; ++alpha)
                phi[static_cast<std::size_t>(alpha - 2)] += contrib;
        }
    });
    return phi;
}

// E[l] (slots a kept packet ages before its transmission frame), E[alpha]
// (frame slot of its delivery), and E[S] = E[l] + E[alpha].
inline ServiceMoments service_moments(const SystemConfig& cfg) {
    cfg.validate();
    const double rho = cfg.arrival_prob;
    const int m = cfg.frame_size;
    const double q_m = std::pow(1.0 - rho, m);
    const double e_l = 1.0 / rho - m * q_m / (1.0 - q_m);
    const auto phi = data_slot_success_pmf(cfg);
    double p_s = 0.0, weighted = 0.0;
    for (int alpha = 2; alpha <= m; ++alpha) {
        p_s += phi[static_cast<std::size_t>(alpha - 2)];
        weighted += phi[static_cast<std::size_t>(alpha - 2)] * alpha;
    }
    if (p_s <= 0.0)
        throw degenerate_config_error("service_moments: reservation success probability is 0");
    const double e_alpha = weighted / p_s;
    return {e_l, e_alpha, e_l + e_alpha};
}

namespace detail {

inline RenewalMoments renewal_moments_from(double gamma_ps, double e_w, double e_w2,
                                           double p, int m) {
    const double q = gamma_ps;
    const double e_k = (m + (1.0 - q) * e_w) / q;
    const double e_k2 = (m * static_cast<double>(m)
                         + (1.0 - q) * (e_w2 + 2.0 * e_k * e_w + 2.0 * m * (e_k + e_w))) / q;
    const double e_y = e_w + e_k;
    // closed form of E[W^2] + E[K^2] + 2 E[W]E[K]
    const double m2 = static_cast<double>(m) * m;
    const double e_y2 = m2 / q + 2.0 * m2 * (1.0 / q - p) / (q * p * p)
                      + m2 * (1.0 - p) / (q * p);
    return {e_k, e_k2, e_y, e_y2};
}

}  // namespace detail

// Moments of the residual renewal time K and the full renewal interval Y.
inline RenewalMoments renewal_moments(const SystemConfig& cfg) {
    cfg.validate();
    const double p = frame_arrival_prob(cfg.arrival_prob, cfg.frame_size);
    const double p_s = reservation_success_prob(cfg);
    const double q = cfg.reservation_prob * p_s;
    if (q <= 0.0)
        throw degenerate_config_error("renewal_moments: gamma * p_s is 0");
    const auto [e_w, e_w2] = waiting_moments(p, cfg.frame_size);
    return detail::renewal_moments_from(q, e_w, e_w2, p, cfg.frame_size);
}

// Full closed-form chain. The headline number is evaluated by the flattened
// expression and cross-checked against E[Y^2]/2E[Y] + E[S] - 1/2; any
// disagreement beyond 1e-10 relative means a transcription bug and throws.
inline AnalyticReport average_aoi(const SystemConfig& cfg) {
    cfg.validate();
    AnalyticReport r;
    const int m = cfg.frame_size;
    const double rho = cfg.arrival_prob;
    r.p = frame_arrival_prob(rho, m);
    r.phi = data_slot_success_pmf(cfg);
    double p_s = 0.0, weighted = 0.0;
    for (int alpha = 2; alpha <= m; ++alpha) {
        p_s += r.phi[static_cast<std::size_t>(alpha - 2)];
        weighted += r.phi[static_cast<std::size_t>(alpha - 2)] * alpha;
    }
    r.p_s = p_s;
    const double q = cfg.reservation_prob * p_s;
    if (q <= 0.0)
        throw degenerate_config_error("average_aoi: gamma * p_s is 0");
    r.e_alpha = weighted / p_s;
    const double q_m = std::pow(1.0 - rho, m);
    r.e_l = 1.0 / rho - m * q_m / (1.0 - q_m);
    r.e_s = r.e_l + r.e_alpha;
    std::tie(r.e_w, r.e_w2) = waiting_moments(r.p, m);
    const auto rm = detail::renewal_moments_from(q, r.e_w, r.e_w2, r.p, m);
    r.e_k = rm.e_k;
    r.e_k2 = rm.e_k2;
    r.e_y = rm.e_y;
    r.e_y2 = rm.e_y2;

    // flattened expression
    r.aaoi = m / (q * r.p) - m * (1.0 - r.p) / r.p + 1.0 / rho
           - (m + 1.0) / 2.0 + r.e_alpha;
    // moment-chain route through the K recursion (E[Y^2] composed from
    // E[W^2], E[K^2], E[W]E[K] rather than the flattened closed form)
    const double y2_composed = r.e_w2 + r.e_k2 + 2.0 * r.e_w * r.e_k;
    const double via_moments = y2_composed / (2.0 * r.e_y) + r.e_s - 0.5;
    if (std::abs(r.aaoi - via_moments) > 1e-10 * std::abs(r.aaoi))
        throw std::logic_error("average_aoi: closed form and moment chain disagree: "
                               + std::to_string(r.aaoi) + " vs " + std::to_string(via_moments));
    return r;
}

}  // namespace fsard

#endif  // FSARD_ANALYTIC_HPP
