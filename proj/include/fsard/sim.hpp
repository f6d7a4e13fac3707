#ifndef FSARD_SIM_HPP
#define FSARD_SIM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "fsard/config.hpp"
#include "fsard/rng.hpp"

namespace fsard {

struct SimConfig {
    long long horizon_frames = 100000;  // measured frames
    long long warmup_frames = 10000;    // discarded before measurement
    std::uint64_t seed = 1;
    int replications = 1;
    int threads = 1;

    void validate() const {
        if (horizon_frames < 1) throw std::domain_error("horizon_frames must be >= 1");
        if (warmup_frames < 0) throw std::domain_error("warmup_frames must be >= 0");
        if (replications < 1) throw std::domain_error("replications must be >= 1");
        if (threads < 1) throw std::domain_error("threads must be >= 1");
    }
};

struct SimStats {
    double mean_aoi = 0.0;
    std::vector<double> per_user_aoi;
    double mean_service = 0.0;
    double mean_interdeparture = 0.0;
    double mean_y = 0.0;
    double mean_y2 = 0.0;
    double ci_halfwidth = 0.0;
    long long slots_measured = 0;
    long long deliveries = 0;
};

// Result of one reservation slot: who contended and, of those, who picked a
// mini-slot nobody else picked. winners are ordered by mini-slot index.
struct FrameOutcome {
    std::vector<int> contenders;
    std::vector<int> winners;
};

template <typename RngT>
FrameOutcome resolve_reservation_slot(const std::vector<int>& contenders, int v, RngT& rng) {
    if (v < 1) throw std::domain_error("resolve_reservation_slot: v must be >= 1");
    FrameOutcome out;
    out.contenders = contenders;
    std::vector<int> choice(contenders.size());
    std::vector<int> count(static_cast<std::size_t>(v), 0);
    for (std::size_t i = 0; i < contenders.size(); ++i) {
        choice[i] = rng.next_below(v);
        ++count[static_cast<std::size_t>(choice[i])];
    }
    for (int slot = 0; slot < v; ++slot) {
        if (count[static_cast<std::size_t>(slot)] != 1) continue;
        for (std::size_t i = 0; i < contenders.size(); ++i)
            if (choice[i] == slot) out.winners.push_back(contenders[i]);
    }
    return out;
}

namespace detail {

struct RenewalTracker {
    long long last_departure = -1;   // slot of previous delivery
    long long last_frame_end = -1;   // t* of previous delivery's frame
    double x_sum = 0.0;
    double y_sum = 0.0, y2_sum = 0.0;
    long long x_count = 0, y_count = 0;

    void record(long long departure_slot, long long frame_end, bool measured) {
        if (measured && last_departure >= 0) {
            x_sum += static_cast<double>(departure_slot - last_departure);
            ++x_count;
        }
        if (measured && last_frame_end >= 0) {
            const double y = static_cast<double>(frame_end - last_frame_end);
            y_sum += y;
            y2_sum += y * y;
            ++y_count;
        }
        last_departure = departure_slot;
        last_frame_end = frame_end;
    }
};

struct ReplicationAccum {
    std::vector<double> aoi_sum;  // per user
    std::vector<RenewalTracker> renewals;
    double service_sum = 0.0;
    long long deliveries = 0;
    long long slots_measured = 0;

    explicit ReplicationAccum(int n) : aoi_sum(static_cast<std::size_t>(n), 0.0),
                                       renewals(static_cast<std::size_t>(n)) {}

    SimStats finalize(int n) const {
        SimStats s;
        s.slots_measured = slots_measured;
        s.per_user_aoi.resize(static_cast<std::size_t>(n));
        double total = 0.0;
        for (int u = 0; u < n; ++u) {
            s.per_user_aoi[static_cast<std::size_t>(u)] =
                aoi_sum[static_cast<std::size_t>(u)] / static_cast<double>(slots_measured);
            total += aoi_sum[static_cast<std::size_t>(u)];
        }
        s.mean_aoi = total / (static_cast<double>(slots_measured) * n);
        s.deliveries = deliveries;
        s.mean_service = deliveries > 0 ? service_sum / static_cast<double>(deliveries) : 0.0;
        double x_sum = 0.0, y_sum = 0.0, y2_sum = 0.0;
        long long x_count = 0, y_count = 0;
        for (const auto& r : renewals) {
            x_sum += r.x_sum;
            x_count += r.x_count;
            y_sum += r.y_sum;
            y2_sum += r.y2_sum;
            y_count += r.y_count;
        }
        s.mean_interdeparture = x_count > 0 ? x_sum / static_cast<double>(x_count) : 0.0;
        s.mean_y = y_count > 0 ? y_sum / static_cast<double>(y_count) : 0.0;
        s.mean_y2 = y_count > 0 ? y2_sum / static_cast<double>(y_count) : 0.0;
        return s;
    }
};

enum class TraceEvent { none, arrival, reserve_fail, reserve_win, delivered };

inline const char* trace_event_name(TraceEvent e) {
    switch (e) {
        case TraceEvent::arrival: return "arrival";
        case TraceEvent::reserve_fail: return "reserve_fail";
        case TraceEvent::reserve_win: return "reserve_win";
        case TraceEvent::delivered: return "delivered";
        default: return "none";
    }
}

inline SimStats simulate_fsard_replication(const SystemConfig& cfg, const SimConfig& sim,
                                           int replication, std::ostream* trace) {
    const int n = cfg.num_users;
    const int m = cfg.frame_size;
    Rng rng(sim.seed, static_cast<std::uint64_t>(replication));
    ReplicationAccum acc(n);

    const long long total_frames = sim.warmup_frames + sim.horizon_frames;
    if (total_frames > std::numeric_limits<long long>::max() / m)
        throw std::overflow_error("simulate_fsard: horizon exceeds slot-index capacity");
    acc.slots_measured = sim.horizon_frames * m;

    std::vector<long long> candidate_gen(static_cast<std::size_t>(n), -1);
    std::vector<long long> latest_arrival(static_cast<std::size_t>(n), -1);
    std::vector<long long> delivery_slot(static_cast<std::size_t>(n), -1);
    std::vector<long long> aoi(static_cast<std::size_t>(n), 1);
    std::vector<int> contenders;
    std::vector<TraceEvent> events(static_cast<std::size_t>(n));

    for (long long frame = 0; frame < total_frames; ++frame) {
        const bool measured = frame >= sim.warmup_frames;
        const long long t0 = frame * m;
        // a candidate is the newest arrival of the immediately preceding
        // frame; anything older was either transmitted once or is discarded
        for (int u = 0; u < n; ++u) {
            candidate_gen[static_cast<std::size_t>(u)] = latest_arrival[static_cast<std::size_t>(u)];
            latest_arrival[static_cast<std::size_t>(u)] = -1;
            delivery_slot[static_cast<std::size_t>(u)] = -1;
        }
        for (int s = 0; s < m; ++s) {
            const long long t = t0 + s;
            if (trace) std::fill(events.begin(), events.end(), TraceEvent::none);
            for (int u = 0; u < n; ++u) {
                if (rng.bernoulli(cfg.arrival_prob)) {
                    latest_arrival[static_cast<std::size_t>(u)] = t;
                    if (trace) events[static_cast<std::size_t>(u)] = TraceEvent::arrival;
                }
            }
            if (s == 0) {
                contenders.clear();
                for (int u = 0; u < n; ++u)
                    if (candidate_gen[static_cast<std::size_t>(u)] >= 0
                        && rng.bernoulli(cfg.reservation_prob))
                        contenders.push_back(u);
                FrameOutcome outcome = resolve_reservation_slot(contenders, cfg.mini_slots, rng);
                const int granted = std::min<int>(static_cast<int>(outcome.winners.size()), m - 1);
                for (int i = 0; i < granted; ++i)
                    delivery_slot[static_cast<std::size_t>(outcome.winners[static_cast<std::size_t>(i)])] = t0 + 1 + i;
                if (trace) {
                    for (int u : outcome.contenders) events[static_cast<std::size_t>(u)] = TraceEvent::reserve_fail;
                    for (int i = 0; i < granted; ++i)
                        events[static_cast<std::size_t>(outcome.winners[static_cast<std::size_t>(i)])] = TraceEvent::reserve_win;
                }
            }
            for (int u = 0; u < n; ++u) {
                if (measured) acc.aoi_sum[static_cast<std::size_t>(u)] += static_cast<double>(aoi[static_cast<std::size_t>(u)]);
                if (delivery_slot[static_cast<std::size_t>(u)] == t) {
                    const long long gen = candidate_gen[static_cast<std::size_t>(u)];
                    // sample-path law: the delivered packet was generated in
                    // the immediately preceding frame, so the reset age is in [2, 2M]
                    if (gen < t0 - m || gen >= t0)
                        throw std::logic_error("simulate_fsard: candidate outside preceding frame");
                    const long long service = t - gen + 1;
                    aoi[static_cast<std::size_t>(u)] = service;  // delta(t+1) = g(t) + 1
                    if (measured) {
                        acc.service_sum += static_cast<double>(service);
                        ++acc.deliveries;
                    }
                    acc.renewals[static_cast<std::size_t>(u)].record(t, t0 + m, measured);
                    if (trace) events[static_cast<std::size_t>(u)] = TraceEvent::delivered;
                } else {
                    ++aoi[static_cast<std::size_t>(u)];
                }
            }
            if (trace) {
                for (int u = 0; u < n; ++u)
                    *trace << t << ',' << u << ',' << aoi[static_cast<std::size_t>(u)] << ','
                           << trace_event_name(events[static_cast<std::size_t>(u)]) << '\n';
            }
        }
    }
    return acc.finalize(n);
}

inline SimStats simulate_aloha_replication(int n, double rho, double tau,
                                           const SimConfig& sim, int replication) {
    Rng rng(sim.seed, static_cast<std::uint64_t>(replication));
    ReplicationAccum acc(n);
    const long long total_slots = sim.warmup_frames + sim.horizon_frames;
    acc.slots_measured = sim.horizon_frames;

    std::vector<long long> buffer_gen(static_cast<std::size_t>(n), -1);
    std::vector<long long> aoi(static_cast<std::size_t>(n), 1);
    for (long long t = 0; t < total_slots; ++t) {
        const bool measured = t >= sim.warmup_frames;
        for (int u = 0; u < n; ++u)
            if (rng.bernoulli(rho)) buffer_gen[static_cast<std::size_t>(u)] = t;
        int transmitters = 0, sender = -1;
        for (int u = 0; u < n; ++u) {
            if (buffer_gen[static_cast<std::size_t>(u)] >= 0 && rng.bernoulli(tau)) {
                ++transmitters;
                sender = u;
            }
        }
        const int delivered = (transmitters == 1) ? sender : -1;
        for (int u = 0; u < n; ++u) {
            if (measured) acc.aoi_sum[static_cast<std::size_t>(u)] += static_cast<double>(aoi[static_cast<std::size_t>(u)]);
            if (u == delivered) {
                const long long service = t - buffer_gen[static_cast<std::size_t>(u)] + 1;
                aoi[static_cast<std::size_t>(u)] = service;
                buffer_gen[static_cast<std::size_t>(u)] = -1;
                if (measured) {
                    acc.service_sum += static_cast<double>(service);
                    ++acc.deliveries;
                }
                acc.renewals[static_cast<std::size_t>(u)].record(t, t + 1, measured);
            } else {
                ++aoi[static_cast<std::size_t>(u)];
            }
        }
    }
    return acc.finalize(n);
}

}  // namespace detail

// Slot-weighted aggregation of independent replications. ci_halfwidth is the
// 95% normal interval on the replication means of the time-average AoI.
inline SimStats aggregate_replications(const std::vector<SimStats>& stats) {
    if (stats.empty())
        throw std::invalid_argument("aggregate_replications: empty list");
    const std::size_t n_users = stats.front().per_user_aoi.size();
    for (const auto& s : stats)
        if (s.per_user_aoi.size() != n_users)
            throw std::invalid_argument("aggregate_replications: mismatched configurations");

    SimStats out;
    out.per_user_aoi.assign(n_users, 0.0);
    double w_total = 0.0;
    for (const auto& s : stats) {
        const double w = static_cast<double>(s.slots_measured);
        w_total += w;
        out.mean_aoi += w * s.mean_aoi;
        out.mean_service += w * s.mean_service;
        out.mean_interdeparture += w * s.mean_interdeparture;
        out.mean_y += w * s.mean_y;
        out.mean_y2 += w * s.mean_y2;
        for (std::size_t u = 0; u < n_users; ++u)
            out.per_user_aoi[u] += w * s.per_user_aoi[u];
        out.slots_measured += s.slots_measured;
        out.deliveries += s.deliveries;
    }
    out.mean_aoi /= w_total;
    out.mean_service /= w_total;
    out.mean_interdeparture /= w_total;
    out.mean_y /= w_total;
    out.mean_y2 /= w_total;
    for (std::size_t u = 0; u < n_users; ++u) out.per_user_aoi[u] /= w_total;

    const std::size_t r = stats.size();
    if (r > 1) {
        double mean = 0.0;
        for (const auto& s : stats) mean += s.mean_aoi;
        mean /= static_cast<double>(r);
        double ss = 0.0;
        for (const auto& s : stats) ss += (s.mean_aoi - mean) * (s.mean_aoi - mean);
        const double sd = std::sqrt(ss / static_cast<double>(r - 1));
        out.ci_halfwidth = 1.96 * sd / std::sqrt(static_cast<double>(r));
    }
    return out;
}

namespace detail {

template <typename RunOne>
SimStats run_replications(const SimConfig& sim, RunOne&& run_one) {
    std::vector<SimStats> per_rep(static_cast<std::size_t>(sim.replications));
    if (sim.threads <= 1 || sim.replications == 1) {
        for (int r = 0; r < sim.replications; ++r)
            per_rep[static_cast<std::size_t>(r)] = run_one(r);
    } else {
        const int workers = std::min(sim.threads, sim.replications);
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (int r = w; r < sim.replications; r += workers)
                    per_rep[static_cast<std::size_t>(r)] = run_one(r);
            });
        }
        for (auto& th : pool) th.join();
    }
    return aggregate_replications(per_rep);
}

}  // namespace detail

// Monte Carlo estimate of the protocol's AoI statistics. Deterministic in
// (seed, config); replications use independent streams and may run on
// several threads without changing the result. `trace` is only meaningful
// for short single-replication diagnostic runs.
inline SimStats simulate_fsard(const SystemConfig& cfg, const SimConfig& sim,
                               std::ostream* trace = nullptr) {
    cfg.validate();
    sim.validate();
    if (trace) *trace << "slot,user,aoi,event\n";
    return detail::run_replications(sim, [&](int r) {
        return detail::simulate_fsard_replication(cfg, sim, r, r == 0 ? trace : nullptr);
    });
}

// Slotted-ALOHA baseline at the same slot granularity: Bernoulli arrivals
// replace the buffered packet, every buffered user transmits with prob tau,
// a slot succeeds iff exactly one user transmits. horizon/warmup counts in
// SimConfig are interpreted as slots.
inline SimStats simulate_slotted_aloha(int n, double rho, double tau, const SimConfig& sim) {
    if (n < 1) throw std::domain_error("simulate_slotted_aloha: n must be >= 1");
    if (!(rho > 0.0) || rho > 1.0) throw std::domain_error("simulate_slotted_aloha: rho must be in (0,1]");
    if (!(tau > 0.0) || tau > 1.0) throw std::domain_error("simulate_slotted_aloha: tau must be in (0,1]");
    sim.validate();
    return detail::run_replications(sim, [&](int r) {
        return detail::simulate_aloha_replication(n, rho, tau, sim, r);
    });
}

}  // namespace fsard

#endif  // FSARD_SIM_HPP
