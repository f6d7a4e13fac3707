#ifndef FSARD_CLI_HPP
#define FSARD_CLI_HPP

#include <fstream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fsard/analytic.hpp"
#include "fsard/io.hpp"
#include "fsard/sim.hpp"
#include "fsard/sweep.hpp"

namespace fsard::cli {

// fixed default so every randomized command is reproducible without flags
inline constexpr std::uint64_t kDefaultSeed = 20240801;

namespace detail {

inline void write_output(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << text;
    if (!f) throw std::runtime_error("write failed: " + path);
}

inline std::string report_to_csv(const AnalyticReport& r) {
    std::string header = "p,p_s,e_l,e_alpha,e_s,e_w,e_w2,e_k,e_k2,e_y,e_y2,aaoi";
    std::string row = fsard::detail::fmt(r.p) + ',' + fsard::detail::fmt(r.p_s);
    for (double v : {r.e_l, r.e_alpha, r.e_s, r.e_w, r.e_w2, r.e_k, r.e_k2, r.e_y, r.e_y2, r.aaoi})
        row += ',' + fsard::detail::fmt(v);
    for (std::size_t i = 0; i < r.phi.size(); ++i) {
        header += ",phi_" + std::to_string(i + 2);
        row += ',' + fsard::detail::fmt(r.phi[i]);
    }
    return header + '\n' + row + '\n';
}

inline std::string stats_to_csv(const SimStats& s) {
    std::string out =
        "mean_aoi,mean_service,mean_interdeparture,mean_y,mean_y2,ci_halfwidth,slots_measured,deliveries\n";
    out += fsard::detail::fmt(s.mean_aoi) + ',' + fsard::detail::fmt(s.mean_service) + ','
         + fsard::detail::fmt(s.mean_interdeparture) + ',' + fsard::detail::fmt(s.mean_y) + ','
         + fsard::detail::fmt(s.mean_y2) + ',' + fsard::detail::fmt(s.ci_halfwidth) + ','
         + std::to_string(s.slots_measured) + ',' + std::to_string(s.deliveries) + '\n';
    return out;
}

struct CommonFlags {
    SystemConfig cfg;
    SimConfig sim;
    std::string format = "json";
    std::string output_path;
};

inline void add_system_flags(CLI::App* cmd, SystemConfig& cfg, bool need_m = true) {
    cmd->add_option("-N,--users", cfg.num_users, "number of users")->check(CLI::PositiveNumber);
    if (need_m)
        cmd->add_option("-M,--frame", cfg.frame_size, "slots per frame (>= 2)")
            ->check(CLI::Range(2, 1000000));
    cmd->add_option("-V,--minislots", cfg.mini_slots, "mini-slots in the reservation slot")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--rho", cfg.arrival_prob, "per-slot arrival probability, (0,1]")
        ->check(CLI::Range(1e-12, 1.0));
    cmd->add_option("--gamma", cfg.reservation_prob, "reservation probability, (0,1]")
        ->check(CLI::Range(1e-12, 1.0));
}

inline void add_sim_flags(CLI::App* cmd, SimConfig& sim) {
    cmd->add_option("--frames", sim.horizon_frames, "measured frames (slots for aloha)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--warmup", sim.warmup_frames, "discarded warmup frames")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", sim.seed, "RNG seed (fixed default, never wall-clock)");
    cmd->add_option("--replications", sim.replications, "independent replications")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--threads", sim.threads, "worker threads for replications/grid")
        ->check(CLI::PositiveNumber);
}

inline void add_output_flags(CLI::App* cmd, std::string& format, std::string& path) {
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("-o,--output", path, "write to file instead of stdout");
}

}  // namespace detail

// Dispatches one invocation. Returns 0 on success, 2 on usage/validation
// errors, 1 on runtime failures. All output goes to `out`/`err` so callers
// (and tests) can capture it.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Average AoI of the FSA-RD reservation protocol: closed form, "
                 "Monte Carlo simulation, and parameter sweeps"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file");

    detail::CommonFlags an, si, co;
    an.cfg = {30, 5, 4, 0.02, 0.3};
    si.cfg = an.cfg;
    co.cfg = an.cfg;

    // analyze: closed-form report for one configuration
    auto* analyze = app.add_subcommand("analyze", "closed-form AAoI report for one config");
    detail::add_system_flags(analyze, an.cfg);
    detail::add_output_flags(analyze, an.format, an.output_path);

    // simulate: Monte Carlo run of either protocol
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo AoI estimate");
    std::string protocol = "fsard";
    double tau = 0.1;
    std::string trace_path;
    simulate->add_option("--protocol", protocol, "fsard or aloha")
        ->check(CLI::IsMember({"fsard", "aloha"}));
    detail::add_system_flags(simulate, si.cfg);
    simulate->add_option("--tau", tau, "aloha transmission probability, (0,1]")
        ->check(CLI::Range(1e-12, 1.0));
    detail::add_sim_flags(simulate, si.sim);
    simulate->add_option("--trace", trace_path, "per-slot event trace CSV (short runs only)");
    detail::add_output_flags(simulate, si.format, si.output_path);

    // sweep: grid evaluation with argmin
    auto* sweep = app.add_subcommand("sweep", "grid sweep with argmin");
    std::string sweep_protocol = "fsard";
    detail::CommonFlags sw;
    sw.cfg = an.cfg;
    int m_min = 2, m_max = 0;
    double gamma_start = 0.005, gamma_stop = 1.0, gamma_step = 0.005;
    double tau_start = 0.005, tau_stop = 1.0, tau_step = 0.005;
    sweep->add_option("--protocol", sweep_protocol, "fsard (analytic) or aloha (simulated)")
        ->check(CLI::IsMember({"fsard", "aloha"}));
    detail::add_system_flags(sweep, sw.cfg, false);
    sweep->add_option("--m-min", m_min)->check(CLI::Range(2, 1000000));
    sweep->add_option("--m-max", m_max, "default max(2V+2, 40)");
    sweep->add_option("--gamma-start", gamma_start);
    sweep->add_option("--gamma-stop", gamma_stop);
    sweep->add_option("--gamma-step", gamma_step);
    sweep->add_option("--tau-start", tau_start);
    sweep->add_option("--tau-stop", tau_stop);
    sweep->add_option("--tau-step", tau_step);
    detail::add_sim_flags(sweep, sw.sim);
    detail::add_output_flags(sweep, sw.format, sw.output_path);

    // compare: analytic vs simulated AAoI for one config
    auto* compare = app.add_subcommand("compare", "analytic vs simulated AAoI for one config");
    detail::add_system_flags(compare, co.cfg);
    detail::add_sim_flags(compare, co.sim);
    detail::add_output_flags(compare, co.format, co.output_path);

    // table1: the optimized-comparison table with reference values
    auto* table1 = app.add_subcommand("table1", "optimized comparison table with reference values");
    detail::CommonFlags tb;
    bool skip_aloha = false;
    double t1_tau_start = 0.01, t1_tau_stop = 0.6, t1_tau_step = 0.01;
    detail::add_sim_flags(table1, tb.sim);
    table1->add_flag("--skip-aloha", skip_aloha, "only the analytic cells");
    table1->add_option("--tau-start", t1_tau_start);
    table1->add_option("--tau-stop", t1_tau_stop);
    table1->add_option("--tau-step", t1_tau_step);
    detail::add_output_flags(table1, tb.format, tb.output_path);

    an.sim.seed = si.sim.seed = co.sim.seed = sw.sim.seed = tb.sim.seed = kDefaultSeed;

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return 2;
    }

    try {
        if (analyze->parsed()) {
            an.cfg.validate();
            const AnalyticReport r = average_aoi(an.cfg);
            detail::write_output(an.format == "json" ? report_to_json(r).dump(2) + "\n"
                                                     : detail::report_to_csv(r),
                                 an.output_path, out);
        } else if (simulate->parsed()) {
            SimStats stats;
            if (protocol == "aloha") {
                stats = simulate_slotted_aloha(si.cfg.num_users, si.cfg.arrival_prob, tau, si.sim);
            } else {
                si.cfg.validate();
                std::unique_ptr<std::ofstream> trace;
                if (!trace_path.empty()) {
                    trace = std::make_unique<std::ofstream>(trace_path, std::ios::binary);
                    if (!*trace) throw std::runtime_error("cannot open trace file: " + trace_path);
                }
                stats = simulate_fsard(si.cfg, si.sim, trace.get());
            }
            detail::write_output(si.format == "json" ? stats_to_json(stats).dump(2) + "\n"
                                                     : detail::stats_to_csv(stats),
                                 si.output_path, out);
        } else if (sweep->parsed()) {
            GridSpec grid;
            grid.num_users = sw.cfg.num_users;
            grid.mini_slots = sw.cfg.mini_slots;
            grid.arrival_prob = sw.cfg.arrival_prob;
            SweepResult result;
            if (sweep_protocol == "fsard") {
                grid.m_min = m_min;
                grid.m_max = m_max > 0 ? m_max : default_m_max(sw.cfg.mini_slots);
                grid.gamma_grid = probability_grid(gamma_start, gamma_stop, gamma_step);
                result = sweep_fsard(grid);
            } else {
                grid.tau_grid = probability_grid(tau_start, tau_stop, tau_step);
                result = optimize_aloha(sw.cfg.num_users, sw.cfg.arrival_prob, grid, sw.sim);
            }
            detail::write_output(sw.format == "json" ? sweep_to_json(result).dump(2) + "\n"
                                                     : sweep_to_csv(result),
                                 sw.output_path, out);
        } else if (compare->parsed()) {
            co.cfg.validate();
            const AnalyticReport r = average_aoi(co.cfg);
            const SimStats stats = simulate_fsard(co.cfg, co.sim);
            json j;
            j["analytic"] = report_to_json(r);
            j["simulated"] = stats_to_json(stats);
            j["rel_dev"] = (stats.mean_aoi - r.aaoi) / r.aaoi;
            if (co.format == "json") {
                detail::write_output(j.dump(2) + "\n", co.output_path, out);
            } else {
                std::string csv = "analytic_aaoi,simulated_aaoi,ci_halfwidth,rel_dev\n";
                csv += fsard::detail::fmt(r.aaoi) + ',' + fsard::detail::fmt(stats.mean_aoi) + ','
                     + fsard::detail::fmt(stats.ci_halfwidth) + ','
                     + fsard::detail::fmt(j["rel_dev"].get<double>()) + '\n';
                detail::write_output(csv, co.output_path, out);
            }
        } else if (table1->parsed()) {
            Table1Options opts;
            opts.include_aloha = !skip_aloha;
            opts.tau_grid = probability_grid(t1_tau_start, t1_tau_stop, t1_tau_step);
            const auto cells = reproduce_table1(tb.sim, opts);
            detail::write_output(tb.format == "json" ? table_to_json(cells).dump(2) + "\n"
                                                     : table_to_csv(cells),
                                 tb.output_path, out);
        }
    } catch (const std::domain_error& e) {
        err << "invalid parameter: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace fsard::cli

#endif  // FSARD_CLI_HPP
