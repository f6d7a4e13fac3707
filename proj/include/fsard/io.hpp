#ifndef FSARD_IO_HPP
#define FSARD_IO_HPP

#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsard/analytic.hpp"
#include "fsard/sim.hpp"
#include "fsard/sweep.hpp"

namespace fsard {

using json = nlohmann::ordered_json;

namespace detail {

// shortest text that parses back to the same double
inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ',')) fields.push_back(cur);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace detail

inline json report_to_json(const AnalyticReport& r) {
    json j;
    j["p"] = r.p;
    j["p_s"] = r.p_s;
    j["phi"] = r.phi;
    j["e_l"] = r.e_l;
    j["e_alpha"] = r.e_alpha;
    j["e_s"] = r.e_s;
    j["e_w"] = r.e_w;
    j["e_w2"] = r.e_w2;
    j["e_k"] = r.e_k;
    j["e_k2"] = r.e_k2;
    j["e_y"] = r.e_y;
    j["e_y2"] = r.e_y2;
    j["aaoi"] = r.aaoi;
    return j;
}

inline AnalyticReport report_from_json(const json& j) {
    AnalyticReport r;
    r.p = j.at("p");
    r.p_s = j.at("p_s");
    r.phi = j.at("phi").get<std::vector<double>>();
    r.e_l = j.at("e_l");
    r.e_alpha = j.at("e_alpha");
    r.e_s = j.at("e_s");
    r.e_w = j.at("e_w");
    r.e_w2 = j.at("e_w2");
    r.e_k = j.at("e_k");
    r.e_k2 = j.at("e_k2");
    r.e_y = j.at("e_y");
    r.e_y2 = j.at("e_y2");
    r.aaoi = j.at("aaoi");
    return r;
}

inline json stats_to_json(const SimStats& s) {
    json j;
    j["mean_aoi"] = s.mean_aoi;
    j["per_user_aoi"] = s.per_user_aoi;
    j["mean_service"] = s.mean_service;
    j["mean_interdeparture"] = s.mean_interdeparture;
    j["mean_y"] = s.mean_y;
    j["mean_y2"] = s.mean_y2;
    j["ci_halfwidth"] = s.ci_halfwidth;
    j["slots_measured"] = s.slots_measured;
    j["deliveries"] = s.deliveries;
    return j;
}

inline SimStats stats_from_json(const json& j) {
    SimStats s;
    s.mean_aoi = j.at("mean_aoi");
    s.per_user_aoi = j.at("per_user_aoi").get<std::vector<double>>();
    s.mean_service = j.at("mean_service");
    s.mean_interdeparture = j.at("mean_interdeparture");
    s.mean_y = j.at("mean_y");
    s.mean_y2 = j.at("mean_y2");
    s.ci_halfwidth = j.at("ci_halfwidth");
    s.slots_measured = j.at("slots_measured");
    s.deliveries = j.at("deliveries");
    return s;
}

inline const char* source_name(ObjectiveSource s) {
    return s == ObjectiveSource::analytic ? "analytic" : "simulated";
}

inline ObjectiveSource source_from_name(const std::string& s) {
    if (s == "analytic") return ObjectiveSource::analytic;
    if (s == "simulated") return ObjectiveSource::simulated;
    throw std::invalid_argument("unknown objective source: " + s);
}

inline std::string sweep_to_csv(const SweepResult& r) {
    std::string out = "param1,param2,aaoi,ci,source,best\n";
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        const auto& pt = r.points[i];
        if (!pt.ok) continue;
        out += detail::fmt(pt.param1) + ',' + detail::fmt(pt.param2) + ','
             + detail::fmt(pt.aaoi) + ',' + detail::fmt(pt.ci) + ','
             + source_name(pt.source) + ',' + (i == r.best_index ? "1" : "0") + '\n';
    }
    return out;
}

inline SweepResult sweep_from_csv(const std::string& csv) {
    std::istringstream ss(csv);
    std::string line;
    if (!std::getline(ss, line) || line != "param1,param2,aaoi,ci,source,best")
        throw std::invalid_argument("sweep_from_csv: missing or unexpected header");
    SweepResult r;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != 6) throw std::invalid_argument("sweep_from_csv: bad row: " + line);
        SweepPoint pt;
        pt.param1 = std::stod(f[0]);
        pt.param2 = std::stod(f[1]);
        pt.aaoi = std::stod(f[2]);
        pt.ci = std::stod(f[3]);
        pt.source = source_from_name(f[4]);
        if (f[5] == "1") r.best_index = r.points.size();
        r.points.push_back(std::move(pt));
    }
    return r;
}

inline json sweep_to_json(const SweepResult& r) {
    json j;
    json points = json::array();
    for (const auto& pt : r.points) {
        json p;
        p["param1"] = pt.param1;
        p["param2"] = pt.param2;
        p["aaoi"] = pt.aaoi;
        p["ci"] = pt.ci;
        p["source"] = source_name(pt.source);
        p["ok"] = pt.ok;
        if (!pt.ok) p["error"] = pt.error;
        points.push_back(std::move(p));
    }
    j["points"] = std::move(points);
    j["best_index"] = r.best_index;
    j["best_is_ambiguous"] = r.best_is_ambiguous;
    return j;
}

inline SweepResult sweep_from_json(const json& j) {
    SweepResult r;
    for (const auto& p : j.at("points")) {
        SweepPoint pt;
        pt.param1 = p.at("param1");
        pt.param2 = p.at("param2");
        pt.aaoi = p.at("aaoi");
        pt.ci = p.at("ci");
        pt.source = source_from_name(p.at("source").get<std::string>());
        pt.ok = p.at("ok");
        if (!pt.ok) pt.error = p.at("error").get<std::string>();
        r.points.push_back(std::move(pt));
    }
    r.best_index = j.at("best_index");
    r.best_is_ambiguous = j.at("best_is_ambiguous");
    return r;
}

inline std::string table_to_csv(const std::vector<ComparisonCell>& cells) {
    std::string out = "scheme,num_users,mini_slots,rho,value,reference,rel_dev,best_m,best_prob,ci\n";
    for (const auto& c : cells) {
        out += c.scheme + ',' + std::to_string(c.num_users) + ','
             + std::to_string(c.mini_slots) + ',' + detail::fmt(c.rho) + ','
             + detail::fmt(c.value) + ',' + detail::fmt(c.reference) + ','
             + detail::fmt(c.rel_dev) + ',' + detail::fmt(c.best_m) + ','
             + detail::fmt(c.best_prob) + ',' + detail::fmt(c.ci) + '\n';
    }
    return out;
}

inline json table_to_json(const std::vector<ComparisonCell>& cells) {
    json arr = json::array();
    for (const auto& c : cells) {
        json j;
        j["scheme"] = c.scheme;
        j["num_users"] = c.num_users;
        j["mini_slots"] = c.mini_slots;
        j["rho"] = c.rho;
        j["value"] = c.value;
        j["reference"] = c.reference;
        j["rel_dev"] = c.rel_dev;
        j["best_m"] = c.best_m;
        j["best_prob"] = c.best_prob;
        j["ci"] = c.ci;
        arr.push_back(std::move(j));
    }
    return arr;
}

}  // namespace fsard

#endif  // FSARD_IO_HPP
