#include <doctest.h>

#include "fsard/io.hpp"

using namespace fsard;

TEST_CASE("analytic report JSON carries the documented keys and round-trips") {
    const AnalyticReport r = average_aoi({30, 5, 4, 0.02, 0.3});
    const json j = report_to_json(r);
    const char* keys[] = {"p", "p_s", "phi", "e_l", "e_alpha", "e_s", "e_w",
                          "e_w2", "e_k", "e_k2", "e_y", "e_y2", "aaoi"};
    std::size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        REQUIRE(i < std::size(keys));
        CHECK(it.key() == keys[i]);  // stable key order
    }
    const AnalyticReport back = report_from_json(json::parse(j.dump()));
    CHECK(back.p == r.p);
    CHECK(back.p_s == r.p_s);
    CHECK(back.phi == r.phi);
    CHECK(back.aaoi == r.aaoi);
    CHECK(back.e_k2 == r.e_k2);
}

TEST_CASE("sim stats JSON round-trips losslessly") {
    SimStats s;
    s.mean_aoi = 3.14159265358979;
    s.per_user_aoi = {3.0, 3.3};
    s.mean_service = 2.5;
    s.mean_interdeparture = 7.125;
    s.mean_y = 7.0;
    s.mean_y2 = 55.5;
    s.ci_halfwidth = 0.25;
    s.slots_measured = 123456789;
    s.deliveries = 4242;
    const SimStats back = stats_from_json(json::parse(stats_to_json(s).dump()));
    CHECK(back.mean_aoi == s.mean_aoi);
    CHECK(back.per_user_aoi == s.per_user_aoi);
    CHECK(back.slots_measured == s.slots_measured);
    CHECK(back.deliveries == s.deliveries);
}

TEST_CASE("sweep CSV: header plus one row per point, best flagged") {
    SweepResult r;
    for (int i = 0; i < 3; ++i) {
        SweepPoint pt;
        pt.param1 = 2 + i;
        pt.param2 = 0.1 * (i + 1);
        pt.aaoi = 10.0 - i;
        r.points.push_back(pt);
    }
    r.best_index = 2;
    const std::string csv = sweep_to_csv(r);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    CHECK(csv.rfind("param1,param2,aaoi,ci,source,best\n", 0) == 0);

    const SweepResult back = sweep_from_csv(csv);
    REQUIRE(back.points.size() == 3);
    CHECK(back.best_index == 2);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back.points[i].param1 == r.points[i].param1);
        CHECK(back.points[i].param2 == r.points[i].param2);
        CHECK(back.points[i].aaoi == r.points[i].aaoi);  // lossless decimal text
    }
}

TEST_CASE("empty point list gives header-only CSV") {
    SweepResult r;
    const std::string csv = sweep_to_csv(r);
    CHECK(csv == "param1,param2,aaoi,ci,source,best\n");
    CHECK(sweep_from_csv(csv).points.empty());
}

TEST_CASE("sweep JSON round-trips including failed points") {
    SweepResult r;
    SweepPoint good;
    good.param1 = 0.25;
    good.aaoi = 42.0;
    good.ci = 0.5;
    good.source = ObjectiveSource::simulated;
    SweepPoint bad;
    bad.param1 = 0.5;
    bad.ok = false;
    bad.error = "degenerate";
    r.points = {good, bad};
    r.best_index = 0;
    r.best_is_ambiguous = true;
    const SweepResult back = sweep_from_json(json::parse(sweep_to_json(r).dump()));
    REQUIRE(back.points.size() == 2);
    CHECK(back.points[0].aaoi == 42.0);
    CHECK(back.points[0].source == ObjectiveSource::simulated);
    CHECK_FALSE(back.points[1].ok);
    CHECK(back.points[1].error == "degenerate");
    CHECK(back.best_is_ambiguous);
}

TEST_CASE("malformed sweep CSV is rejected") {
    CHECK_THROWS_AS(sweep_from_csv("wrong,header\n"), std::invalid_argument);
    CHECK_THROWS_AS(sweep_from_csv("param1,param2,aaoi,ci,source,best\n1,2,3\n"),
                    std::invalid_argument);
}

TEST_CASE("comparison table CSV has one row per cell") {
    std::vector<ComparisonCell> cells(2);
    cells[0].scheme = "fsard";
    cells[0].num_users = 30;
    cells[0].mini_slots = 4;
    cells[0].rho = 0.01;
    cells[0].value = 131.0;
    cells[0].reference = 131.16;
    cells[1].scheme = "aloha";
    cells[1].num_users = 30;
    cells[1].rho = 0.01;
    const std::string csv = table_to_csv(cells);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    const json j = table_to_json(cells);
    REQUIRE(j.size() == 2);
    CHECK(j[0]["scheme"] == "fsard");
    CHECK(j[1]["scheme"] == "aloha");
}
