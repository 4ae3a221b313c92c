#include <catch_amalgamated.hpp>

#include <cmath>

#include "fdsec/oracle.hpp"
#include "fdsec/region.hpp"

using Catch::Approx;
using namespace fdsec;

namespace {

SolverConfig small_grid(int k, int l) {
    SolverConfig c;
    c.grid_k = k;
    c.grid_l = l;
    return c;
}

}  // namespace

TEST_CASE("min_eave_rate degenerate cases", "[region]") {
    SolverConfig cfg;
    SECTION("no eavesdropper gain") {
        auto s = reference_scenario(3.0, 0.0);
        s.channels.z1 = s.channels.z2 = {};
        const auto caps = capacities(s, CsiMode::perfect);
        for (CsiMode mode : {CsiMode::perfect, CsiMode::robust}) {
            const auto m = min_eave_rate(s, 0.7 * caps.c1, 0.9 * caps.c2, mode, cfg);
            REQUIRE(m);
            CHECK(m->re_min == 0.0);
            CHECK_FALSE(m->bisected);
        }
    }
    SECTION("zero targets") {
        const auto s = reference_scenario(3.0, 0.02);
        for (CsiMode mode : {CsiMode::perfect, CsiMode::robust}) {
            const auto m = min_eave_rate(s, 0.0, 0.0, mode, cfg);
            REQUIRE(m);
            CHECK(m->re_min == 0.0);
            CHECK(m->alloc.p1s == Approx(0.0).margin(1e-12));
            CHECK(m->alloc.p2s == Approx(0.0).margin(1e-12));
        }
    }
    SECTION("targets beyond capacity") {
        const auto s = reference_scenario(3.0, 0.0);
        const auto caps = capacities(s, CsiMode::perfect);
        CHECK_FALSE(min_eave_rate(s, caps.c1 + 0.01, 0.0, CsiMode::perfect, cfg));
    }
}

TEST_CASE("min_eave_rate agrees with the constrained power grid", "[region]") {
    const auto s = reference_scenario(3.0, 0.0);
    const auto caps = capacities(s, CsiMode::perfect);
    SolverConfig cfg;
    for (double f : {0.5, 0.8}) {
        const auto m = min_eave_rate(s, f * caps.c1, f * caps.c2, CsiMode::perfect, cfg);
        const auto g = oracle::grid_min_eave(s, f * caps.c1, f * caps.c2, {60, true, 1});
        REQUIRE(m);
        REQUIRE(g);
        CHECK(m->re_min <= *g + cfg.zeta);
        CHECK(*g - m->re_min <= 0.05);
        CHECK(is_admissible(m->alloc, s));
        const auto r = achieved_rates(s, m->alloc, CsiMode::perfect);
        CHECK(r.r1 >= f * caps.c1 - 1e-8);
        CHECK(r.r2 >= f * caps.c2 - 1e-8);
    }
}

TEST_CASE("achieved_rates", "[region]") {
    const auto s0 = reference_scenario(3.0, 0.0);
    const auto zero = achieved_rates(s0, {}, CsiMode::robust);
    CHECK(zero.r1 == 0.0);
    CHECK(zero.r2 == 0.0);

    const PowerAllocation a{1.2, 0.3, 0.9, 0.4};
    const auto p = achieved_rates(s0, a, CsiMode::perfect);
    const auto r = achieved_rates(s0, a, CsiMode::robust);
    CHECK(r.r1 == Approx(p.r1).margin(1e-14));
    CHECK(r.r2 == Approx(p.r2).margin(1e-14));
    CHECK(p.r1 == Approx(link_rate(std::norm(s0.channels.h21), 1.2, 0.3, 1.0)).margin(1e-15));

    // Full power with uncertainty: the capacity minus the effect of the
    // residual self-interference.
    const auto s = reference_scenario(3.0, 0.04);
    const PowerAllocation full{s.p1, 0.0, s.p2, 0.0};
    const auto caps = capacities(s, CsiMode::robust);
    const auto w = achieved_rates(s, full, CsiMode::robust);
    CHECK(w.r1 == Approx(1.61226939532056606).margin(1e-12));
    CHECK(w.r1 < caps.c1);
    CHECK(w.r2 < caps.c2);
    auto no_self = s;
    no_self.errors.eps11 = no_self.errors.eps22 = 0.0;
    const auto w0 = achieved_rates(no_self, full, CsiMode::robust);
    CHECK(w0.r1 == Approx(caps.c1).margin(1e-12));
    CHECK(w0.r2 == Approx(caps.c2).margin(1e-12));
}

TEST_CASE("sweep grid construction", "[region]") {
    const auto s = reference_scenario(3.0, 0.0);
    const auto res = sweep_region(s, CsiMode::perfect, small_grid(1, 1));
    REQUIRE(res.points.size() == 4);
    const auto caps = capacities(s, CsiMode::perfect);
    CHECK(res.at(0, 0).r1_target == 0.0);
    CHECK(res.at(0, 1).r2_target == caps.c2);
    CHECK(res.at(1, 0).r1_target == caps.c1);
    CHECK(res.at(1, 1).r1_target == caps.c1);
    CHECK(res.at(1, 1).r2_target == caps.c2);
    CHECK(res.at(1, 0).k == 1);
    CHECK(res.at(1, 0).l == 0);
}

TEST_CASE("sweep without an eavesdropper reaches C1 + C2", "[region]") {
    auto s = reference_scenario(3.0, 0.0);
    s.channels.z1 = s.channels.z2 = {};
    const auto res = sweep_region(s, CsiMode::perfect, small_grid(8, 8));
    const auto caps = capacities(s, CsiMode::perfect);
    const auto* b = res.best_point();
    REQUIRE(b);
    CHECK(b->k == 8);
    CHECK(b->l == 8);
    CHECK(b->sum_secrecy == Approx(caps.c1 + caps.c2).margin(1e-9));
    CHECK(b->alloc.p1n == Approx(0.0).margin(1e-9));
    CHECK(b->alloc.p2n == Approx(0.0).margin(1e-9));
}

TEST_CASE("sweep invariants on the reference scenario", "[region]") {
    const auto cfg = small_grid(12, 12);
    for (double eps : {0.0, 0.03}) {
        const auto s = reference_scenario(3.0, eps);
        for (CsiMode mode : {CsiMode::perfect, CsiMode::robust}) {
            const auto res = sweep_region(s, mode, cfg);
            REQUIRE(res.best_point());
            for (const auto& p : res.points) {
                CHECK(p.sum_secrecy >= 0.0);
                CHECK(p.sum_secrecy <= p.r1_achieved + p.r2_achieved + 1e-15);
                if (p.feasible && p.re_min == 0.0) CHECK(p.sum_secrecy == Approx(p.r1_achieved + p.r2_achieved));
                if (p.feasible && p.re_min > 0.0 && p.raw_sum >= 0.0)
                    CHECK(p.sum_secrecy < p.r1_achieved + p.r2_achieved);
                if (!p.feasible) continue;
                CHECK(p.r1_achieved >= p.r1_target - 1e-8);
                CHECK(p.r2_achieved >= p.r2_target - 1e-8);
                CHECK(is_admissible(p.alloc, s));
                CHECK(p.sum_secrecy <= res.max_sum_secrecy() + 1e-12);

                // bisection bracket
                if (!p.bisected) continue;
                const double below = p.t_min - std::max(cfg.zeta, 2.0 * cfg.feas_tol);
                CHECK(solve_feasibility(build_program(s, p.r1_target, p.r2_target, p.t_min, mode)).is_feasible());
                CHECK_FALSE(solve_feasibility(build_program(s, p.r1_target, p.r2_target, below, mode)).is_feasible());
            }
        }
    }
}

TEST_CASE("robust mode without uncertainty reproduces perfect mode", "[region]") {
    const auto cfg = small_grid(10, 10);
    const auto s = reference_scenario(6.0, 0.0);
    const auto a = sweep_region(s, CsiMode::perfect, cfg);
    const auto b = sweep_region(s, CsiMode::robust, cfg);
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].feasible == b.points[i].feasible);
        CHECK(b.points[i].sum_secrecy == Approx(a.points[i].sum_secrecy).margin(2.0 * cfg.zeta));
    }
}

TEST_CASE("larger budgets never lower the sum secrecy at fixed targets", "[region]") {
    SolverConfig cfg;
    const auto small = reference_scenario(3.0, 0.02);
    const auto big = reference_scenario(6.0, 0.02);
    const auto caps = capacities(small, CsiMode::robust);
    for (int k = 0; k <= 6; ++k) {
        for (int l = 0; l <= 6; ++l) {
            const double r1 = caps.c1 * k / 6, r2 = caps.c2 * l / 6;
            const auto a = evaluate_cell(small, CsiMode::robust, cfg, k, l, r1, r2);
            const auto b = evaluate_cell(big, CsiMode::robust, cfg, k, l, r1, r2);
            if (a.feasible) {
                CHECK(b.feasible);
                CHECK(b.re_min <= a.re_min + cfg.zeta);
            }
        }
    }
}

TEST_CASE("frontier", "[region]") {
    RegionResult empty;
    CHECK(frontier(empty).empty());

    RegionResult origin;
    RegionPoint p;
    p.feasible = true;
    origin.points.push_back(p);
    const auto f = frontier(origin);
    REQUIRE(f.size() == 1);
    CHECK(f[0] == RatePair{0.0, 0.0});

    RegionResult two;
    RegionPoint a;
    a.feasible = true;
    a.r1_achieved = 1.0;
    a.r2_achieved = 0.2;
    a.raw_sum = a.sum_secrecy = 1.1;
    RegionPoint b = a;
    b.r1_achieved = 0.3;
    b.r2_achieved = 0.9;
    b.raw_sum = b.sum_secrecy = 1.0;
    two.points = {a, b};
    const auto g = frontier(two);
    REQUIRE(g.size() == 4);
    CHECK(g[1].r1 == Approx(0.3));
    CHECK(g[1].r2 == Approx(0.7));
    CHECK(g.front().r1 == Approx(0.1));
    CHECK(g.front().r2 == Approx(0.9));
    CHECK(g.back().r1 == Approx(1.0));
    CHECK(g.back().r2 == Approx(0.1));
    for (std::size_t i = 1; i < g.size(); ++i) {
        CHECK(g[i].r1 > g[i - 1].r1);
        CHECK(g[i].r2 < g[i - 1].r2);
    }
}

TEST_CASE("secrecy regions shrink as the error bound grows", "[region]") {
    const auto cfg = small_grid(16, 16);
    for (double db : {3.0, 6.0}) {
        RegionResult prev;
        bool have_prev = false;
        for (double eps : {0.0, 0.01, 0.02, 0.03, 0.04}) {
            const auto res = sweep_region(reference_scenario(db, eps), CsiMode::robust, cfg);
            if (have_prev) {
                for (const auto& pt : frontier(res)) CHECK(region_contains(prev, pt, 1e-6));
                CHECK(res.max_sum_secrecy() <= prev.max_sum_secrecy() + 2.0 * cfg.zeta);
            }
            prev = res;
            have_prev = true;
        }
    }
}
