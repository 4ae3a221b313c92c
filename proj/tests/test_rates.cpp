#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fdsec/oracle.hpp"
#include "fdsec/rates.hpp"

using Catch::Approx;
using namespace fdsec;

// Frozen from a 30-digit evaluation of the closed forms at the reference
// gains (mpmath), independent of this code.
namespace ref {
constexpr double p3db = 1.99526231496887960;
constexpr double c1 = 1.69127825294849012;
constexpr double c2 = 0.633701565008183215;
constexpr double ce = 0.397109043189970212;
constexpr double robust_c1_04 = 1.61536531492897492;
constexpr double robust_c2_04 = 0.556611452983311701;
constexpr double robust_ce_04 = 0.498252584603757387;
constexpr double worst_link_04 = 1.61226939532056606;
constexpr double eave_upper_04 = 0.257359477735110128;
}  // namespace ref

TEST_CASE("link_rate", "[rates]") {
    CHECK(link_rate(1.0, 1.0, 0.0, 1.0) == Approx(1.0).margin(1e-15));
    CHECK(link_rate(0.7, 0.0, 2.0, 1.0) == 0.0);
    CHECK(link_rate(0.0, 3.0, 0.0, 1.0) == 0.0);
    CHECK(link_rate(std::norm(Complex{-0.0878, 1.0534}), ref::p3db, 0.0, 1.0) == Approx(ref::c1).margin(1e-12));
}

TEST_CASE("link_rate is monotone in message and jamming power", "[rates][property]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    for (int i = 0; i < 2000; ++i) {
        const double g = u(rng), ps = u(rng), pn = u(rng), n0 = 0.1 + u(rng), d = u(rng);
        CHECK(link_rate(g, ps + d, pn, n0) >= link_rate(g, ps, pn, n0));
        CHECK(link_rate(g, ps, pn + d, n0) <= link_rate(g, ps, pn, n0));
    }
}

TEST_CASE("eave_rate", "[rates]") {
    const PowerAllocation any{1.0, 0.3, 2.0, 0.1};
    CHECK(eave_rate(0.0, 0.0, any, 1.0) == 0.0);
    CHECK(eave_rate(0.5, 0.2, {0.0, 1.0, 0.0, 1.0}, 1.0) == 0.0);
    const double z1 = std::norm(Complex{0.1187, -0.2135}), z2 = std::norm(Complex{0.1268, 0.2882});
    CHECK(z1 == Approx(0.059672).margin(1e-6));
    CHECK(z2 == Approx(0.099137).margin(1e-6));
    CHECK(eave_rate(z1, z2, {ref::p3db, 0.0, ref::p3db, 0.0}, 1.0) == Approx(ref::ce).margin(1e-12));
}

TEST_CASE("capacities at the reference scenario", "[rates]") {
    const auto perfect = capacities(reference_scenario(3.0, 0.0), CsiMode::perfect);
    CHECK(perfect.c1 == Approx(ref::c1).margin(1e-12));
    CHECK(perfect.c2 == Approx(ref::c2).margin(1e-12));
    CHECK(perfect.ce == Approx(ref::ce).margin(1e-12));

    const auto zero_ball = capacities(reference_scenario(3.0, 0.0), CsiMode::robust);
    CHECK(zero_ball.c1 == perfect.c1);
    CHECK(zero_ball.c2 == perfect.c2);
    CHECK(zero_ball.ce == perfect.ce);

    const auto robust = capacities(reference_scenario(3.0, 0.04), CsiMode::robust);
    CHECK(robust.c1 == Approx(ref::robust_c1_04).margin(1e-12));
    CHECK(robust.c2 == Approx(ref::robust_c2_04).margin(1e-12));
    CHECK(robust.ce == Approx(ref::robust_ce_04).margin(1e-12));
}

TEST_CASE("robust capacities are monotone in the error bounds", "[rates][property]") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 0.6);
    for (int i = 0; i < 500; ++i) {
        auto s = reference_scenario(3.0, 0.0);
        s.errors = {u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
        auto bigger = s;
        bigger.errors.eps12 += u(rng);
        bigger.errors.eps21 += u(rng);
        bigger.errors.eps1 += u(rng);
        bigger.errors.eps2 += u(rng);
        const auto a = capacities(s, CsiMode::robust), b = capacities(bigger, CsiMode::robust);
        CHECK(b.c1 <= a.c1);
        CHECK(b.c2 <= a.c2);
        CHECK(b.ce >= a.ce);
    }
}

TEST_CASE("worst_case_link_rate", "[rates]") {
    const Complex h21{-0.0878, 1.0534};
    SECTION("no uncertainty reduces to link_rate") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(0.0, 4.0);
        for (int i = 0; i < 200; ++i) {
            const double ps = u(rng), pn = u(rng), po = u(rng);
            CHECK(worst_case_link_rate(h21, 0.0, 0.0, ps, pn, po, 1.0) ==
                  Approx(link_rate(std::norm(h21), ps, pn, 1.0)).margin(1e-12));
        }
    }
    SECTION("the adversary can null the link") {
        CHECK(worst_case_link_rate({0.1, 0.1}, 0.2, 0.0, 2.0, 0.0, 0.0, 1.0) == 0.0);
        CHECK(worst_case_link_rate({0.3, 0.4}, 0.5, 0.1, 2.0, 0.5, 1.0, 1.0) == 0.0);
    }
    SECTION("reference link at eps 0.04") {
        const double v = worst_case_link_rate(h21, 0.04, 0.04, ref::p3db, 0.0, ref::p3db, 1.0);
        CHECK(v == Approx(ref::worst_link_04).margin(1e-12));
        oracle::GridSpec g{200, true, 64};
        const double grid = oracle::grid_min_link_rate(h21, 0.04, 0.04, ref::p3db, 0.0, ref::p3db, 1.0, g);
        CHECK(v <= grid + 1e-9);
        CHECK(v >= grid - 1e-4 * (1.0 + v));
    }
}

TEST_CASE("worst_case_eave_rate_upper", "[rates]") {
    SECTION("exact without uncertainty") {
        const auto s = reference_scenario(3.0, 0.0);
        const PowerAllocation a{1.0, 0.5, 0.7, 0.9};
        const auto r = nominal_rates(s, a);
        CHECK(worst_case_eave_rate_upper(s, a) == Approx(r.re).margin(1e-14));
    }
    SECTION("reference value and grid bound") {
        const auto s = reference_scenario(3.0, 0.04);
        const PowerAllocation a{1.0, 0.5, 1.0, 0.5};
        const double up = worst_case_eave_rate_upper(s, a);
        CHECK(up == Approx(ref::eave_upper_04).margin(1e-12));
        CHECK(up >= oracle::grid_max_eave_rate(s, a, {40, true, 32}));
    }
    SECTION("exact without jamming") {
        const auto s = reference_scenario(3.0, 0.03);
        const PowerAllocation a{1.2, 0.0, 0.4, 0.0};
        CHECK(worst_case_eave_rate_upper(s, a) ==
              Approx(oracle::grid_max_eave_rate(s, a, {20, true, 16})).margin(1e-12));
    }
}
