#pragma once

// Exhaustive-grid reference solvers. These only evaluate the rate formulas
// pointwise and never call the LP, the bisection or any closed-form worst
// case, so they can ground-truth all of those.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fdsec/model.hpp"
#include "fdsec/rates.hpp"

namespace fdsec::oracle {

struct GridSpec {
    int density = 40;  // points per magnitude/power axis
    bool includes_endpoints = true;
    int phases = 64;  // error grids only; phase 0 is aligned with the estimate
};

/// density points on [lo, hi]; cell midpoints when endpoints are excluded.
inline std::vector<double> axis(double lo, double hi, const GridSpec& g) {
    if (g.density < 2) throw std::invalid_argument("grid density must be at least 2");
    std::vector<double> out(static_cast<std::size_t>(g.density));
    for (int i = 0; i < g.density; ++i) {
        const double f = g.includes_endpoints ? static_cast<double>(i) / (g.density - 1)
                                              : (i + 0.5) / g.density;
        out[static_cast<std::size_t>(i)] = lo + f * (hi - lo);
    }
    if (g.includes_endpoints) out.back() = hi;
    return out;
}

/// Every |h0 + e|^2 on the polar grid of the error disc |e| <= eps.
inline std::vector<double> gains_on_error_disc(Complex h0, double eps, const GridSpec& g) {
    const double base = std::arg(h0);
    const int phases = std::max(g.phases, 1);
    std::vector<double> out;
    for (double r : axis(0.0, eps, g)) {
        for (int j = 0; j < phases; ++j) {
            const double phi = base + 2.0 * std::numbers::pi * j / phases;
            out.push_back(std::norm(h0 + std::polar(r, phi)));
        }
    }
    return out;
}

struct SumSecrecyOptimum {
    double value = 0.0;
    PowerAllocation alloc;
};

namespace detail {

struct UserPoint {
    double ps, pn, rate;
};

inline std::vector<UserPoint> user_grid(double budget, double gain_sq, double n0, const GridSpec& g) {
    std::vector<UserPoint> out;
    const auto pts = axis(0.0, budget, g);
    const double cap = budget * (1.0 + 1e-12);
    for (double ps : pts)
        for (double pn : pts)
            if (ps + pn <= cap) out.push_back({ps, pn, link_rate(gain_sq, ps, pn, n0)});
    return out;
}

}  // namespace detail

/// Maximum of R1 + R2 - RE (clamped at 0) over a 4-D power grid inside the
/// budgets, with the nominal gains.
inline SumSecrecyOptimum brute_force_sum_secrecy(const Scenario& s, const GridSpec& grid) {
    const auto& c = s.channels;
    const double gz1 = std::norm(c.z1), gz2 = std::norm(c.z2);
    const auto u1 = detail::user_grid(s.p1, std::norm(c.h21), s.n0, grid);
    const auto u2 = detail::user_grid(s.p2, std::norm(c.h12), s.n0, grid);

    SumSecrecyOptimum best;
    double best_raw = -std::numeric_limits<double>::infinity();
    for (const auto& a : u1) {
        for (const auto& b : u2) {
            const PowerAllocation alloc{a.ps, a.pn, b.ps, b.pn};
            const double raw = a.rate + b.rate - eave_rate(gz1, gz2, alloc, s.n0);
            if (raw > best_raw) {
                best_raw = raw;
                best.alloc = alloc;
            }
        }
    }
    best.value = std::max(best_raw, 0.0);
    return best;
}

/// Minimum leakage over grid allocations meeting both rate targets with the
/// nominal gains; nullopt when no grid point qualifies.
inline std::optional<double> grid_min_eave(const Scenario& s, double r1_target, double r2_target,
                                           const GridSpec& grid) {
    const auto& c = s.channels;
    const double gz1 = std::norm(c.z1), gz2 = std::norm(c.z2);
    constexpr double slack = 1e-12;
    std::vector<detail::UserPoint> u1, u2;
    for (const auto& p : detail::user_grid(s.p1, std::norm(c.h21), s.n0, grid))
        if (p.rate >= r1_target - slack) u1.push_back(p);
    for (const auto& p : detail::user_grid(s.p2, std::norm(c.h12), s.n0, grid))
        if (p.rate >= r2_target - slack) u2.push_back(p);
    if (u1.empty() || u2.empty()) return std::nullopt;

    double best = std::numeric_limits<double>::infinity();
    for (const auto& a : u1)
        for (const auto& b : u2) best = std::min(best, eave_rate(gz1, gz2, {a.ps, a.pn, b.ps, b.pn}, s.n0));
    return best;
}

/// Minimum over the gridded error discs of
///   log2(1 + |h0+e|^2 ps / (n0 + |e_self|^2 p_other_total + |h0+e|^2 pn)).
/// e_link is gridded in magnitude x phase, e_self in magnitude (its phase
/// does not enter).
inline double grid_min_link_rate(Complex h0, double eps_link, double eps_self, double ps, double pn,
                                 double p_other_total, double n0, const GridSpec& grid) {
    const auto gains = gains_on_error_disc(h0, eps_link, grid);
    const auto self = axis(0.0, eps_self, grid);
    double worst = std::numeric_limits<double>::infinity();
    for (double g : gains) {
        for (double r : self) {
            const double sinr = g * ps / (n0 + r * r * p_other_total + g * pn);
            worst = std::min(worst, sinr);
        }
    }
    return std::log2(1.0 + worst);
}

/// Maximum leakage over the gridded error discs of e1 and e2, evaluated
/// jointly (the same e_i in numerator and denominator).
inline double grid_max_eave_rate(const Scenario& s, const PowerAllocation& a, const GridSpec& grid) {
    const auto g1 = gains_on_error_disc(s.channels.z1, s.errors.eps1, grid);
    const auto g2 = gains_on_error_disc(s.channels.z2, s.errors.eps2, grid);
    double worst = 0.0;
    for (double x : g1) {
        const double num1 = x * a.p1s;
        const double den1 = s.n0 + x * a.p1n;
        for (double y : g2) worst = std::max(worst, (num1 + y * a.p2s) / (den1 + y * a.p2n));
    }
    return std::log2(1.0 + worst);
}

}  // namespace fdsec::oracle
