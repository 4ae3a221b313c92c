#pragma once

// Leakage minimization per rate-target pair and the K x L target sweep.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fdsec/lp.hpp"
#include "fdsec/model.hpp"
#include "fdsec/programs.hpp"
#include "fdsec/rates.hpp"

namespace fdsec {

struct RatePair {
    double r1 = 0.0, r2 = 0.0;
};

inline bool operator==(const RatePair& a, const RatePair& b) { return a.r1 == b.r1 && a.r2 == b.r2; }

/// Outcome of the leakage bisection for one target pair.
struct EaveMinimum {
    double t_min = 0.0;   // eavesdropper SINR bound at the returned point
    double re_min = 0.0;  // log2(1 + t_min)
    PowerAllocation alloc;
    EpigraphAux aux;      // zero in perfect mode
    bool bisected = false;  // false when t = 0 was already feasible
};

class IllConditionedProgram : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline LpResult check_program(const Scenario& s, double r1, double r2, double t, CsiMode mode, double tol) {
    auto res = solve_feasibility(build_program(s, r1, r2, t, mode), tol);
    if (res.status == LpStatus::ill_conditioned)
        throw IllConditionedProgram("feasibility program is ill-conditioned (pivot below 1e-12)");
    return res;
}

}  // namespace detail

/// Smallest eavesdropper SINR t for which the fixed-t program at the given
/// targets is feasible, found by bisection on [0, 2^C_E - 1] until the
/// bracket is at most zeta wide. C_E is the best-case eavesdropper capacity
/// in robust mode. Returns nullopt when even the top of the bracket is
/// infeasible.
inline std::optional<EaveMinimum> min_eave_rate(const Scenario& s, double r1_target, double r2_target,
                                                CsiMode mode, const SolverConfig& cfg) {
    const double top = std::exp2(capacities(s, mode).ce) - 1.0;
    auto make = [&](double t, const LpResult& res, bool bisected) {
        EaveMinimum m;
        m.t_min = t;
        m.re_min = std::log2(1.0 + t);
        m.alloc = allocation_from_point(res.point);
        m.aux = aux_from_point(res.point);
        m.bisected = bisected;
        return m;
    };

    auto at_zero = detail::check_program(s, r1_target, r2_target, 0.0, mode, cfg.feas_tol);
    if (at_zero.is_feasible()) return make(0.0, at_zero, false);
    if (top <= 0.0) return std::nullopt;

    auto at_top = detail::check_program(s, r1_target, r2_target, top, mode, cfg.feas_tol);
    if (!at_top.is_feasible()) return std::nullopt;

    double lo = 0.0, hi = top;
    LpResult best = std::move(at_top);
    while (hi - lo > cfg.zeta) {
        const double mid = 0.5 * (lo + hi);
        auto res = detail::check_program(s, r1_target, r2_target, mid, mode, cfg.feas_tol);
        if (res.is_feasible()) {
            hi = mid;
            best = std::move(res);
        } else {
            lo = mid;
        }
    }
    return make(hi, best, true);
}

/// Rates an allocation actually delivers. Robust mode uses the exact worst
/// case over the error balls, with the residual self-interference as noise.
inline RatePair achieved_rates(const Scenario& s, const PowerAllocation& a, CsiMode mode) {
    const auto& c = s.channels;
    if (mode == CsiMode::perfect)
        return {link_rate(std::norm(c.h21), a.p1s, a.p1n, s.n0), link_rate(std::norm(c.h12), a.p2s, a.p2n, s.n0)};
    const auto& e = s.errors;
    return {worst_case_link_rate(c.h21, e.eps21, e.eps22, a.p1s, a.p1n, a.p2s + a.p2n, s.n0),
            worst_case_link_rate(c.h12, e.eps12, e.eps11, a.p2s, a.p2n, a.p1s + a.p1n, s.n0)};
}

struct RegionPoint {
    int k = 0, l = 0;
    double r1_target = 0.0, r2_target = 0.0;
    double r1_achieved = 0.0, r2_achieved = 0.0;
    double re_min = 0.0;
    double t_min = 0.0;
    double raw_sum = 0.0;      // r1 + r2 - re, unclamped
    double sum_secrecy = 0.0;  // clamped at 0
    PowerAllocation alloc;
    EpigraphAux aux;
    bool feasible = false;  // the program admits a point at the top of the bracket
    bool bisected = false;

    /// Contributes to the secrecy region: feasible with a nonnegative sum.
    bool in_region() const { return feasible && raw_sum >= 0.0; }
};

struct RegionResult {
    int grid_k = 0, grid_l = 0;
    CsiMode mode = CsiMode::perfect;
    CapacityTriple caps;
    std::vector<RegionPoint> points;  // row-major in k, (K+1) x (L+1)
    std::optional<std::size_t> best;

    const RegionPoint& at(int k, int l) const {
        return points[static_cast<std::size_t>(k) * static_cast<std::size_t>(grid_l + 1) +
                      static_cast<std::size_t>(l)];
    }
    const RegionPoint* best_point() const { return best ? &points[*best] : nullptr; }
    double max_sum_secrecy() const { return best ? points[*best].sum_secrecy : 0.0; }
};

/// Solves one target pair and fills in the delivered rates.
inline RegionPoint evaluate_cell(const Scenario& s, CsiMode mode, const SolverConfig& cfg, int k, int l,
                                 double r1_target, double r2_target) {
    RegionPoint p;
    p.k = k;
    p.l = l;
    p.r1_target = r1_target;
    p.r2_target = r2_target;
    const auto m = min_eave_rate(s, r1_target, r2_target, mode, cfg);
    if (!m) return p;
    p.feasible = true;
    p.bisected = m->bisected;
    p.t_min = m->t_min;
    p.re_min = m->re_min;
    p.alloc = m->alloc;
    p.aux = m->aux;
    const auto r = achieved_rates(s, m->alloc, mode);
    p.r1_achieved = r.r1;
    p.r2_achieved = r.r2;
    p.raw_sum = r.r1 + r.r2 - m->re_min;
    p.sum_secrecy = std::max(p.raw_sum, 0.0);
    return p;
}

/// Evaluates every target pair (k C1/K, l C2/L) and records the cell with the
/// largest sum secrecy rate. Near-ties (1e-12) go to the later cell in
/// row-major order.
inline RegionResult sweep_region(const Scenario& scenario, CsiMode mode, const SolverConfig& config) {
    const Scenario s = validate(scenario);
    const SolverConfig cfg = validate(config);
    RegionResult out;
    out.grid_k = cfg.grid_k;
    out.grid_l = cfg.grid_l;
    out.mode = mode;
    out.caps = capacities(s, mode);
    const double d1 = out.caps.c1 / cfg.grid_k;
    const double d2 = out.caps.c2 / cfg.grid_l;

    out.points.reserve(static_cast<std::size_t>(cfg.grid_k + 1) * static_cast<std::size_t>(cfg.grid_l + 1));
    for (int k = 0; k <= cfg.grid_k; ++k) {
        // The last cell uses the capacity itself so rounding in k*d cannot
        // push the target above it.
        const double r1 = k == cfg.grid_k ? out.caps.c1 : k * d1;
        for (int l = 0; l <= cfg.grid_l; ++l) {
            const double r2 = l == cfg.grid_l ? out.caps.c2 : l * d2;
            out.points.push_back(evaluate_cell(s, mode, cfg, k, l, r1, r2));
        }
    }

    for (std::size_t i = 0; i < out.points.size(); ++i) {
        const auto& p = out.points[i];
        if (!p.feasible) continue;
        if (!out.best || p.sum_secrecy >= out.points[*out.best].sum_secrecy - 1e-12) out.best = i;
    }
    return out;
}

/// Whether (r1, r2) lies in the union over in-region cells of
/// {R1 <= r1_achieved, R2 <= r2_achieved, R1 + R2 <= sum_secrecy}.
inline bool region_contains(const RegionResult& res, RatePair p, double tol) {
    if (p.r1 < -tol || p.r2 < -tol) return false;
    return std::any_of(res.points.begin(), res.points.end(), [&](const RegionPoint& c) {
        return c.in_region() && p.r1 <= c.r1_achieved + tol && p.r2 <= c.r2_achieved + tol &&
               p.r1 + p.r2 <= c.sum_secrecy + tol;
    });
}

/// Pareto-maximal corner points of the secrecy region, sorted by r1. Each
/// in-region cell contributes the two corners where its sum-rate face meets
/// the individual rate limits.
inline std::vector<RatePair> frontier(const RegionResult& res) {
    std::vector<RatePair> cand;
    for (const auto& c : res.points) {
        if (!c.in_region()) continue;
        const double s = c.sum_secrecy;
        const double a1 = std::min(c.r1_achieved, s);
        const double a2 = std::min(c.r2_achieved, s);
        cand.push_back({a1, std::max(std::min(a2, s - a1), 0.0)});
        cand.push_back({std::max(std::min(a1, s - a2), 0.0), a2});
    }
    // Sort by r1 descending (r2 descending on ties); keep points whose r2
    // beats everything with larger r1.
    std::sort(cand.begin(), cand.end(), [](const RatePair& x, const RatePair& y) {
        return x.r1 != y.r1 ? x.r1 > y.r1 : x.r2 > y.r2;
    });
    std::vector<RatePair> out;
    double best_r2 = -1.0;
    for (const auto& p : cand) {
        if (p.r2 > best_r2) {
            out.push_back(p);
            best_r2 = p.r2;
        }
    }
    std::reverse(out.begin(), out.end());
    return out;
}

}  // namespace fdsec
