#pragma once

// Fixed-t feasibility programs for the leakage epigraph, and the 2x2 LMI
// certificate layer for the robust program.
//
// The robust program is built in its reduced linear form: every
// "for all |e| <= eps" row involves a single scalar error, so the
// S-procedure is lossless and each LMI collapses to a closed-form row such
// as t1 >= (|z1|+eps1)^2 P1s. The LMI blocks are kept as an independent
// checker of that reduction.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "fdsec/lp.hpp"
#include "fdsec/model.hpp"
#include "fdsec/rates.hpp"

namespace fdsec {

/// Variable layout shared by both programs. The robust program appends the
/// eight epigraph auxiliaries t1..t8 after the powers.
namespace var {
inline constexpr int p1s = 0, p1n = 1, p2s = 2, p2n = 3;
inline constexpr int t(int i) { return 3 + i; }  // t(1) .. t(8)
inline constexpr int perfect_count = 4;
inline constexpr int robust_count = 12;
}  // namespace var

/// Epigraph auxiliaries; t[i] holds t_{i+1}.
///   t1, t2 : message power seen by the eavesdropper (upper bounds)
///   t3, t4 : jamming power seen by the eavesdropper (lower bounds)
///   t5, t7 : message power at the legitimate receivers (lower bounds)
///   t6, t8 : own jamming at the legitimate receivers (upper bounds)
struct EpigraphAux {
    std::array<double, 8> t{};
};

/// S-procedure multipliers, one per LMI block.
struct LmiCertificate {
    std::array<double, 8> lambda{};
};

/// Hermitian [[a, b], [conj(b), c]].
struct Matrix2 {
    double a = 0.0;
    Complex b{};
    double c = 0.0;

    double min_eigenvalue() const {
        const double mid = 0.5 * (a + c);
        const double half = 0.5 * (a - c);
        return mid - std::sqrt(half * half + std::norm(b));
    }
};

inline PowerAllocation allocation_from_point(std::span<const double> x) {
    return {x[var::p1s], x[var::p1n], x[var::p2s], x[var::p2n]};
}

inline EpigraphAux aux_from_point(std::span<const double> x) {
    EpigraphAux aux;
    if (x.size() >= static_cast<std::size_t>(var::robust_count))
        for (int i = 1; i <= 8; ++i) aux.t[i - 1] = x[static_cast<std::size_t>(var::t(i))];
    return aux;
}

/// Rate target R as the SINR it requires.
inline double sinr_threshold(double rate) { return std::exp2(rate) - 1.0; }

inline FeasibilityProgram build_perfect_program(const Scenario& s, double r1_target, double r2_target,
                                                double t) {
    using namespace var;
    const auto& c = s.channels;
    const double g21 = std::norm(c.h21), g12 = std::norm(c.h12);
    const double gz1 = std::norm(c.z1), gz2 = std::norm(c.z2);
    const double q1 = sinr_threshold(r1_target), q2 = sinr_threshold(r2_target);

    FeasibilityProgram prog;
    prog.num_vars = perfect_count;
    prog.nonneg = {p1s, p1n, p2s, p2n};
    // leakage SINR <= t
    prog.add({{p1s, gz1}, {p2s, gz2}, {p1n, -t * gz1}, {p2n, -t * gz2}}, Sense::le, t * s.n0);
    // rate rows: q (N0 + g Pn) - g Ps <= 0
    prog.add({{p1n, q1 * g21}, {p1s, -g21}}, Sense::le, -q1 * s.n0);
    prog.add({{p2n, q2 * g12}, {p2s, -g12}}, Sense::le, -q2 * s.n0);
    prog.add({{p1s, 1.0}, {p1n, 1.0}}, Sense::le, s.p1);
    prog.add({{p2s, 1.0}, {p2n, 1.0}}, Sense::le, s.p2);
    return prog;
}

/// Gains that each reduced robust row uses, indexed like the LMI blocks.
struct RobustGains {
    double z1_hi, z1_lo, z2_hi, z2_lo;
    double h21_lo, h21_hi, h12_lo, h12_hi;

    explicit RobustGains(const Scenario& s) {
        const auto& c = s.channels;
        const auto& e = s.errors;
        z1_hi = grown_gain_sq(c.z1, e.eps1);
        z1_lo = shrunk_gain_sq(c.z1, e.eps1);
        z2_hi = grown_gain_sq(c.z2, e.eps2);
        z2_lo = shrunk_gain_sq(c.z2, e.eps2);
        h21_lo = shrunk_gain_sq(c.h21, e.eps21);
        h21_hi = grown_gain_sq(c.h21, e.eps21);
        h12_lo = shrunk_gain_sq(c.h12, e.eps12);
        h12_hi = grown_gain_sq(c.h12, e.eps12);
    }
};

inline FeasibilityProgram build_robust_program(const Scenario& s, double r1_target, double r2_target,
                                               double t_eave) {
    using namespace var;
    const RobustGains g(s);
    const auto& e = s.errors;
    const double q1 = sinr_threshold(r1_target), q2 = sinr_threshold(r2_target);
    const double self1 = e.eps22 * e.eps22;  // residual self-interference at user 2's receiver
    const double self2 = e.eps11 * e.eps11;

    FeasibilityProgram prog;
    prog.num_vars = robust_count;
    prog.nonneg = {p1s, p1n, p2s, p2n, t(3), t(4), t(5), t(7), t(6), t(8)};

    // S-procedure rows, in LMI block order.
    prog.add({{t(1), 1.0}, {p1s, -g.z1_hi}}, Sense::ge, 0.0);
    prog.add({{t(3), 1.0}, {p1n, -g.z1_lo}}, Sense::le, 0.0);
    prog.add({{t(2), 1.0}, {p2s, -g.z2_hi}}, Sense::ge, 0.0);
    prog.add({{t(4), 1.0}, {p2n, -g.z2_lo}}, Sense::le, 0.0);
    prog.add({{t(5), 1.0}, {p1s, -g.h21_lo}}, Sense::le, 0.0);
    prog.add({{t(6), 1.0}, {p1n, -g.h21_hi}}, Sense::ge, 0.0);
    prog.add({{t(7), 1.0}, {p2s, -g.h12_lo}}, Sense::le, 0.0);
    prog.add({{t(8), 1.0}, {p2n, -g.h12_hi}}, Sense::ge, 0.0);

    // (t1 + t2) - t_eave (N0 + t3 + t4) <= 0
    prog.add({{t(1), 1.0}, {t(2), 1.0}, {t(3), -t_eave}, {t(4), -t_eave}}, Sense::le, t_eave * s.n0);
    // q1 (N0 + eps22^2 (P2s + P2n) + t6) - t5 <= 0
    prog.add({{p2s, q1 * self1}, {p2n, q1 * self1}, {t(6), q1}, {t(5), -1.0}}, Sense::le, -q1 * s.n0);
    prog.add({{p1s, q2 * self2}, {p1n, q2 * self2}, {t(8), q2}, {t(7), -1.0}}, Sense::le, -q2 * s.n0);

    prog.add({{p1s, 1.0}, {p1n, 1.0}}, Sense::le, s.p1);
    prog.add({{p2s, 1.0}, {p2n, 1.0}}, Sense::le, s.p2);
    return prog;
}

inline FeasibilityProgram build_program(const Scenario& s, double r1_target, double r2_target, double t,
                                        CsiMode mode) {
    return mode == CsiMode::perfect ? build_perfect_program(s, r1_target, r2_target, t)
                                    : build_robust_program(s, r1_target, r2_target, t);
}

/// Margins of the eight reduced S-procedure rows, each written so that the
/// row holds iff the margin is >= 0. Same order as the LMI blocks.
inline std::array<double, 8> robust_row_margins(const Scenario& s, const PowerAllocation& a,
                                                const EpigraphAux& aux) {
    const RobustGains g(s);
    const auto& t = aux.t;
    return {t[0] - g.z1_hi * a.p1s, g.z1_lo * a.p1n - t[2], t[1] - g.z2_hi * a.p2s,
            g.z2_lo * a.p2n - t[3],  g.h21_lo * a.p1s - t[4], t[5] - g.h21_hi * a.p1n,
            g.h12_lo * a.p2s - t[6], t[7] - g.h12_hi * a.p2n};
}

inline bool robust_rows_hold(const Scenario& s, const PowerAllocation& a, const EpigraphAux& aux,
                             double tol) {
    const auto m = robust_row_margins(s, a, aux);
    return std::all_of(m.begin(), m.end(), [&](double v) { return v >= -tol; });
}

namespace detail {

/// Block for "t >= |g+e|^2 P for all |e| <= eps" (upper-bounding aux).
inline Matrix2 upper_block(Complex g, double p, double t, double lambda, double eps) {
    return {-p + lambda, -g * p, -std::norm(g) * p + t - lambda * eps * eps};
}

/// Block for "t <= |g+e|^2 P for all |e| <= eps" (lower-bounding aux).
inline Matrix2 lower_block(Complex g, double p, double t, double lambda, double eps) {
    return {p + lambda, g * p, std::norm(g) * p - t - lambda * eps * eps};
}

struct BlockSpec {
    bool upper;
    Complex gain;
    double power;
    double aux;
    double eps;

    Matrix2 at(double lambda) const {
        return upper ? upper_block(gain, power, aux, lambda, eps) : lower_block(gain, power, aux, lambda, eps);
    }
};

inline std::array<BlockSpec, 8> block_specs(const Scenario& s, const PowerAllocation& a,
                                            const EpigraphAux& aux) {
    const auto& c = s.channels;
    const auto& e = s.errors;
    const auto& t = aux.t;
    return {{{true, c.z1, a.p1s, t[0], e.eps1},
             {false, c.z1, a.p1n, t[2], e.eps1},
             {true, c.z2, a.p2s, t[1], e.eps2},
             {false, c.z2, a.p2n, t[3], e.eps2},
             {false, c.h21, a.p1s, t[4], e.eps21},
             {true, c.h21, a.p1n, t[5], e.eps21},
             {false, c.h12, a.p2s, t[6], e.eps12},
             {true, c.h12, a.p2n, t[7], e.eps12}}};
}

}  // namespace detail

/// The eight S-procedure LMI blocks in order: (z1,P1s,t1), (z1,P1n,t3),
/// (z2,P2s,t2), (z2,P2n,t4), (h21,P1s,t5), (h21,P1n,t6), (h12,P2s,t7),
/// (h12,P2n,t8). The robust program holds iff all are PSD for some
/// multipliers >= 0.
inline std::array<Matrix2, 8> lmi_blocks(const Scenario& s, const PowerAllocation& a, const EpigraphAux& aux,
                                         const LmiCertificate& cert) {
    const auto specs = detail::block_specs(s, a, aux);
    std::array<Matrix2, 8> out;
    for (std::size_t i = 0; i < 8; ++i) out[i] = specs[i].at(cert.lambda[i]);
    return out;
}

/// 2x2 PSD test: a >= -tol, c >= -tol, ac - |b|^2 >= -tol.
inline bool psd2(const Matrix2& m, double tol) {
    return m.a >= -tol && m.c >= -tol && m.a * m.c - std::norm(m.b) >= -tol;
}

/// Searches each multiplier on [0, 1e3 (1 + max budget)] by golden section on
/// the smallest eigenvalue, which is concave in lambda since the block is
/// affine in it. A block is accepted when its smallest eigenvalue is at
/// least -tol. Returns nullopt when some block cannot be made PSD.
inline std::optional<LmiCertificate> find_certificate(const Scenario& s, const PowerAllocation& a,
                                                      const EpigraphAux& aux, double tol = 1e-9) {
    const double bracket = 1e3 * (1.0 + std::max(s.p1, s.p2));
    constexpr double kInvPhi = 0.6180339887498949;
    const auto specs = detail::block_specs(s, a, aux);

    LmiCertificate cert;
    for (std::size_t i = 0; i < 8; ++i) {
        const auto& spec = specs[i];
        auto margin = [&](double lambda) { return spec.at(lambda).min_eigenvalue(); };

        double lo = 0.0, hi = bracket;
        double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
        double f1 = margin(x1), f2 = margin(x2);
        for (int it = 0; it < 200 && hi - lo > 1e-14 * bracket; ++it) {
            if (f1 < f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + kInvPhi * (hi - lo);
                f2 = margin(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - kInvPhi * (hi - lo);
                f1 = margin(x1);
            }
        }
        double best = f1 >= f2 ? x1 : x2;
        for (double end : {0.0, bracket})
            if (margin(end) > margin(best)) best = end;

        // The eigenvalue margin is in the units of the aux variables; the
        // determinant in psd2 scales with the powers and would let small
        // violations through at low power.
        if (margin(best) < -tol) return std::nullopt;
        cert.lambda[i] = best;
    }
    return cert;
}

}  // namespace fdsec
