#pragma once

// Closed-form rates and capacities, in bits per channel use.

#include <algorithm>
#include <cmath>

#include "fdsec/model.hpp"

namespace fdsec {

struct RateTriple {
    double r1 = 0.0, r2 = 0.0, re = 0.0;
};

struct CapacityTriple {
    double c1 = 0.0, c2 = 0.0, ce = 0.0;
};

/// Smallest |h0 + e|^2 over |e| <= eps. Clamped at zero once the ball
/// contains the origin.
inline double shrunk_gain_sq(double magnitude, double eps) {
    const double m = std::max(magnitude - eps, 0.0);
    return m * m;
}

/// Largest |h0 + e|^2 over |e| <= eps.
inline double grown_gain_sq(double magnitude, double eps) {
    const double m = magnitude + eps;
    return m * m;
}

/// Same, from the complex estimate; eps == 0 gives |h0|^2 exactly.
inline double shrunk_gain_sq(Complex h0, double eps) {
    return eps == 0.0 ? std::norm(h0) : shrunk_gain_sq(std::abs(h0), eps);
}

inline double grown_gain_sq(Complex h0, double eps) {
    return eps == 0.0 ? std::norm(h0) : grown_gain_sq(std::abs(h0), eps);
}

/// log2(1 + g*ps / (n0 + g*pn)).
inline double link_rate(double gain_sq, double ps, double pn, double n0) {
    if (gain_sq <= 0.0 || ps <= 0.0) return 0.0;
    return std::log2(1.0 + gain_sq * ps / (n0 + gain_sq * pn));
}

/// Leakage of both messages to the eavesdropper, jammed by both users' noise.
inline double eave_rate(double z1_sq, double z2_sq, const PowerAllocation& a, double n0) {
    const double signal = z1_sq * a.p1s + z2_sq * a.p2s;
    if (signal <= 0.0) return 0.0;
    return std::log2(1.0 + signal / (n0 + z1_sq * a.p1n + z2_sq * a.p2n));
}

/// Rates with the nominal (estimated) gains.
inline RateTriple nominal_rates(const Scenario& s, const PowerAllocation& a) {
    const auto& c = s.channels;
    return {link_rate(std::norm(c.h21), a.p1s, a.p1n, s.n0),
            link_rate(std::norm(c.h12), a.p2s, a.p2n, s.n0),
            eave_rate(std::norm(c.z1), std::norm(c.z2), a, s.n0)};
}

/// Full-budget capacities. In robust mode the legitimate links take their
/// worst gain over the error ball and the eavesdropper its best.
inline CapacityTriple capacities(const Scenario& s, CsiMode mode) {
    const auto& c = s.channels;
    const auto& e = s.errors;
    double g21 = std::norm(c.h21);
    double g12 = std::norm(c.h12);
    double gz1 = std::norm(c.z1);
    double gz2 = std::norm(c.z2);
    if (mode == CsiMode::robust) {
        g21 = shrunk_gain_sq(c.h21, e.eps21);
        g12 = shrunk_gain_sq(c.h12, e.eps12);
        gz1 = grown_gain_sq(c.z1, e.eps1);
        gz2 = grown_gain_sq(c.z2, e.eps2);
    }
    return {std::log2(1.0 + g21 * s.p1 / s.n0), std::log2(1.0 + g12 * s.p2 / s.n0),
            std::log2(1.0 + (gz1 * s.p1 + gz2 * s.p2) / s.n0)};
}

/// Exact minimum over |e_link| <= eps_link, |e_self| <= eps_self of
///   log2(1 + |h0+e_link|^2 ps / (n0 + |e_self|^2 p_other_total + |h0+e_link|^2 pn)).
/// g -> a g / (c + b g) is nondecreasing, so the minimum sits at the smallest
/// link gain and the largest residual self-interference.
inline double worst_case_link_rate(Complex h0, double eps_link, double eps_self, double ps, double pn,
                                   double p_other_total, double n0) {
    const double g = shrunk_gain_sq(h0, eps_link);
    if (g <= 0.0 || ps <= 0.0) return 0.0;
    const double self_noise = eps_self * eps_self * p_other_total;
    return std::log2(1.0 + g * ps / (n0 + self_noise + g * pn));
}

/// Leakage bound with the error decoupled between numerator and
/// denominator: message terms take the grown gain, jamming terms the shrunk
/// gain. Never below the true worst case; exact when there is no jamming.
inline double worst_case_eave_rate_upper(const Scenario& s, const PowerAllocation& a) {
    const auto& c = s.channels;
    const auto& e = s.errors;
    const double signal = grown_gain_sq(c.z1, e.eps1) * a.p1s + grown_gain_sq(c.z2, e.eps2) * a.p2s;
    if (signal <= 0.0) return 0.0;
    const double jam = shrunk_gain_sq(c.z1, e.eps1) * a.p1n + shrunk_gain_sq(c.z2, e.eps2) * a.p2n;
    return std::log2(1.0 + signal / (s.n0 + jam));
}

}  // namespace fdsec
