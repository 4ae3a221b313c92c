#pragma once

// Problem-instance types for the two-user full-duplex wiretap channel.
// All powers are linear; dB only appears at the command-line boundary.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace fdsec {

using Complex = std::complex<double>;

/// Channel gains. Under imperfect CSI these hold the estimates.
/// h11 and h22 are the self-interference links; after cancellation only
/// their residual error bounds matter, so they never enter a rate formula.
struct ChannelSet {
    Complex h11{}, h12{}, h21{}, h22{};
    Complex z1{}, z2{};
};

/// Absolute-value bounds on the CSI errors. All-zero means perfect CSI.
struct ErrorBounds {
    double eps11 = 0.0, eps12 = 0.0, eps21 = 0.0, eps22 = 0.0;
    double eps1 = 0.0, eps2 = 0.0;

    static ErrorBounds uniform(double eps) { return {eps, eps, eps, eps, eps, eps}; }

    bool is_zero() const {
        return eps11 == 0.0 && eps12 == 0.0 && eps21 == 0.0 && eps22 == 0.0 && eps1 == 0.0 &&
               eps2 == 0.0;
    }
};

struct Scenario {
    ChannelSet channels;
    ErrorBounds errors;
    double p1 = 1.0;  // power budget of user 1
    double p2 = 1.0;
    double n0 = 1.0;  // receiver noise power
};

/// Message (s) and jamming (n) powers of both users.
struct PowerAllocation {
    double p1s = 0.0, p1n = 0.0, p2s = 0.0, p2n = 0.0;
};

enum class CsiMode { perfect, robust };

inline const char* to_string(CsiMode m) { return m == CsiMode::perfect ? "perfect" : "robust"; }

struct SolverConfig {
    int grid_k = 40;
    int grid_l = 40;
    double zeta = 1e-6;      // bisection stop width on the eavesdropper SINR
    double feas_tol = 1e-9;  // LP feasibility tolerance
    int oracle_power_grid = 40;
    int oracle_error_grid = 100;
    int oracle_phase_grid = 64;
};

class ScenarioError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline double db_to_linear(double p_db) { return std::pow(10.0, p_db / 10.0); }

namespace detail {

inline void require_finite(const Complex& g, const char* name) {
    if (!std::isfinite(g.real()) || !std::isfinite(g.imag()))
        throw ScenarioError(std::string("channel gain ") + name + " is not finite");
}

inline void require_bound(double eps, const char* name) {
    if (!std::isfinite(eps)) throw ScenarioError(std::string("error bound ") + name + " is not finite");
    if (eps < 0.0) throw ScenarioError(std::string("error bound negative: ") + name);
}

}  // namespace detail

/// Returns the scenario unchanged, or throws ScenarioError naming the first
/// violated invariant.
inline Scenario validate(const Scenario& s) {
    const auto& c = s.channels;
    detail::require_finite(c.h11, "h11");
    detail::require_finite(c.h12, "h12");
    detail::require_finite(c.h21, "h21");
    detail::require_finite(c.h22, "h22");
    detail::require_finite(c.z1, "z1");
    detail::require_finite(c.z2, "z2");

    const auto& e = s.errors;
    detail::require_bound(e.eps11, "eps11");
    detail::require_bound(e.eps12, "eps12");
    detail::require_bound(e.eps21, "eps21");
    detail::require_bound(e.eps22, "eps22");
    detail::require_bound(e.eps1, "eps1");
    detail::require_bound(e.eps2, "eps2");

    if (!(std::isfinite(s.p1) && s.p1 > 0.0)) throw ScenarioError("power budget p1 must be positive");
    if (!(std::isfinite(s.p2) && s.p2 > 0.0)) throw ScenarioError("power budget p2 must be positive");
    if (!(std::isfinite(s.n0) && s.n0 > 0.0)) throw ScenarioError("noise power must be positive");
    return s;
}

inline SolverConfig validate(const SolverConfig& cfg) {
    if (cfg.grid_k < 1 || cfg.grid_l < 1) throw ScenarioError("grid sizes must be at least 1");
    if (!(cfg.zeta > 0.0)) throw ScenarioError("bisection tolerance zeta must be positive");
    if (!(cfg.feas_tol > 0.0)) throw ScenarioError("feasibility tolerance must be positive");
    if (cfg.oracle_power_grid < 2 || cfg.oracle_error_grid < 2 || cfg.oracle_phase_grid < 1)
        throw ScenarioError("oracle grid densities must be at least 2");
    return cfg;
}

/// Budget and sign check with a tolerance relative to the budgets.
inline bool is_admissible(const PowerAllocation& a, const Scenario& s, double tol = 1e-9) {
    const double t1 = tol * (1.0 + s.p1);
    const double t2 = tol * (1.0 + s.p2);
    return a.p1s >= -t1 && a.p1n >= -t1 && a.p2s >= -t2 && a.p2n >= -t2 &&
           a.p1s + a.p1n <= s.p1 + t1 && a.p2s + a.p2n <= s.p2 + t2;
}

/// Reference instance: measured channel estimates, N0 = 1, equal budgets and
/// a uniform error bound on every link. h11 and h22 are not needed and are 0.
inline Scenario reference_scenario(double power_db, double eps) {
    Scenario s;
    s.channels.h12 = {0.5054, -0.1449};
    s.channels.h21 = {-0.0878, 1.0534};
    s.channels.z1 = {0.1187, -0.2135};
    s.channels.z2 = {0.1268, 0.2882};
    s.errors = ErrorBounds::uniform(eps);
    s.p1 = db_to_linear(power_db);
    s.p2 = db_to_linear(power_db);
    s.n0 = 1.0;
    return s;
}

}  // namespace fdsec
