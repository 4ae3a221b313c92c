#pragma once

// Scenario files, CSV emission and the `fdsec` command-line driver.
//
// Scenario file: one `key = value` per line, `#` starts a comment.
//   h11 h12 h21 h22 z1 z2   complex gains as "re im" (h11, h22 optional)
//   eps                     uniform error bound, or all six of
//   eps11 eps12 eps21 eps22 eps1 eps2
//   p1_db | p1, p2_db | p2  budgets in dB or linear
//   n0                      noise power
//   grid_k grid_l zeta feas_tol oracle_power_grid oracle_error_grid
//   oracle_phase_grid       optional solver overrides

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "fdsec/lp.hpp"
#include "fdsec/model.hpp"
#include "fdsec/oracle.hpp"
#include "fdsec/programs.hpp"
#include "fdsec/rates.hpp"
#include "fdsec/region.hpp"

namespace fdsec::cli {

enum ExitCode : int { ok = 0, usage_error = 1, invalid_scenario = 2, verification_failed = 3 };

class ConfigError : public ScenarioError {
public:
    using ScenarioError::ScenarioError;
};

struct ScenarioFile {
    Scenario scenario;
    SolverConfig config;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::vector<double> parse_numbers(std::string_view text, std::string_view key) {
    std::vector<double> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == ',')) ++i;
        if (i >= text.size()) break;
        const char* first = text.data() + i;
        // from_chars rejects a leading '+'
        if (*first == '+') ++first;
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), v);
        if (ec != std::errc{} || (ptr != text.data() + text.size() && *ptr != ' ' && *ptr != '\t' && *ptr != ','))
            throw ConfigError("malformed number for '" + std::string(key) + "': " + std::string(text));
        out.push_back(v);
        i = static_cast<std::size_t>(ptr - text.data());
    }
    return out;
}

inline double one_number(const std::map<std::string, std::string>& kv, const std::string& key) {
    const auto v = parse_numbers(kv.at(key), key);
    if (v.size() != 1) throw ConfigError("expected one number for '" + key + "'");
    return v[0];
}

inline int one_count(const std::map<std::string, std::string>& kv, const std::string& key) {
    const double v = one_number(kv, key);
    if (v != std::floor(v) || v < 0 || v > 1e6) throw ConfigError("expected a whole number for '" + key + "'");
    return static_cast<int>(v);
}

inline Complex gain(const std::map<std::string, std::string>& kv, const std::string& key, bool required) {
    if (!kv.count(key)) {
        if (required) throw ConfigError("missing channel gain '" + key + "'");
        return {};
    }
    const auto v = parse_numbers(kv.at(key), key);
    if (v.size() != 2) throw ConfigError("channel gain '" + key + "' needs two numbers (re im)");
    return {v[0], v[1]};
}

}  // namespace detail

inline std::string format_real(double v) {
    if (v == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

/// Parses and validates a scenario file. Throws ConfigError on syntax and
/// ScenarioError on invariant violations.
inline ScenarioFile parse_scenario(std::string_view text) {
    static const std::vector<std::string> known = {
        "h11", "h12", "h21", "h22", "z1", "z2", "eps", "eps11", "eps12", "eps21", "eps22", "eps1", "eps2",
        "p1_db", "p2_db", "p1", "p2", "n0", "grid_k", "grid_l", "zeta", "feas_tol", "oracle_power_grid",
        "oracle_error_grid", "oracle_phase_grid"};

    std::map<std::string, std::string> kv;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv = line;
        if (auto hash = sv.find('#'); hash != std::string_view::npos) sv = sv.substr(0, hash);
        sv = detail::trim(sv);
        if (sv.empty()) continue;
        const auto eq = sv.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        std::string key(detail::trim(sv.substr(0, eq)));
        std::string value(detail::trim(sv.substr(eq + 1)));
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (kv.count(key)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        kv.emplace(std::move(key), std::move(value));
    }

    ScenarioFile f;
    auto& s = f.scenario;
    s.channels.h11 = detail::gain(kv, "h11", false);
    s.channels.h12 = detail::gain(kv, "h12", true);
    s.channels.h21 = detail::gain(kv, "h21", true);
    s.channels.h22 = detail::gain(kv, "h22", false);
    s.channels.z1 = detail::gain(kv, "z1", true);
    s.channels.z2 = detail::gain(kv, "z2", true);

    static const char* six[] = {"eps11", "eps12", "eps21", "eps22", "eps1", "eps2"};
    const auto six_present = std::count_if(std::begin(six), std::end(six), [&](const char* k) { return kv.count(k) > 0; });
    if (kv.count("eps")) {
        if (six_present != 0) throw ConfigError("give either 'eps' or the six per-link bounds, not both");
        s.errors = ErrorBounds::uniform(detail::one_number(kv, "eps"));
    } else if (six_present == 6) {
        s.errors = {detail::one_number(kv, "eps11"), detail::one_number(kv, "eps12"),
                    detail::one_number(kv, "eps21"), detail::one_number(kv, "eps22"),
                    detail::one_number(kv, "eps1"),  detail::one_number(kv, "eps2")};
    } else {
        throw ConfigError("error bounds missing: give 'eps' or all six of eps11 eps12 eps21 eps22 eps1 eps2");
    }

    auto budget = [&](const std::string& lin, const std::string& db) {
        if (kv.count(lin) && kv.count(db)) throw ConfigError("give either '" + lin + "' or '" + db + "', not both");
        if (kv.count(db)) return db_to_linear(detail::one_number(kv, db));
        if (kv.count(lin)) return detail::one_number(kv, lin);
        throw ConfigError("missing power budget '" + db + "' (or '" + lin + "')");
    };
    s.p1 = budget("p1", "p1_db");
    s.p2 = budget("p2", "p2_db");
    if (!kv.count("n0")) throw ConfigError("missing noise power 'n0'");
    s.n0 = detail::one_number(kv, "n0");

    auto& c = f.config;
    if (kv.count("grid_k")) c.grid_k = detail::one_count(kv, "grid_k");
    if (kv.count("grid_l")) c.grid_l = detail::one_count(kv, "grid_l");
    if (kv.count("zeta")) c.zeta = detail::one_number(kv, "zeta");
    if (kv.count("feas_tol")) c.feas_tol = detail::one_number(kv, "feas_tol");
    if (kv.count("oracle_power_grid")) c.oracle_power_grid = detail::one_count(kv, "oracle_power_grid");
    if (kv.count("oracle_error_grid")) c.oracle_error_grid = detail::one_count(kv, "oracle_error_grid");
    if (kv.count("oracle_phase_grid")) c.oracle_phase_grid = detail::one_count(kv, "oracle_phase_grid");

    validate(s);
    validate(c);
    return f;
}

/// Inverse of parse_scenario; doubles are written with 17 significant
/// digits so the round trip is exact.
inline std::string serialize_scenario(const ScenarioFile& f) {
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    const auto& s = f.scenario;
    std::ostringstream o;
    auto gain = [&](const char* k, Complex g) { o << k << " = " << num(g.real()) << ' ' << num(g.imag()) << '\n'; };
    gain("h11", s.channels.h11);
    gain("h12", s.channels.h12);
    gain("h21", s.channels.h21);
    gain("h22", s.channels.h22);
    gain("z1", s.channels.z1);
    gain("z2", s.channels.z2);
    const auto& e = s.errors;
    o << "eps11 = " << num(e.eps11) << "\neps12 = " << num(e.eps12) << "\neps21 = " << num(e.eps21)
      << "\neps22 = " << num(e.eps22) << "\neps1 = " << num(e.eps1) << "\neps2 = " << num(e.eps2) << '\n';
    o << "p1 = " << num(s.p1) << "\np2 = " << num(s.p2) << "\nn0 = " << num(s.n0) << '\n';
    const auto& c = f.config;
    o << "grid_k = " << c.grid_k << "\ngrid_l = " << c.grid_l << "\nzeta = " << num(c.zeta)
      << "\nfeas_tol = " << num(c.feas_tol) << "\noracle_power_grid = " << c.oracle_power_grid
      << "\noracle_error_grid = " << c.oracle_error_grid << "\noracle_phase_grid = " << c.oracle_phase_grid << '\n';
    return o.str();
}

class ConfigReadError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline ScenarioFile load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigReadError("cannot read config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

inline void write_region_csv(std::ostream& o, const RegionResult& res) {
    o << "k,l,r1_target,r2_target,r1_achieved,r2_achieved,re_min,sum_secrecy,p1s,p1n,p2s,p2n,feasible\n";
    for (const auto& p : res.points) {
        o << p.k << ',' << p.l << ',' << format_real(p.r1_target) << ',' << format_real(p.r2_target) << ','
          << format_real(p.r1_achieved) << ',' << format_real(p.r2_achieved) << ',' << format_real(p.re_min) << ','
          << format_real(p.sum_secrecy) << ',' << format_real(p.alloc.p1s) << ',' << format_real(p.alloc.p1n) << ','
          << format_real(p.alloc.p2s) << ',' << format_real(p.alloc.p2n) << ',' << (p.feasible ? 1 : 0) << '\n';
    }
}

inline void write_frontier_csv(std::ostream& o, const std::vector<RatePair>& pts) {
    o << "r1,r2\n";
    for (const auto& p : pts) o << format_real(p.r1) << ',' << format_real(p.r2) << '\n';
}

/// region.csv -> region.frontier.csv; other names get the suffix appended.
inline std::string frontier_path(const std::string& out) {
    constexpr std::string_view ext = ".csv";
    if (out.size() > ext.size() && out.compare(out.size() - ext.size(), ext.size(), ext) == 0)
        return out.substr(0, out.size() - ext.size()) + ".frontier.csv";
    return out + ".frontier.csv";
}

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Oracle cross-checks of the solver on one scenario.
inline std::vector<CheckResult> verify(const Scenario& scenario, const SolverConfig& cfg) {
    const Scenario s = validate(scenario);
    std::vector<CheckResult> out;
    auto add = [&](std::string name, bool ok, const std::string& detail) { out.push_back({std::move(name), ok, detail}); };
    auto num = [](double v) { return format_real(v); };

    oracle::GridSpec power_grid{cfg.oracle_power_grid, true, 1};
    oracle::GridSpec error_grid{cfg.oracle_error_grid, true, cfg.oracle_phase_grid};

    // Perfect CSI: sweep against the 4-D power grid.
    const auto perfect = sweep_region(s, CsiMode::perfect, cfg);
    const auto brute = oracle::brute_force_sum_secrecy(s, power_grid);
    const double diff = std::abs(perfect.max_sum_secrecy() - brute.value);
    add("perfect sum secrecy vs power grid", diff <= 0.05,
        "sweep " + num(perfect.max_sum_secrecy()) + ", grid " + num(brute.value) + ", |diff| " + num(diff));

    // One interior cell against the constrained grid minimum.
    {
        const auto caps = capacities(s, CsiMode::perfect);
        const double r1 = 0.5 * caps.c1, r2 = 0.5 * caps.c2;
        const auto m = min_eave_rate(s, r1, r2, CsiMode::perfect, cfg);
        oracle::GridSpec g = power_grid;
        g.density = std::max(g.density, 60);
        const auto grid_min = oracle::grid_min_eave(s, r1, r2, g);
        const bool ok = m && grid_min && std::abs(m->re_min - *grid_min) <= 0.05;
        add("leakage minimum at half capacities vs power grid", ok,
            "bisection " + (m ? num(m->re_min) : std::string("infeasible")) + ", grid " +
                (grid_min ? num(*grid_min) : std::string("infeasible")));
    }

    // Bisection brackets: feasible at t_min, infeasible just below.
    {
        int checked = 0, bad = 0;
        for (const auto& p : perfect.points) {
            if (!p.feasible || !p.bisected) continue;
            ++checked;
            const double below = p.t_min - std::max(cfg.zeta, 2.0 * cfg.feas_tol);
            const bool up = solve_feasibility(build_perfect_program(s, p.r1_target, p.r2_target, p.t_min), cfg.feas_tol).is_feasible();
            const bool down = solve_feasibility(build_perfect_program(s, p.r1_target, p.r2_target, below), cfg.feas_tol).is_feasible();
            if (!up || down) ++bad;
        }
        add("bisection brackets (perfect sweep)", bad == 0,
            std::to_string(checked - bad) + "/" + std::to_string(checked) + " cells");
    }

    // Closed-form worst cases against the error grids at full power.
    {
        const auto& c = s.channels;
        const auto& e = s.errors;
        const double w1 = worst_case_link_rate(c.h21, e.eps21, e.eps22, s.p1, 0.0, s.p2, s.n0);
        const double g1 = oracle::grid_min_link_rate(c.h21, e.eps21, e.eps22, s.p1, 0.0, s.p2, s.n0, error_grid);
        const double w2 = worst_case_link_rate(c.h12, e.eps12, e.eps11, s.p2, 0.0, s.p1, s.n0);
        const double g2 = oracle::grid_min_link_rate(c.h12, e.eps12, e.eps11, s.p2, 0.0, s.p1, s.n0, error_grid);
        const bool ok = std::abs(w1 - g1) <= 1e-4 * (1.0 + g1) && std::abs(w2 - g2) <= 1e-4 * (1.0 + g2);
        add("worst-case link rates vs error grid", ok,
            "user1 " + num(w1) + "/" + num(g1) + ", user2 " + num(w2) + "/" + num(g2));

        const PowerAllocation half{0.5 * s.p1, 0.5 * s.p1, 0.5 * s.p2, 0.5 * s.p2};
        const double up = worst_case_eave_rate_upper(s, half);
        const double grid_max = oracle::grid_max_eave_rate(s, half, error_grid);
        add("leakage upper bound vs error grid", up >= grid_max - 1e-12,
            "bound " + num(up) + ", grid " + num(grid_max));
    }

    // Robust sweep: every feasible point carries an LMI certificate and meets
    // the true robust rate constraints.
    {
        const auto robust = sweep_region(s, CsiMode::robust, cfg);
        int checked = 0, missing = 0, short_rate = 0;
        for (const auto& p : robust.points) {
            if (!p.feasible) continue;
            ++checked;
            if (!find_certificate(s, p.alloc, p.aux, 1e-8)) ++missing;
            const double slack = 1e-7;
            if (p.r1_achieved < p.r1_target - slack || p.r2_achieved < p.r2_target - slack) ++short_rate;
        }
        add("LMI certificates for robust points", missing == 0,
            std::to_string(checked - missing) + "/" + std::to_string(checked) + " cells");
        add("robust rate targets met in the worst case", short_rate == 0,
            std::to_string(checked - short_rate) + "/" + std::to_string(checked) + " cells");
        if (const auto* b = robust.best_point()) {
            const double leak = oracle::grid_max_eave_rate(s, b->alloc, error_grid);
            add("robust best cell leakage within bound", leak <= b->re_min + 1e-7,
                "grid max " + num(leak) + ", bound " + num(b->re_min));
        }
    }
    return out;
}

namespace detail {

struct CommonOptions {
    std::string config;
    std::string mode = "perfect";
    double eps = -1.0;
    bool eps_given = false;
    std::string grid;
    double zeta = 0.0;
    bool zeta_given = false;
    std::string out;
    std::string power_db;
};

inline void add_common(CLI::App* sub, CommonOptions& o) {
    sub->add_option("--config", o.config, "scenario file")->required();
    sub->add_option("--mode", o.mode, "perfect or robust")->check(CLI::IsMember({"perfect", "robust"}));
    sub->add_option("--eps", o.eps, "uniform CSI error bound (overrides the file)");
    sub->add_option("--grid", o.grid, "target grid as KxL");
    sub->add_option("--zeta", o.zeta, "bisection tolerance");
    sub->add_option("--out", o.out, "output path");
    sub->add_option("--power-db", o.power_db, "budgets in dB as P1,P2 (or one value for both)");
}

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void apply_overrides(const CommonOptions& o, const CLI::App* sub, ScenarioFile& f) {
    if (sub->count("--eps")) f.scenario.errors = ErrorBounds::uniform(o.eps);
    if (sub->count("--zeta")) f.config.zeta = o.zeta;
    if (sub->count("--grid")) {
        const auto x = o.grid.find_first_of("xX");
        int k = 0, l = 0;
        bool ok = x != std::string::npos;
        if (ok) {
            const auto a = std::from_chars(o.grid.data(), o.grid.data() + x, k);
            const auto b = std::from_chars(o.grid.data() + x + 1, o.grid.data() + o.grid.size(), l);
            ok = a.ec == std::errc{} && a.ptr == o.grid.data() + x && b.ec == std::errc{} &&
                 b.ptr == o.grid.data() + o.grid.size();
        }
        if (!ok || k < 1 || l < 1) throw UsageError("--grid expects KxL with positive integers, got '" + o.grid + "'");
        f.config.grid_k = k;
        f.config.grid_l = l;
    }
    if (sub->count("--power-db")) {
        std::vector<double> v;
        try {
            v = parse_numbers(o.power_db, "--power-db");
        } catch (const ConfigError&) {
            v.clear();
        }
        if (v.empty() || v.size() > 2) throw UsageError("--power-db expects P1,P2 in dB, got '" + o.power_db + "'");
        f.scenario.p1 = db_to_linear(v[0]);
        f.scenario.p2 = db_to_linear(v.size() == 2 ? v[1] : v[0]);
    }
    validate(f.scenario);
    validate(f.config);
}

inline bool write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) return false;
    f << content;
    f.close();
    return static_cast<bool>(f);
}

}  // namespace detail

/// Runs one invocation. args excludes the program name. Exit codes:
/// 0 success, 1 usage or output error, 2 invalid or unreadable scenario,
/// 3 verification failure.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Secrecy rate region solver for the full-duplex wiretap channel", "fdsec"};
    app.require_subcommand(1);
    detail::CommonOptions opts;
    auto* region = app.add_subcommand("region", "sweep the rate-target grid and write the region CSV");
    auto* sumrate = app.add_subcommand("sumrate", "print the maximum sum secrecy rate and its allocation");
    auto* verify_cmd = app.add_subcommand("verify", "cross-check the solver against brute-force oracles");
    auto* frontier_cmd = app.add_subcommand("frontier", "write the Pareto frontier of the secrecy region");
    for (auto* sub : {region, sumrate, verify_cmd, frontier_cmd}) detail::add_common(sub, opts);

    std::vector<const char*> argv{"fdsec"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage_error;
    }

    CLI::App* sub = region->parsed() ? region : sumrate->parsed() ? sumrate : verify_cmd->parsed() ? verify_cmd : frontier_cmd;
    ScenarioFile f;
    try {
        f = load_scenario(opts.config);
        detail::apply_overrides(opts, sub, f);
    } catch (const ConfigReadError& e) {
        err << "error: " << e.what() << '\n';
        return invalid_scenario;
    } catch (const detail::UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return usage_error;
    } catch (const ScenarioError& e) {
        err << "invalid scenario: " << e.what() << '\n';
        return invalid_scenario;
    }

    const CsiMode mode = opts.mode == "robust" ? CsiMode::robust : CsiMode::perfect;
    auto emit = [&](const std::string& path, const std::string& text) {
        if (path.empty()) {
            out << text;
            return true;
        }
        if (!detail::write_file(path, text)) {
            err << "error: cannot write output file: " << path << '\n';
            return false;
        }
        return true;
    };

    try {
        if (sub == verify_cmd) {
            const auto checks = verify(f.scenario, f.config);
            bool all = true;
            for (const auto& c : checks) {
                out << (c.passed ? "PASS  " : "FAIL  ") << c.name << "  (" << c.detail << ")\n";
                all = all && c.passed;
            }
            out << (all ? "verification passed\n" : "verification FAILED\n");
            return all ? ok : verification_failed;
        }

        const auto res = sweep_region(f.scenario, mode, f.config);
        if (sub == region) {
            std::ostringstream csv;
            write_region_csv(csv, res);
            if (!emit(opts.out, csv.str())) return usage_error;
            if (!opts.out.empty()) {
                std::ostringstream fr;
                write_frontier_csv(fr, frontier(res));
                if (!emit(frontier_path(opts.out), fr.str())) return usage_error;
            }
            return ok;
        }
        if (sub == frontier_cmd) {
            std::ostringstream fr;
            write_frontier_csv(fr, frontier(res));
            return emit(opts.out, fr.str()) ? ok : usage_error;
        }

        std::ostringstream o;
        o << "mode: " << to_string(mode) << '\n';
        o << "capacities: c1=" << format_real(res.caps.c1) << " c2=" << format_real(res.caps.c2)
          << " ce=" << format_real(res.caps.ce) << '\n';
        if (const auto* b = res.best_point()) {
            o << "max_sum_secrecy: " << format_real(b->sum_secrecy) << '\n';
            o << "cell: k=" << b->k << " l=" << b->l << '\n';
            o << "targets: r1=" << format_real(b->r1_target) << " r2=" << format_real(b->r2_target) << '\n';
            o << "achieved: r1=" << format_real(b->r1_achieved) << " r2=" << format_real(b->r2_achieved)
              << " re_min=" << format_real(b->re_min) << '\n';
            o << "allocation: p1s=" << format_real(b->alloc.p1s) << " p1n=" << format_real(b->alloc.p1n)
              << " p2s=" << format_real(b->alloc.p2s) << " p2n=" << format_real(b->alloc.p2n) << '\n';
        } else {
            o << "max_sum_secrecy: 0\nno feasible cell\n";
        }
        return emit(opts.out, o.str()) ? ok : usage_error;
    } catch (const IllConditionedProgram& e) {
        err << "error: " << e.what() << '\n';
        return invalid_scenario;
    }
}

}  // namespace fdsec::cli
