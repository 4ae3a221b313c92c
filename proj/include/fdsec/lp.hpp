#pragma once

// Dense phase-1 simplex for small linear feasibility systems.
//
// The problems solved here have at most a dozen variables and a dozen and a
// half rows, so the tableau is stored densely and Bland's rule is used for
// both the entering and the leaving choice (no cycling, deterministic).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fdsec {

enum class Sense { le, ge };

struct LinearConstraint {
    std::vector<std::pair<int, double>> coeffs;  // (variable id, coefficient)
    double bound = 0.0;
    Sense sense = Sense::le;

    double lhs(std::span<const double> x) const {
        double v = 0.0;
        for (const auto& [id, a] : coeffs) v += a * x[static_cast<std::size_t>(id)];
        return v;
    }

    /// Amount by which x violates the row; 0 when satisfied.
    double violation(std::span<const double> x) const {
        const double d = lhs(x) - bound;
        return sense == Sense::le ? std::max(d, 0.0) : std::max(-d, 0.0);
    }
};

struct FeasibilityProgram {
    int num_vars = 0;
    std::vector<LinearConstraint> constraints;
    std::vector<int> nonneg;  // ids constrained >= 0; the rest are free

    FeasibilityProgram& add(std::vector<std::pair<int, double>> coeffs, Sense sense, double bound) {
        constraints.push_back({std::move(coeffs), bound, sense});
        return *this;
    }

    bool is_nonneg(int id) const { return std::find(nonneg.begin(), nonneg.end(), id) != nonneg.end(); }

    void require_well_formed() const {
        if (num_vars < 1) throw std::invalid_argument("program needs at least one variable");
        if (constraints.empty()) throw std::invalid_argument("program has no constraints");
        auto valid = [&](int id) { return id >= 0 && id < num_vars; };
        for (const auto& c : constraints) {
            if (!std::isfinite(c.bound)) throw std::invalid_argument("constraint bound is not finite");
            for (const auto& [id, a] : c.coeffs) {
                if (!valid(id)) throw std::invalid_argument("constraint references an unknown variable");
                if (!std::isfinite(a)) throw std::invalid_argument("constraint coefficient is not finite");
            }
        }
        for (int id : nonneg)
            if (!valid(id)) throw std::invalid_argument("sign constraint on an unknown variable");
    }

    /// Independent re-check: every row within tol*(1+|bound|), every
    /// sign-constrained variable >= -tol.
    bool satisfied_by(std::span<const double> x, double tol) const {
        if (x.size() != static_cast<std::size_t>(num_vars)) return false;
        for (const auto& c : constraints)
            if (c.violation(x) > tol * (1.0 + std::abs(c.bound))) return false;
        for (int id : nonneg)
            if (x[static_cast<std::size_t>(id)] < -tol) return false;
        return true;
    }
};

enum class LpStatus { feasible, infeasible, ill_conditioned };

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    std::vector<double> point;        // set when feasible
    double phase_one_objective = 0.0;  // sum of artificials, row-normalized units

    bool is_feasible() const { return status == LpStatus::feasible; }
};

namespace detail {

inline constexpr double kPivotFloor = 1e-12;
inline constexpr double kCostFloor = 1e-12;

class PhaseOneTableau {
public:
    PhaseOneTableau(const FeasibilityProgram& prog, double tol) : tol_(tol) {
        const auto n = static_cast<std::size_t>(prog.num_vars);
        // Structural columns: one per nonnegative variable, two (x+ and x-)
        // per free variable.
        plus_col_.resize(n);
        minus_col_.assign(n, npos);
        for (std::size_t j = 0; j < n; ++j) {
            plus_col_[j] = structural_++;
            if (!prog.is_nonneg(static_cast<int>(j))) minus_col_[j] = structural_++;
        }

        std::vector<std::vector<double>> rows;
        std::vector<double> rhs;
        std::vector<double> slack_sign;
        for (const auto& c : prog.constraints) {
            std::vector<double> dense(n, 0.0);
            for (const auto& [id, a] : c.coeffs) dense[static_cast<std::size_t>(id)] += a;
            double scale = 0.0;
            for (double a : dense) scale = std::max(scale, std::abs(a));
            if (scale == 0.0) {
                // 0 (<= or >=) bound: decided without the tableau.
                const double v = c.sense == Sense::le ? std::max(-c.bound, 0.0) : std::max(c.bound, 0.0);
                if (v > tol_ * (1.0 + std::abs(c.bound))) trivial_violation_ += v;
                continue;
            }
            for (double& a : dense) a /= scale;
            rows.push_back(std::move(dense));
            rhs.push_back(c.bound / scale);
            slack_sign.push_back(c.sense == Sense::le ? 1.0 : -1.0);
        }

        m_ = rows.size();
        slack0_ = structural_;
        art0_ = slack0_ + m_;
        cols_ = art0_ + m_;
        tab_.assign(m_ + 1, std::vector<double>(cols_ + 1, 0.0));
        basis_.assign(m_, 0);
        art_used_.assign(m_, false);

        for (std::size_t i = 0; i < m_; ++i) {
            auto& row = tab_[i];
            for (std::size_t j = 0; j < n; ++j) {
                row[plus_col_[j]] = rows[i][j];
                if (minus_col_[j] != npos) row[minus_col_[j]] = -rows[i][j];
            }
            row[slack0_ + i] = slack_sign[i];
            row[cols_] = rhs[i];
            if (row[cols_] < 0.0)
                for (double& v : row) v = -v;
            if (row[slack0_ + i] > 0.0) {
                basis_[i] = slack0_ + i;
            } else {
                row[art0_ + i] = 1.0;
                basis_[i] = art0_ + i;
                art_used_[i] = true;
            }
        }

        // Reduced costs of the phase-1 objective (sum of artificials).
        auto& cost = tab_[m_];
        for (std::size_t i = 0; i < m_; ++i) {
            if (!art_used_[i]) continue;
            for (std::size_t j = 0; j <= cols_; ++j)
                if (j < art0_ || j == cols_) cost[j] -= tab_[i][j];
        }
    }

    LpResult run(std::size_t num_vars) {
        LpResult out;
        const std::size_t max_iter = 50 * (cols_ + m_ + 1);
        for (std::size_t iter = 0;; ++iter) {
            if (iter > max_iter) {
                out.status = LpStatus::ill_conditioned;
                return out;
            }
            // Bland: lowest-index improving column. Artificials never re-enter.
            std::size_t enter = npos;
            for (std::size_t j = 0; j < art0_; ++j) {
                if (tab_[m_][j] < -kCostFloor) {
                    enter = j;
                    break;
                }
            }
            if (enter == npos) break;

            double best_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = tab_[i][enter];
                if (a > kPivotFloor) best_ratio = std::min(best_ratio, tab_[i][cols_] / a);
            }
            if (!std::isfinite(best_ratio)) {
                // The phase-1 objective is bounded below by 0, so a column
                // without a usable pivot is a numerical artefact.
                out.status = LpStatus::ill_conditioned;
                return out;
            }
            // Ties on the ratio go to the lowest-index basic variable.
            std::size_t leave = npos;
            const double slack = 1e-13 * (1.0 + std::abs(best_ratio));
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = tab_[i][enter];
                if (a <= kPivotFloor || tab_[i][cols_] / a > best_ratio + slack) continue;
                if (leave == npos || basis_[i] < basis_[leave]) leave = i;
            }
            pivot(leave, enter);
        }

        double w = trivial_violation_;
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] >= art0_) w += std::max(tab_[i][cols_], 0.0);
        out.phase_one_objective = w;
        if (w > tol_) {
            out.status = LpStatus::infeasible;
            return out;
        }

        std::vector<double> value(cols_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) value[basis_[i]] = std::max(tab_[i][cols_], 0.0);
        out.point.assign(num_vars, 0.0);
        for (std::size_t j = 0; j < num_vars; ++j) {
            double v = value[plus_col_[j]];
            if (minus_col_[j] != npos) v -= value[minus_col_[j]];
            out.point[j] = v;
        }
        out.status = LpStatus::feasible;
        return out;
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    void pivot(std::size_t r, std::size_t c) {
        auto& prow = tab_[r];
        const double p = prow[c];
        for (double& v : prow) v /= p;
        prow[c] = 1.0;
        for (std::size_t i = 0; i <= m_; ++i) {
            if (i == r) continue;
            auto& row = tab_[i];
            const double f = row[c];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= cols_; ++j) row[j] -= f * prow[j];
            row[c] = 0.0;
        }
        basis_[r] = c;
    }

    double tol_;
    std::size_t structural_ = 0;
    std::size_t m_ = 0, slack0_ = 0, art0_ = 0, cols_ = 0;
    std::vector<std::size_t> plus_col_, minus_col_;
    std::vector<std::vector<double>> tab_;  // m_ constraint rows + cost row; last column is rhs
    std::vector<std::size_t> basis_;
    std::vector<bool> art_used_;
    double trivial_violation_ = 0.0;
};

}  // namespace detail

/// Decides whether the system admits a point. Rows are normalized by their
/// largest coefficient, so the verdict does not depend on positive row
/// scaling. Infeasible means the phase-1 optimum exceeds tol.
inline LpResult solve_feasibility(const FeasibilityProgram& prog, double tol = 1e-9) {
    prog.require_well_formed();
    if (!(tol > 0.0)) throw std::invalid_argument("feasibility tolerance must be positive");
    detail::PhaseOneTableau tableau(prog, tol);
    return tableau.run(static_cast<std::size_t>(prog.num_vars));
}

}  // namespace fdsec
