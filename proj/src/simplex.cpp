#include "kpn/simplex.hpp"

#include <stdexcept>

#include "kpn/errors.hpp"

namespace kpn {

namespace {

// Dense dictionary for: minimize c.x s.t. D x = d, x >= 0, maintained at a
// basic feasible solution. Bland's least-index rule for both choices.
class Dictionary {
public:
    Dictionary(std::vector<std::vector<Rational>> matrix, std::vector<Rational> rhs,
               std::vector<std::size_t> basis)
        : T_(std::move(matrix)), rhs_(std::move(rhs)), basis_(std::move(basis)) {
        m_ = T_.size();
        n_ = m_ == 0 ? 0 : T_[0].size();
    }

    std::size_t rows() const { return m_; }
    std::size_t cols() const { return n_; }
    const std::vector<std::size_t>& basis() const { return basis_; }
    const Rational& rhs(std::size_t i) const { return rhs_[i]; }
    const Rational& entry(std::size_t i, std::size_t j) const { return T_[i][j]; }
    const Rational& reduced_cost(std::size_t j) const { return reduced_[j]; }
    const Rational& objective() const { return objective_; }

    void set_costs(const std::vector<Rational>& costs) {
        costs_ = costs;
        recompute_reduced();
    }

    /// Runs Bland pivots to optimality. Returns false when unbounded.
    bool optimize() {
        for (;;) {
            std::size_t enter = n_;
            for (std::size_t j = 0; j < n_; ++j) {
                if (reduced_[j] < 0) {
                    enter = j;
                    break;
                }
            }
            if (enter == n_) return true;

            std::size_t leave = m_;
            Rational best_ratio;
            for (std::size_t i = 0; i < m_; ++i) {
                if (T_[i][enter] <= 0) continue;
                Rational ratio = rhs_[i] / T_[i][enter];
                if (leave == m_ || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
            if (leave == m_) return false;
            pivot(leave, enter);
        }
    }

    void pivot(std::size_t row, std::size_t col) {
        const Rational piv = T_[row][col];
        if (piv == 0) throw std::logic_error("simplex: pivot on zero entry");
        for (auto& v : T_[row]) v /= piv;
        rhs_[row] /= piv;
        T_[row][col] = 1;
        for (std::size_t r = 0; r < m_; ++r) {
            if (r == row || T_[r][col] == 0) continue;
            const Rational factor = T_[r][col];
            for (std::size_t j = 0; j < n_; ++j) {
                if (T_[row][j] != 0) T_[r][j] -= factor * T_[row][j];
            }
            rhs_[r] -= factor * rhs_[row];
            T_[r][col] = 0;
        }
        if (reduced_[col] != 0) {
            const Rational factor = reduced_[col];
            objective_ += factor * rhs_[row];
            for (std::size_t j = 0; j < n_; ++j) {
                if (T_[row][j] != 0) reduced_[j] -= factor * T_[row][j];
            }
            reduced_[col] = 0;
        }
        basis_[row] = col;
    }

    std::vector<Rational> variable_values() const {
        std::vector<Rational> x(n_, Rational(0));
        for (std::size_t i = 0; i < m_; ++i) x[basis_[i]] = rhs_[i];
        return x;
    }

    void drop_row(std::size_t row) {
        T_.erase(T_.begin() + static_cast<std::ptrdiff_t>(row));
        rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(row));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(row));
        --m_;
    }

    void truncate_columns(std::size_t new_n) {
        for (auto& row : T_) row.resize(new_n);
        n_ = new_n;
    }

private:
    void recompute_reduced() {
        reduced_.assign(n_, Rational(0));
        objective_ = 0;
        for (std::size_t j = 0; j < n_; ++j) reduced_[j] = costs_[j];
        for (std::size_t i = 0; i < m_; ++i) {
            const Rational& cb = costs_[basis_[i]];
            if (cb == 0) continue;
            objective_ += cb * rhs_[i];
            for (std::size_t j = 0; j < n_; ++j) {
                if (T_[i][j] != 0) reduced_[j] -= cb * T_[i][j];
            }
        }
    }

    std::size_t m_ = 0, n_ = 0;
    std::vector<std::vector<Rational>> T_;
    std::vector<Rational> rhs_;
    std::vector<std::size_t> basis_;
    std::vector<Rational> costs_;
    std::vector<Rational> reduced_;
    Rational objective_;
};

Rational row_value(const LpRowSpec& row, const std::vector<Rational>& x) {
    Rational acc = 0;
    for (const auto& entry : row.coeffs) acc += entry.coeff * x[entry.var];
    return acc;
}

void verify_primal_point(const RationalProgram& program, const std::vector<Rational>& x,
                         const Rational& value) {
    for (const Rational& v : x) {
        if (v < 0) throw std::logic_error("simplex: negative variable in solution");
    }
    for (const LpRowSpec& row : program.rows) {
        const Rational lhs = row_value(row, x);
        const bool ok = row.relation == Relation::Equal ? lhs == row.rhs : lhs >= row.rhs;
        if (!ok) throw std::logic_error("simplex: solution violates a constraint");
    }
    Rational obj = 0;
    for (std::size_t j = 0; j < program.num_vars; ++j) obj += program.objective[j] * x[j];
    if (obj != value) throw std::logic_error("simplex: objective mismatch");
}

} // namespace

RationalSolution minimize(const RationalProgram& program) {
    const std::size_t n = program.num_vars;
    if (program.objective.size() != n) throw InvalidParameter("objective size mismatch");
    const std::size_t m = program.rows.size();
    if (m == 0) {
        // x = 0 is optimal iff no cost is negative (otherwise unbounded).
        for (const Rational& c : program.objective) {
            if (c < 0) return {LpStatus::Unbounded, Rational(0), {}};
        }
        return {LpStatus::Optimal, Rational(0), std::vector<Rational>(n, Rational(0))};
    }

    std::size_t num_surplus = 0;
    for (const auto& row : program.rows) {
        if (row.relation == Relation::GreaterEqual) ++num_surplus;
    }
    const std::size_t total = n + num_surplus + m; // x, surplus, artificial
    std::vector<std::vector<Rational>> matrix(m, std::vector<Rational>(total, Rational(0)));
    std::vector<Rational> rhs(m);
    std::vector<std::size_t> basis(m);

    std::size_t surplus_at = n;
    for (std::size_t i = 0; i < m; ++i) {
        const LpRowSpec& row = program.rows[i];
        const bool flip = row.rhs < 0;
        for (const auto& entry : row.coeffs) {
            if (entry.var >= n) throw InvalidParameter("row references unknown variable");
            matrix[i][entry.var] += flip ? -entry.coeff : entry.coeff;
        }
        rhs[i] = flip ? -row.rhs : row.rhs;
        if (row.relation == Relation::GreaterEqual) {
            matrix[i][surplus_at] = flip ? Rational(1) : Rational(-1);
            ++surplus_at;
        }
        matrix[i][n + num_surplus + i] = 1;
        basis[i] = n + num_surplus + i;
    }

    Dictionary dict(std::move(matrix), std::move(rhs), std::move(basis));

    // Phase 1: minimize the artificial total.
    std::vector<Rational> phase1(total, Rational(0));
    for (std::size_t i = 0; i < m; ++i) phase1[n + num_surplus + i] = 1;
    dict.set_costs(phase1);
    if (!dict.optimize()) throw std::logic_error("simplex: phase 1 unbounded");
    if (dict.objective() != 0) return {LpStatus::Infeasible, Rational(0), {}};

    // Drive residual artificials out of the basis or drop redundant rows.
    const std::size_t first_artificial = n + num_surplus;
    for (std::size_t i = dict.rows(); i-- > 0;) {
        if (dict.basis()[i] < first_artificial) continue;
        std::size_t col = first_artificial;
        for (std::size_t j = 0; j < first_artificial; ++j) {
            if (dict.entry(i, j) != 0) {
                col = j;
                break;
            }
        }
        if (col == first_artificial) {
            dict.drop_row(i);
        } else {
            dict.pivot(i, col);
        }
    }
    dict.truncate_columns(first_artificial);

    // Phase 2 with the real costs.
    std::vector<Rational> phase2(first_artificial, Rational(0));
    for (std::size_t j = 0; j < n; ++j) phase2[j] = program.objective[j];
    dict.set_costs(phase2);
    if (!dict.optimize()) return {LpStatus::Unbounded, Rational(0), {}};

    std::vector<Rational> all = dict.variable_values();
    std::vector<Rational> x(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n));
    verify_primal_point(program, x, dict.objective());
    return {LpStatus::Optimal, dict.objective(), std::move(x)};
}

RationalSolution minimize_nonneg_cost(const RationalProgram& program) {
    const std::size_t n = program.num_vars;
    if (program.objective.size() != n) throw InvalidParameter("objective size mismatch");
    for (const Rational& c : program.objective) {
        if (c < 0) throw InvalidParameter("minimize_nonneg_cost needs nonnegative costs");
    }

    // Split equality rows so every dual variable is sign-constrained.
    std::vector<LpRowSpec> rows;
    rows.reserve(program.rows.size());
    for (const LpRowSpec& row : program.rows) {
        rows.push_back({row.coeffs, row.rhs, Relation::GreaterEqual});
        if (row.relation == Relation::Equal) {
            LpRowSpec flipped{row.coeffs, -row.rhs, Relation::GreaterEqual};
            for (auto& entry : flipped.coeffs) entry.coeff = -entry.coeff;
            rows.push_back(std::move(flipped));
        }
    }
    const std::size_t m = rows.size();
    if (m == 0) {
        return {LpStatus::Optimal, Rational(0), std::vector<Rational>(n, Rational(0))};
    }

    // Dual in standard form: minimize -b.y s.t. A^T y + s = c, y,s >= 0.
    // The slack basis is feasible because c >= 0.
    const std::size_t total = m + n;
    std::vector<std::vector<Rational>> matrix(n, std::vector<Rational>(total, Rational(0)));
    std::vector<Rational> rhs(n);
    std::vector<std::size_t> basis(n);
    for (std::size_t i = 0; i < m; ++i) {
        for (const auto& entry : rows[i].coeffs) {
            if (entry.var >= n) throw InvalidParameter("row references unknown variable");
            matrix[entry.var][i] += entry.coeff;
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        matrix[j][m + j] = 1;
        rhs[j] = program.objective[j];
        basis[j] = m + j;
    }

    Dictionary dict(std::move(matrix), std::move(rhs), std::move(basis));
    std::vector<Rational> costs(total, Rational(0));
    for (std::size_t i = 0; i < m; ++i) costs[i] = -rows[i].rhs;
    dict.set_costs(costs);
    if (!dict.optimize()) {
        // Unbounded dual certifies an infeasible primal.
        return {LpStatus::Infeasible, Rational(0), {}};
    }

    // Primal solution appears as the reduced costs of the slack columns.
    std::vector<Rational> x(n);
    for (std::size_t j = 0; j < n; ++j) x[j] = dict.reduced_cost(m + j);

    // Certify: recovered primal and dual feasibility plus matching values.
    std::vector<Rational> w = dict.variable_values();
    Rational dual_value = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (w[i] < 0) throw std::logic_error("simplex: negative dual variable");
        dual_value += rows[i].rhs * w[i];
    }
    // A^T y <= c, computed from the original sparse rows.
    std::vector<Rational> aty(n, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
        if (w[i] == 0) continue;
        for (const auto& entry : rows[i].coeffs) aty[entry.var] += entry.coeff * w[i];
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (aty[j] > program.objective[j]) {
            throw std::logic_error("simplex: dual point infeasible");
        }
    }
    RationalProgram check{n, rows, program.objective};
    Rational primal_value = 0;
    for (std::size_t j = 0; j < n; ++j) primal_value += program.objective[j] * x[j];
    verify_primal_point(check, x, primal_value);
    if (primal_value != dual_value) {
        throw std::logic_error("simplex: duality gap in certified solve");
    }
    return {LpStatus::Optimal, primal_value, std::move(x)};
}

} // namespace kpn
