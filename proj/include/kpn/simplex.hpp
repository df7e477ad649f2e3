#pragma once

#include <cstddef>
#include <vector>

#include "kpn/rational.hpp"

namespace kpn {

enum class Relation { GreaterEqual, Equal };

struct LpRowEntry {
    std::size_t var;
    Rational coeff;
};

struct LpRowSpec {
    std::vector<LpRowEntry> coeffs;
    Rational rhs;
    Relation relation = Relation::GreaterEqual;
};

/// minimize objective . x  subject to the rows and x >= 0.
struct RationalProgram {
    std::size_t num_vars = 0;
    std::vector<LpRowSpec> rows;
    std::vector<Rational> objective;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct RationalSolution {
    LpStatus status = LpStatus::Infeasible;
    Rational value;
    std::vector<Rational> point;
};

/// Two-phase primal simplex over exact rationals with the least-index
/// (Bland) anti-cycling rule. Deterministic; an Optimal result is verified
/// against every row before it is returned.
RationalSolution minimize(const RationalProgram& program);

/// Specialized solve for programs whose objective is componentwise
/// nonnegative: works on the dual, whose slack basis is feasible without a
/// phase 1, and certifies the optimum by checking the recovered primal and
/// dual points exactly against each other (weak duality from both sides).
/// Equality rows are split internally. Infeasible primal is detected as an
/// unbounded dual; an unbounded primal cannot occur (costs are nonnegative).
RationalSolution minimize_nonneg_cost(const RationalProgram& program);

} // namespace kpn
