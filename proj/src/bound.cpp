#include "kpn/bound.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace kpn {

namespace {

void add_coeff(std::map<SubsetVar, Rational>& acc, SubsetVar var, const Rational& c) {
    auto it = acc.find(var);
    if (it == acc.end()) {
        if (c != 0) acc.emplace(var, c);
        return;
    }
    it->second += c;
    if (it->second == 0) acc.erase(it);
}

LinearInequality finish(std::map<SubsetVar, Rational> acc, Rational constant, Relation rel,
                        std::optional<Provenance> prov) {
    LinearInequality out;
    out.coeffs.assign(acc.begin(), acc.end());
    out.constant = std::move(constant);
    out.relation = rel;
    out.provenance = std::move(prov);
    return out;
}

} // namespace

bool provenance_valid(const Provenance& p, const AccessStructure& structure) {
    const SubsetVar s_bit = secret_var_bit(structure);
    const SubsetVar ground = (s_bit << 1) - 1;
    const SubsetVar pmask = s_bit - 1;
    if ((p.x & ~ground) != 0 || (p.y & ~ground) != 0) return false;
    switch (p.kind) {
        case ProvenanceKind::Monotone:
            return (p.x & ~p.y) == 0;
        case ProvenanceKind::Submodular:
            return true;
        case ProvenanceKind::PlusSubmodular: {
            if ((p.x & s_bit) || (p.y & s_bit)) return false;
            return structure.is_qualified(p.x & pmask) && structure.is_qualified(p.y & pmask) &&
                   !structure.is_qualified(p.x & p.y & pmask);
        }
        case ProvenanceKind::SecretEquality:
            return (p.x & s_bit) == 0 && p.y == 0;
        case ProvenanceKind::Normalization:
            return (p.x == 0 || p.x == s_bit) && p.y == 0;
    }
    return false;
}

LinearInequality expand_provenance(const Provenance& p, const AccessStructure& structure,
                                   bool keep_empty_term) {
    if (!provenance_valid(p, structure)) {
        throw InvalidParameter("axiom instance fails its side conditions");
    }
    const SubsetVar s_bit = secret_var_bit(structure);
    std::map<SubsetVar, Rational> acc;
    auto term = [&](SubsetVar var, int c) {
        if (var == 0 && !keep_empty_term) return; // h(empty) written as 0
        add_coeff(acc, var, Rational(c));
    };
    switch (p.kind) {
        case ProvenanceKind::Monotone:
            term(p.y, 1);
            term(p.x, -1);
            return finish(std::move(acc), Rational(0), Relation::GreaterEqual, p);
        case ProvenanceKind::Submodular:
            term(p.x, 1);
            term(p.y, 1);
            term(p.x & p.y, -1);
            term(p.x | p.y, -1);
            return finish(std::move(acc), Rational(0), Relation::GreaterEqual, p);
        case ProvenanceKind::PlusSubmodular:
            term(p.x, 1);
            term(p.y, 1);
            term(p.x & p.y, -1);
            term(p.x | p.y, -1);
            return finish(std::move(acc), Rational(1), Relation::GreaterEqual, p);
        case ProvenanceKind::SecretEquality: {
            term(p.x | s_bit, 1);
            term(p.x, -1);
            const Rational constant = structure.is_qualified(p.x) ? 0 : 1;
            return finish(std::move(acc), constant, Relation::Equal, p);
        }
        case ProvenanceKind::Normalization:
            term(p.x, 1);
            return finish(std::move(acc), p.x == 0 ? Rational(0) : Rational(1), Relation::Equal,
                          p);
    }
    throw InvalidParameter("unknown provenance kind");
}

LpProblem build_lp(const AccessStructure& structure, std::size_t size_cap) {
    const std::size_t ground = structure.participant_count() + 1;
    if (ground > size_cap) {
        throw ProblemTooLarge("LP over " + std::to_string(ground) +
                              " ground elements exceeds the cap of " + std::to_string(size_cap));
    }
    LpProblem problem{structure, {}, {}, static_cast<unsigned>(ground)};
    const SubsetVar s_bit = secret_var_bit(structure);
    const SubsetVar full = (s_bit << 1) - 1;

    problem.rows.push_back(
        expand_provenance({ProvenanceKind::Normalization, 0, 0}, structure, true));
    problem.rows.push_back(
        expand_provenance({ProvenanceKind::Normalization, s_bit, 0}, structure, true));
    for (SubsetVar x = 0; x < s_bit; ++x) {
        problem.rows.push_back(
            expand_provenance({ProvenanceKind::SecretEquality, x, 0}, structure, true));
    }
    for (unsigned xi = 0; xi < ground; ++xi) {
        const SubsetVar xb = SubsetVar{1} << xi;
        for (SubsetVar y = 0; y <= full; ++y) {
            if (y & xb) continue;
            problem.rows.push_back(
                expand_provenance({ProvenanceKind::Monotone, y, y | xb}, structure, true));
        }
    }
    for (unsigned xi = 0; xi < ground; ++xi) {
        for (unsigned yi = xi + 1; yi < ground; ++yi) {
            const SubsetVar xb = SubsetVar{1} << xi;
            const SubsetVar yb = SubsetVar{1} << yi;
            for (SubsetVar y = 0; y <= full; ++y) {
                if (y & (xb | yb)) continue;
                problem.rows.push_back(expand_provenance(
                    {ProvenanceKind::Submodular, y | xb, y | yb}, structure, true));
            }
        }
    }
    for (unsigned i = 0; i < structure.participant_count(); ++i) {
        problem.objective_participants.push_back(i);
    }
    return problem;
}

ReducedLp reduce_lp(const LpProblem& problem, bool with_objective_links) {
    const SubsetVar s_bit = secret_var_bit(problem.structure);
    ReducedLp reduced;
    reduced.has_t = with_objective_links;

    // Variable order: nonempty subsets of P ascending, then t.
    std::map<SubsetMask, std::size_t> index;
    for (SubsetMask x = 1; x < s_bit; ++x) {
        index.emplace(x, reduced.var_masks.size());
        reduced.var_masks.push_back(x);
    }
    const std::size_t num_vars = reduced.var_masks.size() + (with_objective_links ? 1 : 0);
    const std::size_t t_index = reduced.var_masks.size();

    auto secret_shift = [&](SubsetMask base) {
        return problem.structure.is_qualified(base) ? Rational(0) : Rational(1);
    };

    // Substitute the equalities into every row, then drop rows that became
    // vacuous and merge duplicates keeping the strongest right-hand side.
    std::map<std::vector<std::pair<std::size_t, Rational>>, Rational> unique;
    for (const LinearInequality& row : problem.rows) {
        std::map<std::size_t, Rational> acc;
        Rational rhs = row.constant;
        for (const auto& [var, c] : row.coeffs) {
            if (var == 0) continue; // h(empty) = 0
            if (var == s_bit) {
                rhs -= c; // h(S) = 1
                continue;
            }
            if (var & s_bit) {
                const SubsetMask base = var & ~s_bit;
                rhs -= c * secret_shift(base);
                auto it = acc.emplace(index.at(base), Rational(0)).first;
                it->second += c;
                if (it->second == 0) acc.erase(it);
            } else {
                auto it = acc.emplace(index.at(var), Rational(0)).first;
                it->second += c;
                if (it->second == 0) acc.erase(it);
            }
        }
        const auto emit = [&](std::vector<std::pair<std::size_t, Rational>> coeffs,
                              Rational bound) {
            if (coeffs.empty()) {
                if (bound > 0) throw std::logic_error("bound: constant row is infeasible");
                return;
            }
            auto it = unique.find(coeffs);
            if (it == unique.end()) {
                unique.emplace(std::move(coeffs), std::move(bound));
            } else if (bound > it->second) {
                it->second = std::move(bound);
            }
        };
        std::vector<std::pair<std::size_t, Rational>> coeffs(acc.begin(), acc.end());
        if (row.relation == Relation::Equal) {
            auto negated = coeffs;
            for (auto& [var, c] : negated) c = -c;
            emit(coeffs, rhs);
            emit(std::move(negated), -rhs);
        } else {
            emit(std::move(coeffs), rhs);
        }
    }

    reduced.program.num_vars = num_vars;
    reduced.program.objective.assign(num_vars, Rational(0));
    for (const auto& [coeffs, rhs] : unique) {
        LpRowSpec spec;
        for (const auto& [var, c] : coeffs) spec.coeffs.push_back({var, c});
        spec.rhs = rhs;
        spec.relation = Relation::GreaterEqual;
        reduced.program.rows.push_back(std::move(spec));
    }
    if (with_objective_links) {
        reduced.program.objective[t_index] = 1;
        for (unsigned pi : problem.objective_participants) {
            const SubsetMask singleton = SubsetMask{1} << pi;
            LpRowSpec spec;
            spec.coeffs.push_back({t_index, Rational(1)});
            spec.coeffs.push_back({index.at(singleton), Rational(-1)});
            spec.rhs = 0;
            spec.relation = Relation::GreaterEqual;
            reduced.program.rows.push_back(std::move(spec));
        }
    }
    return reduced;
}

LpSolution solve_lp(const LpProblem& problem) {
    const ReducedLp reduced = reduce_lp(problem, true);
    const RationalSolution sol = minimize_nonneg_cost(reduced.program);
    if (sol.status != LpStatus::Optimal) {
        // The axiom polytope is nonempty and the objective bounded; anything
        // else indicates a constraint-generation bug.
        throw std::logic_error("bound: axiom LP reported infeasible/unbounded");
    }

    const SubsetVar s_bit = secret_var_bit(problem.structure);
    LpSolution out;
    out.value = sol.value;
    out.point[0] = 0;
    out.point[s_bit] = 1; // the base = empty case of the secret equalities
    for (std::size_t i = 0; i < reduced.var_masks.size(); ++i) {
        const SubsetMask base = reduced.var_masks[i];
        out.point[base] = sol.point[i];
        out.point[base | s_bit] =
            sol.point[i] + (problem.structure.is_qualified(base) ? Rational(0) : Rational(1));
    }

    // Final authority: the reconstructed point must satisfy every original
    // row exactly, and t must dominate every participant entropy.
    for (const LinearInequality& row : problem.rows) {
        Rational lhs = 0;
        for (const auto& [var, c] : row.coeffs) lhs += c * out.point.at(var);
        const bool ok = row.relation == Relation::Equal ? lhs == row.constant
                                                        : lhs >= row.constant;
        if (!ok) throw std::logic_error("bound: LP solution violates an original row");
    }
    for (unsigned pi : problem.objective_participants) {
        if (out.point.at(SubsetVar{1} << pi) > out.value) {
            throw std::logic_error("bound: objective variable below a share entropy");
        }
    }
    return out;
}

Rational kappa(const AccessStructure& structure, std::size_t size_cap) {
    return solve_lp(build_lp(structure, size_cap)).value;
}

Rational rate_upper_bound(const AccessStructure& structure, std::size_t size_cap) {
    return Rational(1) / kappa(structure, size_cap);
}

std::vector<std::size_t> violated_rows(const LpProblem& problem,
                                       const std::map<SubsetVar, double>& h, double tol) {
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < problem.rows.size(); ++i) {
        const LinearInequality& row = problem.rows[i];
        double lhs = 0.0;
        for (const auto& [var, c] : row.coeffs) {
            lhs += static_cast<double>(c) * h.at(var);
        }
        const double constant = static_cast<double>(row.constant);
        const bool ok = row.relation == Relation::Equal
                            ? std::abs(lhs - constant) <= tol
                            : lhs >= constant - tol;
        if (!ok) bad.push_back(i);
    }
    return bad;
}

std::string to_string(LemmaKind kind) {
    switch (kind) {
        case LemmaKind::Down: return "down";
        case LemmaKind::Up: return "up";
        case LemmaKind::Combined: return "combined";
    }
    throw InvalidParameter("unknown lemma kind");
}

LemmaKind lemma_kind_from_string(std::string_view name) {
    if (name == "down") return LemmaKind::Down;
    if (name == "up") return LemmaKind::Up;
    if (name == "combined") return LemmaKind::Combined;
    throw InvalidParameter("unknown lemma '" + std::string(name) + "'");
}

namespace {

// gamma_n masks: bit 0 = k, bit i = p_i.
SubsetMask king_bit() { return SubsetMask{1}; }
SubsetMask pawn_bit(unsigned i) { return SubsetMask{1} << i; }
SubsetMask pawn_range(unsigned from, unsigned to) { // {p_from..p_to}, empty if from > to
    SubsetMask m = 0;
    if (from > to) return m;
    for (unsigned i = from; i <= to; ++i) m |= pawn_bit(i);
    return m;
}

void append_down_items(std::vector<CertificateItem>& items, unsigned n) {
    const SubsetMask all_pawns = pawn_range(1, n);
    const SubsetMask everyone = king_bit() | all_pawns;
    for (unsigned i = 2; i <= n; ++i) {
        items.push_back({{ProvenanceKind::PlusSubmodular, all_pawns,
                          king_bit() | (all_pawns & ~pawn_bit(i))},
                         Rational(1)});
        items.push_back(
            {{ProvenanceKind::Submodular, pawn_range(1, i), all_pawns & ~pawn_bit(i)},
             Rational(1)});
    }
    for (unsigned i = 2; i + 1 <= n; ++i) {
        items.push_back(
            {{ProvenanceKind::Monotone, king_bit() | (all_pawns & ~pawn_bit(i)), everyone},
             Rational(1)});
    }
    items.push_back({{ProvenanceKind::Monotone, all_pawns, everyone}, Rational(1)});
}

void append_up_items(std::vector<CertificateItem>& items, unsigned n) {
    const SubsetMask kp1 = king_bit() | pawn_bit(1);
    for (unsigned i = 2; i + 1 <= n; ++i) {
        items.push_back(
            {{ProvenanceKind::PlusSubmodular, kp1, king_bit() | pawn_bit(i)}, Rational(1)});
        items.push_back({{ProvenanceKind::Submodular, king_bit(), pawn_bit(i)}, Rational(1)});
        items.push_back({{ProvenanceKind::Submodular, king_bit() | pawn_range(1, i - 1),
                          kp1 | pawn_bit(i)},
                         Rational(1)});
    }
}

LinearInequality make_target(std::map<SubsetVar, Rational> acc, Rational constant) {
    return finish(std::move(acc), std::move(constant), Relation::GreaterEqual, std::nullopt);
}

} // namespace

Certificate lemma_certificate(LemmaKind kind, unsigned n) {
    if (n < 2) throw InvalidParameter("lemma certificates require n >= 2");
    if (n > 18) throw InvalidParameter("lemma certificates supported up to n = 18");
    Certificate cert{make_gamma(n), {}, {}};
    const SubsetMask king_head = king_bit() | pawn_range(1, n - 1); // {k, p_1..p_{n-1}}
    switch (kind) {
        case LemmaKind::Down: {
            append_down_items(cert.items, n);
            std::map<SubsetVar, Rational> acc;
            add_coeff(acc, king_head, Rational(1));
            add_coeff(acc, pawn_bit(1), Rational(-1));
            cert.target = make_target(std::move(acc), Rational(n - 1));
            return cert;
        }
        case LemmaKind::Up: {
            append_up_items(cert.items, n);
            std::map<SubsetVar, Rational> acc;
            add_coeff(acc, king_bit() | pawn_bit(1), Rational(1));
            for (unsigned i = 2; i + 1 <= n; ++i) add_coeff(acc, pawn_bit(i), Rational(1));
            add_coeff(acc, king_head, Rational(-1));
            cert.target = make_target(std::move(acc), Rational(n) - 2);
            return cert;
        }
        case LemmaKind::Combined: {
            append_down_items(cert.items, n);
            append_up_items(cert.items, n);
            cert.items.push_back(
                {{ProvenanceKind::Submodular, pawn_bit(1), king_bit()}, Rational(1)});
            std::map<SubsetVar, Rational> acc;
            add_coeff(acc, king_bit(), Rational(1));
            for (unsigned i = 2; i + 1 <= n; ++i) add_coeff(acc, pawn_bit(i), Rational(1));
            cert.target = make_target(std::move(acc), Rational(2) * n - 3);
            return cert;
        }
    }
    throw InvalidParameter("unknown lemma kind");
}

bool verify_certificate(const Certificate& certificate) {
    std::map<SubsetVar, Rational> sum;
    Rational constant_sum = 0;
    for (const CertificateItem& item : certificate.items) {
        if (item.multiplier < 0) return false;
        if (!provenance_valid(item.provenance, certificate.structure)) return false;
        const LinearInequality expanded =
            expand_provenance(item.provenance, certificate.structure, false);
        for (const auto& [var, c] : expanded.coeffs) {
            add_coeff(sum, var, item.multiplier * c);
        }
        constant_sum += item.multiplier * expanded.constant;
    }
    std::vector<std::pair<SubsetVar, Rational>> summed(sum.begin(), sum.end());
    if (summed != certificate.target.coeffs) return false;
    return constant_sum >= certificate.target.constant;
}

std::optional<Rational> certificate_min_share_bound(const Certificate& certificate) {
    if (!verify_certificate(certificate)) return std::nullopt;
    const SubsetVar s_bit = secret_var_bit(certificate.structure);
    std::size_t participants = 0;
    for (const auto& [var, c] : certificate.target.coeffs) {
        if (c != 1) return std::nullopt;
        if (var & s_bit) return std::nullopt;
        if (std::popcount(var) != 1) return std::nullopt;
        ++participants;
    }
    if (participants == 0) return std::nullopt;
    return certificate.target.constant / Rational(participants);
}

} // namespace kpn
