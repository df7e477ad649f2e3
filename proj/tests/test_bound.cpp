#include <doctest.h>

#include <algorithm>

#include "kpn/bound.hpp"
#include "kpn/entropy.hpp"
#include "kpn/jsonio.hpp"

using namespace kpn;

namespace {

SubsetMask pawns(std::initializer_list<unsigned> idx) {
    SubsetMask m = 0;
    for (unsigned i : idx) m |= SubsetMask{1} << i;
    return m;
}
constexpr SubsetMask kKing = 1;

std::size_t count_kind(const LpProblem& p, ProvenanceKind kind) {
    return static_cast<std::size_t>(
        std::count_if(p.rows.begin(), p.rows.end(), [&](const LinearInequality& row) {
            return row.provenance && row.provenance->kind == kind;
        }));
}

} // namespace

TEST_CASE("LP construction counts for gamma_3") {
    const LpProblem p = build_lp(make_gamma(3));
    CHECK(p.subset_variable_count() == 32);
    CHECK(count_kind(p, ProvenanceKind::Submodular) == 80); // C(5,2) * 2^3
    CHECK(count_kind(p, ProvenanceKind::Monotone) == 80);   // 5 * 2^4
    CHECK(count_kind(p, ProvenanceKind::SecretEquality) == 16);
    CHECK(count_kind(p, ProvenanceKind::Normalization) == 2);
    CHECK(p.objective_participants.size() == 4);

    CHECK_THROWS_AS(build_lp(make_gamma(8)), ProblemTooLarge);
    CHECK_NOTHROW(build_lp(make_gamma(8), 12));
}

TEST_CASE("axiom instance expansion and side conditions") {
    const AccessStructure g = make_gamma(2);
    const SubsetMask s_bit = secret_var_bit(g);

    CHECK(provenance_valid({ProvenanceKind::Monotone, pawns({1}), pawns({1, 2})}, g));
    CHECK_FALSE(provenance_valid({ProvenanceKind::Monotone, pawns({1, 2}), pawns({1})}, g));

    // {k,p1} and {k,p2} are qualified, their intersection {k} is not
    CHECK(provenance_valid(
        {ProvenanceKind::PlusSubmodular, kKing | pawns({1}), kKing | pawns({2})}, g));
    // ... but {k,p1} and {k,p1,p2} intersect in a qualified set
    CHECK_FALSE(provenance_valid(
        {ProvenanceKind::PlusSubmodular, kKing | pawns({1}), kKing | pawns({1, 2})}, g));
    // S may not appear in plus-submodular instances
    CHECK_FALSE(provenance_valid(
        {ProvenanceKind::PlusSubmodular, (kKing | pawns({1})) | s_bit, kKing | pawns({2})}, g));

    const LinearInequality plus = expand_provenance(
        {ProvenanceKind::PlusSubmodular, kKing | pawns({1}), kKing | pawns({2})}, g, false);
    CHECK(plus.constant == Rational(1));
    // h(kp1) + h(kp2) - h(k) - h(kp1p2) >= 1
    const std::vector<std::pair<SubsetVar, Rational>> expected = {
        {kKing, Rational(-1)},
        {kKing | pawns({1}), Rational(1)},
        {kKing | pawns({2}), Rational(1)},
        {kKing | pawns({1, 2}), Rational(-1)},
    };
    CHECK(plus.coeffs == expected);

    // the empty set is folded away in certificate expansions ...
    const LinearInequality sub =
        expand_provenance({ProvenanceKind::Submodular, kKing, pawns({1})}, g, false);
    CHECK(sub.coeffs.size() == 3);
    // ... and kept as a pinned variable in LP rows
    const LinearInequality sub_lp =
        expand_provenance({ProvenanceKind::Submodular, kKing, pawns({1})}, g, true);
    CHECK(sub_lp.coeffs.size() == 4);

    const LinearInequality eq =
        expand_provenance({ProvenanceKind::SecretEquality, pawns({1}), 0}, g, true);
    CHECK(eq.relation == Relation::Equal);
    CHECK(eq.constant == Rational(1)); // {p1} is unqualified: h(p1 S) = h(p1) + 1
}

TEST_CASE("kappa on small structures equals the known values") {
    CHECK(kappa(make_gamma(2)) == Rational(1));
    CHECK(kappa(make_gamma(3)) == Rational(3, 2));
    CHECK(kappa(make_gamma(4)) == Rational(5, 3));
    CHECK(rate_upper_bound(make_gamma(4)) == Rational(3, 5));
    CHECK(kappa(make_named("path4")) == Rational(3, 2));
}

TEST_CASE("LP solution point satisfies every row exactly and attains the value") {
    const LpProblem p = build_lp(make_gamma(3));
    const LpSolution sol = solve_lp(p);
    CHECK(sol.value == Rational(3, 2));
    for (const LinearInequality& row : p.rows) {
        Rational lhs = 0;
        for (const auto& [var, c] : row.coeffs) lhs += c * sol.point.at(var);
        if (row.relation == Relation::Equal) {
            CHECK(lhs == row.constant);
        } else {
            CHECK(lhs >= row.constant);
        }
    }
    Rational max_single = 0;
    for (unsigned pi : p.objective_participants) {
        max_single = std::max(max_single, sol.point.at(SubsetVar{1} << pi));
    }
    CHECK(max_single == sol.value);
}

TEST_CASE("named lemma certificates verify for n up to 10") {
    for (unsigned n = 2; n <= 10; ++n) {
        const Certificate down = lemma_certificate(LemmaKind::Down, n);
        const Certificate up = lemma_certificate(LemmaKind::Up, n);
        const Certificate combined = lemma_certificate(LemmaKind::Combined, n);
        CHECK(verify_certificate(down));
        CHECK(verify_certificate(up));
        CHECK(verify_certificate(combined));
        CHECK(combined.target.constant == Rational(2) * n - 3);
    }
    CHECK_THROWS_AS(lemma_certificate(LemmaKind::Down, 1), InvalidParameter);
}

TEST_CASE("certificate targets spell out the lemma inequalities") {
    // Up at n=4: h(kp1) + h(p2) + h(p3) - h(kp1p2p3) >= 2
    const Certificate up4 = lemma_certificate(LemmaKind::Up, 4);
    const std::vector<std::pair<SubsetVar, Rational>> up_expected = {
        {kKing | pawns({1}), Rational(1)},
        {pawns({2}), Rational(1)},
        {pawns({3}), Rational(1)},
        {kKing | pawns({1, 2, 3}), Rational(-1)},
    };
    CHECK(up4.target.coeffs == up_expected);
    CHECK(up4.target.constant == Rational(2));

    // Down at n=3: h(kp1p2) - h(p1) >= 2
    const Certificate down3 = lemma_certificate(LemmaKind::Down, 3);
    const std::vector<std::pair<SubsetVar, Rational>> down_expected = {
        {pawns({1}), Rational(-1)},
        {kKing | pawns({1, 2}), Rational(1)},
    };
    CHECK(down3.target.coeffs == down_expected);
    CHECK(down3.target.constant == Rational(2));

    // Combined at n=5: h(k) + h(p2) + h(p3) + h(p4) >= 7
    const Certificate comb5 = lemma_certificate(LemmaKind::Combined, 5);
    const std::vector<std::pair<SubsetVar, Rational>> comb_expected = {
        {kKing, Rational(1)},
        {pawns({2}), Rational(1)},
        {pawns({3}), Rational(1)},
        {pawns({4}), Rational(1)},
    };
    CHECK(comb5.target.coeffs == comb_expected);
    CHECK(comb5.target.constant == Rational(7));

    // Up at n=2 is the vacuous certificate for the trivial target
    const Certificate up2 = lemma_certificate(LemmaKind::Up, 2);
    CHECK(up2.items.empty());
    CHECK(up2.target.coeffs.empty());
    CHECK(up2.target.constant == Rational(0));
    CHECK(verify_certificate(up2));
}

TEST_CASE("certificate verification rejects mutations") {
    const Certificate down3 = lemma_certificate(LemmaKind::Down, 3);

    // dropping any monotonicity breaks the cancellation
    for (std::size_t i = 0; i < down3.items.size(); ++i) {
        if (down3.items[i].provenance.kind != ProvenanceKind::Monotone) continue;
        Certificate mutated = down3;
        mutated.items.erase(mutated.items.begin() + static_cast<std::ptrdiff_t>(i));
        CHECK_FALSE(verify_certificate(mutated));
    }
    // dropping a plus-submodular item loses the constant
    for (std::size_t i = 0; i < down3.items.size(); ++i) {
        if (down3.items[i].provenance.kind != ProvenanceKind::PlusSubmodular) continue;
        Certificate mutated = down3;
        mutated.items.erase(mutated.items.begin() + static_cast<std::ptrdiff_t>(i));
        CHECK_FALSE(verify_certificate(mutated));
    }
    // negative multipliers are rejected
    Certificate negated = down3;
    negated.items[0].multiplier = Rational(-1);
    CHECK_FALSE(verify_certificate(negated));

    // invalid provenance is a verdict, not an exception
    Certificate invalid = down3;
    invalid.items[0].provenance =
        {ProvenanceKind::PlusSubmodular, kKing | pawns({1}), kKing | pawns({1, 2})};
    CHECK_FALSE(verify_certificate(invalid));

    // weakening the target constant still verifies; strengthening fails
    Certificate weaker = down3;
    weaker.target.constant = Rational(1);
    CHECK(verify_certificate(weaker));
    Certificate stronger = down3;
    stronger.target.constant = Rational(3);
    CHECK_FALSE(verify_certificate(stronger));
}

TEST_CASE("combined certificates give weak-duality lower bounds on kappa") {
    for (unsigned n : {3u, 4u, 5u}) {
        const Certificate cert = lemma_certificate(LemmaKind::Combined, n);
        const auto bound = certificate_min_share_bound(cert);
        REQUIRE(bound.has_value());
        CHECK(*bound == Rational(2 * n - 3, n - 1));
        CHECK(kappa(make_gamma(n)) >= *bound);
    }
    // a target that is not a sum of singleton entropies gives no bound
    const Certificate down = lemma_certificate(LemmaKind::Down, 3);
    CHECK_FALSE(certificate_min_share_bound(down).has_value());
}

TEST_CASE("plus-submodularity is implied by the LP rows on gamma_2") {
    const AccessStructure g = make_gamma(2);
    const LpProblem problem = build_lp(g);
    const ReducedLp reduced = reduce_lp(problem, false);
    REQUIRE_FALSE(reduced.has_t);

    auto var_index = [&](SubsetMask mask) {
        for (std::size_t i = 0; i < reduced.var_masks.size(); ++i) {
            if (reduced.var_masks[i] == mask) return i;
        }
        FAIL("missing variable");
        return std::size_t{0};
    };

    int pairs_checked = 0;
    for (SubsetMask x = 1; x <= g.full_mask(); ++x) {
        for (SubsetMask y = x + 1; y <= g.full_mask(); ++y) {
            if (!g.is_qualified(x) || !g.is_qualified(y) || g.is_qualified(x & y)) continue;
            RationalProgram p = reduced.program;
            // minimize h(X) + h(Y) - h(X^Y) - h(XvY) over the axiom polytope
            p.objective.assign(p.num_vars, Rational(0));
            p.objective[var_index(x)] += 1;
            p.objective[var_index(y)] += 1;
            if ((x & y) != 0) p.objective[var_index(x & y)] -= 1;
            p.objective[var_index(x | y)] -= 1;
            const RationalSolution sol = minimize(p);
            REQUIRE(sol.status == LpStatus::Optimal);
            CHECK(sol.value >= Rational(1));
            ++pairs_checked;
        }
    }
    CHECK(pairs_checked == 3);
}

TEST_CASE("oracle entropy vectors are feasible for the LP polytope") {
    const SchemeSpec spec(SchemeKind::Sigma2, 3, Prime(7));
    const CountTable table = enumerate_joint(spec);
    const AccessStructure g = make_gamma(3);
    REQUIRE(check_perfect(table, g).perfect);

    const LpProblem problem = build_lp(g);
    const SubsetMask s_bit = table.layout.secret_bit();
    const double h_secret = subset_entropy(table, s_bit);
    std::map<SubsetVar, double> h;
    for (SubsetVar m = 0; m <= table.layout.full_ground_mask(); ++m) {
        h[m] = subset_entropy(table, m) / h_secret;
    }
    CHECK(violated_rows(problem, h, 1e-9).empty());

    // sanity: shrinking a share entropy must violate some row
    h[SubsetVar{1}] -= 0.5;
    CHECK_FALSE(violated_rows(problem, h, 1e-9).empty());
}

TEST_CASE("bound report JSON shape") {
    const AccessStructure g4 = make_gamma(4);
    const Json j = bound_report_to_json(g4, kappa(g4), true);
    CHECK(j["structure"] == "gamma_4");
    CHECK(j["kappa"] == "5/3");
    CHECK(j["rate_upper_bound"] == "3/5");
    CHECK(j["certificate_verified"] == true);

    const Certificate cert = lemma_certificate(LemmaKind::Down, 3);
    const Json cj = certificate_to_json(cert, true);
    CHECK(cj["structure"] == "gamma_3");
    CHECK(cj["items"].size() == cert.items.size());
    CHECK(cj["verified"] == true);
}
