#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kpn/access.hpp"
#include "kpn/rational.hpp"
#include "kpn/simplex.hpp"

namespace kpn {

/// Variables of the bound LP are subsets of P u {S}, encoded as masks with
/// bit i for participants()[i] and the highest used bit for S.
using SubsetVar = SubsetMask;

inline SubsetVar secret_var_bit(const AccessStructure& a) {
    return SubsetVar{1} << a.participant_count();
}

enum class ProvenanceKind { Monotone, Submodular, PlusSubmodular, SecretEquality, Normalization };

/// Which axiom or equality schema an inequality instantiates, and at which
/// subsets. Certificates are stored this way and expanded on demand.
struct Provenance {
    ProvenanceKind kind;
    SubsetVar x = 0;
    SubsetVar y = 0;
};

/// Sparse inequality coeffs . h >= constant (or == for the LP's equality
/// rows) over the normalized entropy variables.
struct LinearInequality {
    std::vector<std::pair<SubsetVar, Rational>> coeffs; // sorted by mask, no zeros
    Rational constant;
    Relation relation = Relation::GreaterEqual;
    std::optional<Provenance> provenance;
};

/// The Shannon-axiom LP for kappa: variables h(X) for every X in P u {S},
/// the perfectness equalities, elemental monotonicity and submodularity,
/// and the objective "minimize t subject to t >= h({p}) for every p".
struct LpProblem {
    AccessStructure structure;
    std::vector<LinearInequality> rows;
    std::vector<unsigned> objective_participants; // indices into participants()
    unsigned ground_size = 0;                     // |P| + 1

    std::size_t subset_variable_count() const { return std::size_t{1} << ground_size; }
};

/// Builds the LP; ProblemTooLarge when |P u {S}| exceeds the cap.
LpProblem build_lp(const AccessStructure& structure, std::size_t size_cap = 8);

struct LpSolution {
    Rational value;                     // optimum of t, i.e. kappa
    std::map<SubsetVar, Rational> point; // h(X) for every subset variable
};

/// Exact optimum via simplex over rationals (least-index anti-cycling). The
/// returned point is re-verified against every LP row before returning.
LpSolution solve_lp(const LpProblem& problem);

Rational kappa(const AccessStructure& structure, std::size_t size_cap = 8);

/// 1/kappa: a valid upper bound on the information rate of the structure.
Rational rate_upper_bound(const AccessStructure& structure, std::size_t size_cap = 8);

/// The LP restated over the free variables that remain after substituting
/// the equality rows (h(empty)=0, h(S)=1, h(X u S)=h(X)+[X not in Gamma]):
/// one variable per nonempty X in P, plus t when objective links are kept.
/// Used by solve_lp and directly by tests that optimize other objectives
/// over the same polytope.
struct ReducedLp {
    RationalProgram program;            // objective all zero unless has_t
    std::vector<SubsetMask> var_masks;  // var i <-> h(var_masks[i]); masks over P
    bool has_t = false;                 // when true the last variable is t
};
ReducedLp reduce_lp(const LpProblem& problem, bool with_objective_links);

/// Indices of LP rows a floating h-assignment violates beyond `tol`
/// (equalities two-sided). Used to confirm oracle entropy vectors lie in
/// the axiom polytope.
std::vector<std::size_t> violated_rows(const LpProblem& problem,
                                       const std::map<SubsetVar, double>& h, double tol);

/// Expansion of an axiom instance to a sparse inequality. Certificates use
/// the paper's convention that h(empty) is written as the constant 0, so
/// the empty-set term is dropped there; LP rows keep it as a variable.
LinearInequality expand_provenance(const Provenance& p, const AccessStructure& structure,
                                   bool keep_empty_term);

/// Checks the side conditions of an axiom instance (Monotone needs X in Y,
/// PlusSubmodular needs X,Y qualified with unqualified intersection, ...).
bool provenance_valid(const Provenance& p, const AccessStructure& structure);

struct CertificateItem {
    Provenance provenance;
    Rational multiplier; // must be nonnegative
};

/// A nonnegative combination of axiom instances that yields a target
/// inequality: summed coefficient vectors must equal the target's exactly
/// and the summed constants must dominate the target constant.
struct Certificate {
    AccessStructure structure;
    std::vector<CertificateItem> items;
    LinearInequality target;
};

enum class LemmaKind { Down, Up, Combined };

std::string to_string(LemmaKind kind);
LemmaKind lemma_kind_from_string(std::string_view name);

/// The axiom-instance multisets from the paper's proofs for gamma_n:
///   Down:     h(k p_1..p_{n-1}) - h(p_1) >= n-1
///   Up:       h(k p_1) + sum_{i=2}^{n-1} h(p_i) - h(k p_1..p_{n-1}) >= n-2
///   Combined: h(k) + sum_{i=2}^{n-1} h(p_i) >= 2n-3
/// All multipliers are 1. Requires n >= 2 (n = 2 gives empty summations).
Certificate lemma_certificate(LemmaKind kind, unsigned n);

/// True iff every item is a valid nonnegatively-weighted axiom instance and
/// the weighted sum proves the target. False is the verdict for any defect.
bool verify_certificate(const Certificate& certificate);

/// For a verified certificate whose target is sum_{p in Q} h(p) >= c, the
/// implied lower bound c/|Q| on kappa. nullopt when the target has another
/// shape or the certificate does not verify.
std::optional<Rational> certificate_min_share_bound(const Certificate& certificate);

} // namespace kpn
