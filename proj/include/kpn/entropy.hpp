#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "kpn/access.hpp"
#include "kpn/rational.hpp"
#include "kpn/schemes.hpp"

namespace kpn {

inline constexpr std::uint64_t kDefaultEnumerationBudget = 100'000'000;

/// Digit layout of one joint outcome (secret value, all share vectors),
/// encoded little-endian in base q: secret symbols first, then each
/// participant's share symbols in structure order.
struct OutcomeLayout {
    OutcomeLayout(Prime q, unsigned secret_symbols, std::vector<Participant> participants,
                  std::vector<unsigned> share_widths);

    static OutcomeLayout for_scheme(const SchemeSpec& spec);

    unsigned total_digits() const { return offsets_.back(); }
    unsigned digit_offset(std::size_t slot) const { return offsets_[slot]; }
    unsigned slot_width(std::size_t slot) const { return offsets_[slot + 1] - offsets_[slot]; }

    /// Subset masks use bit i for participants()[i] and this bit for the
    /// secret random variable S.
    SubsetMask secret_bit() const { return SubsetMask{1} << participants.size(); }
    SubsetMask full_ground_mask() const { return (secret_bit() << 1) - 1; }

    /// Digit positions (ascending) covered by a subset of P and S.
    std::vector<unsigned> digits_of(SubsetMask mask) const;

    std::uint64_t pow_q(unsigned e) const { return powers_[e]; }

    std::uint64_t q;
    unsigned secret_symbols;
    std::vector<Participant> participants;
    std::vector<unsigned> share_widths;

private:
    std::vector<unsigned> offsets_; // slot 0 = secret, slot i = participant i-1
    std::vector<std::uint64_t> powers_;
};

/// Exhaustive joint-outcome counts, stored as (key, count) pairs sorted by
/// key with no duplicates. Every enumerated (secret, transcript) pair
/// contributes exactly one outcome, so the distribution over keys is
/// uniform over those pairs.
struct CountTable {
    OutcomeLayout layout;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> counts;
    std::uint64_t total = 0;

    std::uint64_t secret_domain() const;

    /// Re-encoded marginal counts over the digits of `mask`.
    std::unordered_map<std::uint64_t, std::uint64_t> marginal(SubsetMask mask) const;

    /// Appends an outcome; call normalize() before reading the table.
    void add(std::uint64_t key, std::uint64_t count);

    /// Sorts and merges duplicate keys into the canonical representation.
    void normalize();
};

/// Iterates every (secret, transcript) pair of the scheme and counts the
/// dealt outcomes. Throws EnumerationTooLarge when the pair count exceeds
/// the budget. Parallelized with OpenMP when available; partial per-thread
/// tables are merged by summation.
CountTable enumerate_joint(const SchemeSpec& spec,
                           std::uint64_t budget = kDefaultEnumerationBudget);

/// Single-threaded reference enumeration; kept independent of the parallel
/// kernel so the two can be checked against each other.
CountTable enumerate_joint_serial(const SchemeSpec& spec,
                                  std::uint64_t budget = kDefaultEnumerationBudget);

struct PerfectnessViolation {
    SubsetMask subset;
    std::uint64_t assignment; // projected key over the subset's digits
    std::string detail;
};

/// Outcome of the exact counting check of the two perfectness conditions:
/// qualified sets determine the secret, unqualified sets see secret-
/// independent counts. Only minimal qualified and maximal unqualified sets
/// are tested; monotonicity extends the verdict to all subsets.
struct PerfectnessReport {
    bool perfect = false;
    std::vector<PerfectnessViolation> violations;
};

PerfectnessReport check_perfect(const CountTable& table, const AccessStructure& structure);

/// True per participant iff every possible share vector occurs equally
/// often (integer comparison over the full q^width domain).
std::vector<std::pair<Participant, bool>> check_uniform_shares(const CountTable& table);

struct ParticipantRate {
    Participant who;
    double value;
    std::optional<Rational> exact; // present when the share marginal is uniform
};

struct EntropyReport {
    std::map<SubsetMask, double> entropy_bits; // H, binary log
    std::map<SubsetMask, double> normalized;   // h = H(X)/H(S)
    std::vector<ParticipantRate> rates;        // rho(x) = H(S)/H(x)
    double min_rate = 0.0;
    std::optional<Rational> min_rate_exact;
};

/// Entropies for the requested subsets plus per-participant information
/// rates. Rates gain an exact rational value (secret symbols / share
/// symbols) whenever check_uniform_shares holds for the participant.
EntropyReport entropy_report(const CountTable& table, std::span<const SubsetMask> subsets);

/// Marginal Shannon entropy of one subset, in bits.
double subset_entropy(const CountTable& table, SubsetMask mask);

} // namespace kpn
