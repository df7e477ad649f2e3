#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kpn/access.hpp"
#include "kpn/field.hpp"
#include "kpn/rational.hpp"

namespace kpn {

enum class SchemeKind { Sigma1, Sigma2, Composite };

std::string to_string(SchemeKind kind);
SchemeKind scheme_kind_from_string(std::string_view name);

/// Description of a dealer for the king and n pawns structure.
///
/// Sigma1 shares one secret symbol through a polynomial of degree at most
/// n-1 with f(0) = s: the king holds f(1..n-1), pawn i holds f(n-1+i).
/// Sigma2 shares one symbol through a (2,2) piece (king r, every pawn r+s)
/// glued to an (n,n) piece (pawns 1..n-1 hold r_i, pawn n holds s + sum r_i).
/// Composite shares n-1 symbols: symbol 1 through Sigma1 and each further
/// symbol through its own Sigma2 copy, shares concatenated in that order.
struct SchemeSpec {
    SchemeSpec(SchemeKind kind, unsigned n, Prime q);

    /// Uses the smallest prime greater than 2n-1 as the modulus.
    static SchemeSpec with_default_modulus(SchemeKind kind, unsigned n);

    std::size_t secret_length() const;

    /// Number of uniform residues a deal consumes: n-1 for Sigma1 (the free
    /// polynomial coefficients), n for Sigma2 (r, r_1..r_{n-1}), and
    /// (n-1) + (n-2)*n for Composite.
    std::size_t transcript_length() const;

    /// Residues held by participant `index` (0 = king, i = pawn i).
    std::size_t share_width(std::size_t index) const;

    std::size_t participant_count() const { return n + 1; }

    AccessStructure structure() const { return make_gamma(n); }

    SchemeKind kind;
    unsigned n;
    Prime q;

    friend bool operator==(const SchemeSpec& a, const SchemeSpec& b) {
        return a.kind == b.kind && a.n == b.n && a.q == b.q;
    }
};

using SecretVector = std::vector<std::uint64_t>;
using DealTranscript = std::vector<std::uint64_t>;

/// Shares for every participant, indexed like the structure's participant
/// list (0 = king). A bundle restricted to a subset keeps other participants'
/// vectors empty.
struct ShareBundle {
    SchemeSpec spec;
    std::vector<std::vector<std::uint64_t>> shares;

    friend bool operator==(const ShareBundle& a, const ShareBundle& b) {
        return a.spec == b.spec && a.shares == b.shares;
    }
};

/// Deterministic dealer: a pure function of (secret, transcript).
ShareBundle deal_with_randomness(const SchemeSpec& spec, const SecretVector& secret,
                                 const DealTranscript& transcript);

/// Draws the transcript from a seeded generator, then deals. Deterministic
/// given (spec, secret, seed).
std::pair<ShareBundle, DealTranscript> deal(const SchemeSpec& spec, const SecretVector& secret,
                                            std::uint64_t seed);

/// Reconstructs the secret from the shares of subset X. X must be qualified
/// in gamma_n (NotQualified otherwise); a strictly larger qualified set uses
/// its lexicographically first contained minimal qualified subset.
SecretVector reconstruct(const SchemeSpec& spec, const ShareBundle& bundle, SubsetMask x);

/// Share-domain size q^m per participant, in structure order.
std::vector<std::pair<Participant, BigInt>> share_domains(const SchemeSpec& spec);

/// (secret symbols) / (max per-participant share symbols). Valid as the true
/// information rate only once the oracle confirms share uniformity.
Rational nominal_rate(const SchemeSpec& spec);

namespace detail {

/// Allocation-free dealer core used by the enumeration loops: `out` must be
/// pre-shaped to the bundle share widths.
void deal_into(const SchemeSpec& spec, const SecretVector& secret,
               const DealTranscript& transcript, std::vector<std::vector<std::uint64_t>>& out);

} // namespace detail

} // namespace kpn
