#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kpn/errors.hpp"

namespace kpn {

/// A participant label. The king-and-pawns structures use "k", "p1", ...,
/// "pn"; the three small minor-minimal structures use "a".."d".
class Participant {
public:
    static Participant king() { return Participant("k"); }
    static Participant pawn(unsigned index);
    static Participant named(std::string name);

    const std::string& name() const { return name_; }

    friend bool operator==(const Participant& a, const Participant& b) {
        return a.name_ == b.name_;
    }
    friend bool operator!=(const Participant& a, const Participant& b) { return !(a == b); }

private:
    explicit Participant(std::string name) : name_(std::move(name)) {}
    std::string name_;
};

/// Subset of participants as a bitmask; bit i refers to participants()[i].
using SubsetMask = std::uint32_t;

/// A monotone access structure given by its antichain of minimal qualified
/// subsets. Immutable after construction; safe for concurrent reads.
class AccessStructure {
public:
    /// Validates that minimal_qualified is a nonempty antichain of nonempty
    /// subsets and that every participant is covered by some minimal set.
    AccessStructure(std::vector<Participant> participants,
                    std::vector<SubsetMask> minimal_qualified,
                    std::string label = "");

    std::size_t participant_count() const { return participants_.size(); }
    const std::vector<Participant>& participants() const { return participants_; }

    /// Minimal qualified subsets in canonical order (lexicographic by the
    /// sorted participant-index sequence).
    const std::vector<SubsetMask>& minimal_qualified() const { return minimal_qualified_; }

    /// True iff X contains some minimal qualified subset. Bits outside the
    /// participant range raise InvalidParameter.
    bool is_qualified(SubsetMask x) const;

    /// All unqualified subsets whose every one-element extension is
    /// qualified. Brute force over the 2^|P| subsets.
    std::vector<SubsetMask> maximal_unqualified() const;

    SubsetMask full_mask() const {
        return static_cast<SubsetMask>((1u << participants_.size()) - 1u);
    }

    /// Index of a participant in structure order, or -1 if absent.
    int index_of(const Participant& p) const;

    /// Bitmask for a participant list; InvalidParameter on foreign names.
    SubsetMask mask_of(std::span<const Participant> subset) const;

    /// Human-readable identifier used in reports ("gamma_3", "path4", ...).
    const std::string& label() const { return label_; }

private:
    std::vector<Participant> participants_;
    std::vector<SubsetMask> minimal_qualified_;
    std::string label_;
};

/// The king and n pawns structure: minimal sets {k,p_i} for every pawn plus
/// the set of all pawns. Defined for n >= 2.
AccessStructure make_gamma(unsigned n);

/// One of the three other minor-minimal non-matroid-related structures on
/// {a,b,c,d}: "path4", "fan", or "triangle-d".
AccessStructure make_named(std::string_view name);

/// Names of the members of `mask` in structure order, e.g. {"k","p2"}.
std::vector<std::string> subset_names(const AccessStructure& a, SubsetMask mask);

} // namespace kpn
