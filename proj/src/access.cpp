#include "kpn/access.hpp"

#include <algorithm>
#include <bit>
#include <cctype>

namespace kpn {

namespace {

// Lexicographic order on the ascending index sequences of two masks, so
// {k,p1} < {k,p2} < ... < {p1,...,pn}.
bool mask_lex_less(SubsetMask a, SubsetMask b) {
    while (a != 0 && b != 0) {
        int ia = std::countr_zero(a);
        int ib = std::countr_zero(b);
        if (ia != ib) return ia < ib;
        a &= a - 1;
        b &= b - 1;
    }
    return a == 0 && b != 0;
}

} // namespace

Participant Participant::pawn(unsigned index) {
    if (index == 0) throw InvalidParameter("pawn indices start at 1");
    return Participant("p" + std::to_string(index));
}

Participant Participant::named(std::string name) {
    if (name.empty()) throw InvalidParameter("participant name must be nonempty");
    for (char c : name) {
        if (!std::islower(static_cast<unsigned char>(c)) && !std::isdigit(static_cast<unsigned char>(c))) {
            throw InvalidParameter("participant name '" + name + "' must be lowercase alphanumeric");
        }
    }
    return Participant(std::move(name));
}

AccessStructure::AccessStructure(std::vector<Participant> participants,
                                 std::vector<SubsetMask> minimal_qualified,
                                 std::string label)
    : participants_(std::move(participants)),
      minimal_qualified_(std::move(minimal_qualified)),
      label_(std::move(label)) {
    if (participants_.empty()) throw InvalidParameter("structure needs participants");
    if (participants_.size() > 20) throw InvalidParameter("too many participants");
    for (std::size_t i = 0; i < participants_.size(); ++i) {
        for (std::size_t j = i + 1; j < participants_.size(); ++j) {
            if (participants_[i] == participants_[j]) {
                throw InvalidParameter("duplicate participant '" + participants_[i].name() + "'");
            }
        }
    }
    if (minimal_qualified_.empty()) throw InvalidParameter("structure needs qualified sets");
    const SubsetMask full = full_mask();
    for (SubsetMask m : minimal_qualified_) {
        if (m == 0) throw InvalidParameter("empty set cannot be qualified");
        if ((m & ~full) != 0) throw InvalidParameter("minimal set references unknown participant");
    }
    for (std::size_t i = 0; i < minimal_qualified_.size(); ++i) {
        for (std::size_t j = 0; j < minimal_qualified_.size(); ++j) {
            if (i == j) continue;
            if ((minimal_qualified_[i] & minimal_qualified_[j]) == minimal_qualified_[i]) {
                throw InvalidParameter("minimal qualified family is not an antichain");
            }
        }
    }
    SubsetMask covered = 0;
    for (SubsetMask m : minimal_qualified_) covered |= m;
    if (covered != full) {
        throw InvalidParameter("every participant must belong to some minimal qualified subset");
    }
    std::sort(minimal_qualified_.begin(), minimal_qualified_.end(), mask_lex_less);
}

bool AccessStructure::is_qualified(SubsetMask x) const {
    if ((x & ~full_mask()) != 0) throw InvalidParameter("subset references unknown participant");
    for (SubsetMask m : minimal_qualified_) {
        if ((x & m) == m) return true;
    }
    return false;
}

std::vector<SubsetMask> AccessStructure::maximal_unqualified() const {
    std::vector<SubsetMask> result;
    const SubsetMask full = full_mask();
    for (SubsetMask x = 0; x <= full; ++x) {
        if (is_qualified(x)) continue;
        bool maximal = true;
        for (std::size_t i = 0; i < participants_.size(); ++i) {
            SubsetMask bit = SubsetMask{1} << i;
            if ((x & bit) == 0 && !is_qualified(x | bit)) {
                maximal = false;
                break;
            }
        }
        if (maximal) result.push_back(x);
    }
    return result;
}

int AccessStructure::index_of(const Participant& p) const {
    for (std::size_t i = 0; i < participants_.size(); ++i) {
        if (participants_[i] == p) return static_cast<int>(i);
    }
    return -1;
}

SubsetMask AccessStructure::mask_of(std::span<const Participant> subset) const {
    SubsetMask mask = 0;
    for (const Participant& p : subset) {
        int idx = index_of(p);
        if (idx < 0) throw InvalidParameter("participant '" + p.name() + "' not in structure");
        mask |= SubsetMask{1} << idx;
    }
    return mask;
}

AccessStructure make_gamma(unsigned n) {
    if (n < 2) throw InvalidParameter("gamma_n requires n >= 2");
    if (n > 18) throw InvalidParameter("gamma_n supported up to n = 18");
    std::vector<Participant> participants;
    participants.push_back(Participant::king());
    for (unsigned i = 1; i <= n; ++i) participants.push_back(Participant::pawn(i));
    std::vector<SubsetMask> minimal;
    for (unsigned i = 1; i <= n; ++i) {
        minimal.push_back((SubsetMask{1} << 0) | (SubsetMask{1} << i));
    }
    SubsetMask all_pawns = 0;
    for (unsigned i = 1; i <= n; ++i) all_pawns |= SubsetMask{1} << i;
    minimal.push_back(all_pawns);
    return AccessStructure(std::move(participants), std::move(minimal),
                           "gamma_" + std::to_string(n));
}

AccessStructure make_named(std::string_view name) {
    std::vector<Participant> abcd = {Participant::named("a"), Participant::named("b"),
                                     Participant::named("c"), Participant::named("d")};
    auto m = [](std::initializer_list<int> idx) {
        SubsetMask mask = 0;
        for (int i : idx) mask |= SubsetMask{1} << i;
        return mask;
    };
    if (name == "path4") {
        return AccessStructure(abcd, {m({0, 1}), m({1, 2}), m({2, 3})}, "path4");
    }
    if (name == "fan") {
        return AccessStructure(abcd, {m({0, 1}), m({0, 2}), m({0, 3}), m({1, 2})}, "fan");
    }
    if (name == "triangle-d") {
        return AccessStructure(abcd, {m({0, 1}), m({0, 2}), m({1, 2, 3})}, "triangle-d");
    }
    throw InvalidParameter("unknown structure '" + std::string(name) + "'");
}

std::vector<std::string> subset_names(const AccessStructure& a, SubsetMask mask) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < a.participant_count(); ++i) {
        if (mask & (SubsetMask{1} << i)) names.push_back(a.participants()[i].name());
    }
    return names;
}

} // namespace kpn
