#include "kpn/schemes.hpp"

#include <algorithm>
#include <bit>

namespace kpn {

std::string to_string(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::Sigma1: return "sigma1";
        case SchemeKind::Sigma2: return "sigma2";
        case SchemeKind::Composite: return "composite";
    }
    throw InvalidParameter("unknown scheme kind");
}

SchemeKind scheme_kind_from_string(std::string_view name) {
    if (name == "sigma1") return SchemeKind::Sigma1;
    if (name == "sigma2") return SchemeKind::Sigma2;
    if (name == "composite") return SchemeKind::Composite;
    throw InvalidParameter("unknown scheme '" + std::string(name) + "'");
}

SchemeSpec::SchemeSpec(SchemeKind kind, unsigned n, Prime q) : kind(kind), n(n), q(q) {
    if (n < 2) throw InvalidParameter("schemes require n >= 2");
    if (kind != SchemeKind::Sigma2 && q.value <= 2ULL * n - 1) {
        // Sigma1 evaluates f at 0..2n-1; those points must stay distinct mod q.
        throw InvalidParameter("modulus must exceed 2n-1 = " + std::to_string(2 * n - 1));
    }
}

SchemeSpec SchemeSpec::with_default_modulus(SchemeKind kind, unsigned n) {
    if (n < 2) throw InvalidParameter("schemes require n >= 2");
    return SchemeSpec(kind, n, Prime::smallest_greater_than(2ULL * n - 1));
}

std::size_t SchemeSpec::secret_length() const {
    return kind == SchemeKind::Composite ? n - 1 : 1;
}

std::size_t SchemeSpec::transcript_length() const {
    switch (kind) {
        case SchemeKind::Sigma1: return n - 1;
        case SchemeKind::Sigma2: return n;
        case SchemeKind::Composite: return (n - 1) + static_cast<std::size_t>(n - 2) * n;
    }
    throw InvalidParameter("unknown scheme kind");
}

std::size_t SchemeSpec::share_width(std::size_t index) const {
    if (index > n) throw InvalidParameter("participant index out of range");
    switch (kind) {
        case SchemeKind::Sigma1: return index == 0 ? n - 1 : 1;
        case SchemeKind::Sigma2: return index == 0 ? 1 : 2;
        case SchemeKind::Composite: return 2 * static_cast<std::size_t>(n) - 3;
    }
    throw InvalidParameter("unknown scheme kind");
}

namespace detail {

namespace {

void deal_sigma1(const SchemeSpec& spec, std::uint64_t secret,
                 std::span<const std::uint64_t> transcript, std::size_t share_offset,
                 std::vector<std::vector<std::uint64_t>>& out) {
    const Field f(spec.q);
    const unsigned n = spec.n;
    // f(x) = s + t_1 x + ... + t_{n-1} x^{n-1}, evaluated by Horner.
    auto eval = [&](std::uint64_t x) {
        std::uint64_t acc = 0;
        for (std::size_t i = transcript.size(); i-- > 0;) {
            acc = f.add(f.mul(acc, x), transcript[i]);
        }
        return f.add(f.mul(acc, x), secret);
    };
    for (unsigned x = 1; x <= n - 1; ++x) {
        out[0][share_offset + x - 1] = eval(x);
    }
    for (unsigned i = 1; i <= n; ++i) {
        out[i][share_offset] = eval(n - 1 + i);
    }
}

void deal_sigma2(const SchemeSpec& spec, std::uint64_t secret,
                 std::span<const std::uint64_t> transcript, std::size_t king_offset,
                 std::size_t pawn_offset, std::vector<std::vector<std::uint64_t>>& out) {
    const Field f(spec.q);
    const unsigned n = spec.n;
    const std::uint64_t r = transcript[0];
    const std::uint64_t masked = f.add(r, secret);
    out[0][king_offset] = r;
    std::uint64_t running = secret;
    for (unsigned i = 1; i <= n - 1; ++i) {
        out[i][pawn_offset] = masked;
        out[i][pawn_offset + 1] = transcript[i];
        running = f.add(running, transcript[i]);
    }
    out[n][pawn_offset] = masked;
    out[n][pawn_offset + 1] = running; // s + r_1 + ... + r_{n-1}
}

} // namespace

void deal_into(const SchemeSpec& spec, const SecretVector& secret,
               const DealTranscript& transcript, std::vector<std::vector<std::uint64_t>>& out) {
    switch (spec.kind) {
        case SchemeKind::Sigma1:
            deal_sigma1(spec, secret[0], transcript, 0, out);
            return;
        case SchemeKind::Sigma2:
            deal_sigma2(spec, secret[0], transcript, 0, 0, out);
            return;
        case SchemeKind::Composite: {
            const unsigned n = spec.n;
            std::span<const std::uint64_t> t(transcript);
            deal_sigma1(spec, secret[0], t.subspan(0, n - 1), 0, out);
            // Sigma2 copy j shares secret symbol j+1; every copy appends one
            // residue to the king's share and two to each pawn's.
            for (unsigned j = 1; j + 1 <= n - 1; ++j) {
                std::size_t king_off = (n - 1) + (j - 1);
                std::size_t pawn_off = 1 + 2 * static_cast<std::size_t>(j - 1);
                deal_sigma2(spec, secret[j], t.subspan((n - 1) + static_cast<std::size_t>(j - 1) * n, n),
                            king_off, pawn_off, out);
            }
            return;
        }
    }
    throw InvalidParameter("unknown scheme kind");
}

} // namespace detail

ShareBundle deal_with_randomness(const SchemeSpec& spec, const SecretVector& secret,
                                 const DealTranscript& transcript) {
    if (secret.size() != spec.secret_length()) {
        throw InvalidParameter("secret length " + std::to_string(secret.size()) +
                               " does not match scheme (want " +
                               std::to_string(spec.secret_length()) + ")");
    }
    if (transcript.size() != spec.transcript_length()) {
        throw InvalidParameter("transcript length " + std::to_string(transcript.size()) +
                               " does not match scheme (want " +
                               std::to_string(spec.transcript_length()) + ")");
    }
    const Field f(spec.q);
    for (std::uint64_t v : secret) {
        if (!f.is_canonical(v)) throw InvalidParameter("secret symbol not canonical");
    }
    for (std::uint64_t v : transcript) {
        if (!f.is_canonical(v)) throw InvalidParameter("transcript entry not canonical");
    }
    ShareBundle bundle{spec, {}};
    bundle.shares.resize(spec.participant_count());
    for (std::size_t i = 0; i < bundle.shares.size(); ++i) {
        bundle.shares[i].resize(spec.share_width(i));
    }
    detail::deal_into(spec, secret, transcript, bundle.shares);
    return bundle;
}

std::pair<ShareBundle, DealTranscript> deal(const SchemeSpec& spec, const SecretVector& secret,
                                            std::uint64_t seed) {
    Rng rng(seed);
    DealTranscript transcript(spec.transcript_length());
    for (std::uint64_t& entry : transcript) {
        entry = sample_uniform(rng, spec.q);
    }
    return {deal_with_randomness(spec, secret, transcript), std::move(transcript)};
}

namespace {

// Lexicographically first minimal qualified subset contained in X.
SubsetMask chosen_minimal(const AccessStructure& structure, SubsetMask x) {
    for (SubsetMask m : structure.minimal_qualified()) {
        if ((x & m) == m) return m;
    }
    throw NotQualified("subset is not qualified; reconstruction refused");
}

std::uint64_t reconstruct_sigma1(const SchemeSpec& spec, const ShareBundle& bundle,
                                 SubsetMask minimal, std::size_t share_offset) {
    const unsigned n = spec.n;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> points;
    if (minimal & 1u) {
        // {k, p_i}: the king's n-1 points plus the pawn's one.
        unsigned pawn = static_cast<unsigned>(std::countr_zero(minimal & ~SubsetMask{1}));
        for (unsigned x = 1; x <= n - 1; ++x) {
            points.emplace_back(x, bundle.shares[0][share_offset + x - 1]);
        }
        points.emplace_back(n - 1 + pawn, bundle.shares[pawn][share_offset]);
    } else {
        for (unsigned i = 1; i <= n; ++i) {
            points.emplace_back(n - 1 + i, bundle.shares[i][share_offset]);
        }
    }
    return interpolate_at_zero(points, spec.q);
}

std::uint64_t reconstruct_sigma2(const SchemeSpec& spec, const ShareBundle& bundle,
                                 SubsetMask minimal, std::size_t king_offset,
                                 std::size_t pawn_offset) {
    const Field f(spec.q);
    const unsigned n = spec.n;
    if (minimal & 1u) {
        unsigned pawn = static_cast<unsigned>(std::countr_zero(minimal & ~SubsetMask{1}));
        return f.sub(bundle.shares[pawn][pawn_offset], bundle.shares[0][king_offset]);
    }
    std::uint64_t acc = bundle.shares[n][pawn_offset + 1];
    for (unsigned i = 1; i <= n - 1; ++i) {
        acc = f.sub(acc, bundle.shares[i][pawn_offset + 1]);
    }
    return acc;
}

} // namespace

SecretVector reconstruct(const SchemeSpec& spec, const ShareBundle& bundle, SubsetMask x) {
    if (!(bundle.spec == spec)) throw InvalidParameter("bundle was dealt under another spec");
    const AccessStructure structure = spec.structure();
    if ((x & ~structure.full_mask()) != 0) {
        throw InvalidParameter("subset references unknown participant");
    }
    const SubsetMask minimal = chosen_minimal(structure, x);
    for (std::size_t i = 0; i <= spec.n; ++i) {
        if ((minimal & (SubsetMask{1} << i)) && bundle.shares[i].size() != spec.share_width(i)) {
            throw InvalidParameter("missing or malformed shares for participant '" +
                                   structure.participants()[i].name() + "'");
        }
    }
    switch (spec.kind) {
        case SchemeKind::Sigma1:
            return {reconstruct_sigma1(spec, bundle, minimal, 0)};
        case SchemeKind::Sigma2:
            return {reconstruct_sigma2(spec, bundle, minimal, 0, 0)};
        case SchemeKind::Composite: {
            const unsigned n = spec.n;
            SecretVector secret(spec.secret_length());
            secret[0] = reconstruct_sigma1(spec, bundle, minimal, 0);
            for (unsigned j = 1; j + 1 <= n - 1; ++j) {
                std::size_t king_off = (n - 1) + (j - 1);
                std::size_t pawn_off = 1 + 2 * static_cast<std::size_t>(j - 1);
                secret[j] = reconstruct_sigma2(spec, bundle, minimal, king_off, pawn_off);
            }
            return secret;
        }
    }
    throw InvalidParameter("unknown scheme kind");
}

std::vector<std::pair<Participant, BigInt>> share_domains(const SchemeSpec& spec) {
    const AccessStructure structure = spec.structure();
    std::vector<std::pair<Participant, BigInt>> domains;
    for (std::size_t i = 0; i < spec.participant_count(); ++i) {
        BigInt size = 1;
        for (std::size_t m = 0; m < spec.share_width(i); ++m) size *= spec.q.value;
        domains.emplace_back(structure.participants()[i], size);
    }
    return domains;
}

Rational nominal_rate(const SchemeSpec& spec) {
    std::size_t widest = 0;
    for (std::size_t i = 0; i < spec.participant_count(); ++i) {
        widest = std::max(widest, spec.share_width(i));
    }
    return Rational(spec.secret_length(), widest);
}

} // namespace kpn
