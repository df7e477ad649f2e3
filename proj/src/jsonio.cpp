#include "kpn/jsonio.hpp"

#include <algorithm>

namespace kpn {

Json access_to_json(const AccessStructure& structure) {
    Json j;
    Json participants = Json::array();
    for (const Participant& p : structure.participants()) participants.push_back(p.name());
    Json minimal = Json::array();
    for (SubsetMask m : structure.minimal_qualified()) {
        minimal.push_back(subset_names(structure, m));
    }
    j["participants"] = std::move(participants);
    j["minimal_qualified"] = std::move(minimal);
    return j;
}

AccessStructure access_from_json(const Json& j) {
    std::vector<Participant> participants;
    for (const auto& name : j.at("participants")) {
        participants.push_back(Participant::named(name.get<std::string>()));
    }
    auto index_of = [&](const std::string& name) {
        for (std::size_t i = 0; i < participants.size(); ++i) {
            if (participants[i].name() == name) return i;
        }
        throw InvalidParameter("minimal set names unknown participant '" + name + "'");
    };
    std::vector<SubsetMask> minimal;
    for (const auto& entry : j.at("minimal_qualified")) {
        SubsetMask mask = 0;
        for (const auto& name : entry) {
            mask |= SubsetMask{1} << index_of(name.get<std::string>());
        }
        minimal.push_back(mask);
    }
    return AccessStructure(std::move(participants), std::move(minimal));
}

Json bundle_to_json(const ShareBundle& bundle, const std::optional<DealTranscript>& transcript) {
    Json j;
    j["scheme"] = to_string(bundle.spec.kind);
    j["n"] = bundle.spec.n;
    j["q"] = bundle.spec.q.value;
    j["secret_len"] = bundle.spec.secret_length();
    Json shares = Json::object();
    const AccessStructure structure = bundle.spec.structure();
    for (std::size_t i = 0; i < bundle.shares.size(); ++i) {
        if (bundle.shares[i].empty()) continue;
        shares[structure.participants()[i].name()] = bundle.shares[i];
    }
    j["shares"] = std::move(shares);
    if (transcript) j["transcript"] = *transcript;
    return j;
}

ShareBundle bundle_from_json(const Json& j) {
    const SchemeSpec spec(scheme_kind_from_string(j.at("scheme").get<std::string>()),
                          j.at("n").get<unsigned>(), Prime(j.at("q").get<std::uint64_t>()));
    if (j.contains("secret_len") && j.at("secret_len").get<std::size_t>() != spec.secret_length()) {
        throw InvalidParameter("share file secret_len does not match the scheme");
    }
    ShareBundle bundle{spec, {}};
    bundle.shares.resize(spec.participant_count());
    const AccessStructure structure = spec.structure();
    const Field field(spec.q);
    for (const auto& [name, values] : j.at("shares").items()) {
        const int idx = structure.index_of(Participant::named(name));
        if (idx < 0) throw InvalidParameter("share file names unknown participant '" + name + "'");
        std::vector<std::uint64_t> v = values.get<std::vector<std::uint64_t>>();
        if (v.size() != spec.share_width(static_cast<std::size_t>(idx))) {
            throw InvalidParameter("share vector for '" + name + "' has the wrong length");
        }
        for (std::uint64_t r : v) {
            if (!field.is_canonical(r)) {
                throw InvalidParameter("share value " + std::to_string(r) + " not canonical");
            }
        }
        bundle.shares[static_cast<std::size_t>(idx)] = std::move(v);
    }
    return bundle;
}

Json verification_report_to_json(const SchemeSpec& spec, const PerfectnessReport& perfectness,
                                 const std::vector<std::pair<Participant, bool>>& uniformity,
                                 const EntropyReport& rates) {
    Json j;
    j["scheme"] = to_string(spec.kind);
    j["n"] = spec.n;
    j["q"] = spec.q.value;
    j["perfect"] = perfectness.perfect;
    Json violations = Json::array();
    const AccessStructure structure = spec.structure();
    for (const PerfectnessViolation& v : perfectness.violations) {
        violations.push_back(Json{{"subset", subset_names(structure, v.subset)},
                                  {"assignment", v.assignment},
                                  {"detail", v.detail}});
    }
    j["violations"] = std::move(violations);
    Json uniform = Json::object();
    for (const auto& [who, flag] : uniformity) uniform[who.name()] = flag;
    j["uniform"] = std::move(uniform);
    Json rate_obj = Json::object();
    for (const ParticipantRate& r : rates.rates) {
        if (r.exact) {
            rate_obj[r.who.name()] = to_fraction(*r.exact);
        } else {
            rate_obj[r.who.name()] = r.value;
        }
    }
    j["rates"] = std::move(rate_obj);
    if (rates.min_rate_exact) {
        j["min_rate"] = to_fraction(*rates.min_rate_exact);
    } else {
        j["min_rate"] = rates.min_rate;
    }
    j["oracle"] = true;
    return j;
}

Json bound_report_to_json(const AccessStructure& structure, const Rational& kappa_value,
                          std::optional<bool> certificate_verified) {
    Json j;
    j["structure"] = structure.label();
    j["kappa"] = to_fraction(kappa_value);
    j["rate_upper_bound"] = to_fraction(Rational(1) / kappa_value);
    if (certificate_verified) j["certificate_verified"] = *certificate_verified;
    return j;
}

namespace {

std::string provenance_name(ProvenanceKind kind) {
    switch (kind) {
        case ProvenanceKind::Monotone: return "monotone";
        case ProvenanceKind::Submodular: return "submodular";
        case ProvenanceKind::PlusSubmodular: return "plus_submodular";
        case ProvenanceKind::SecretEquality: return "secret_equality";
        case ProvenanceKind::Normalization: return "normalization";
    }
    return "?";
}

Json var_names(const AccessStructure& structure, SubsetVar var) {
    Json names = Json::array();
    const SubsetVar s_bit = secret_var_bit(structure);
    for (const std::string& n : subset_names(structure, var & (s_bit - 1))) names.push_back(n);
    if (var & s_bit) names.push_back("S");
    return names;
}

} // namespace

Json certificate_to_json(const Certificate& certificate, bool verified) {
    Json j;
    j["structure"] = certificate.structure.label();
    Json items = Json::array();
    for (const CertificateItem& item : certificate.items) {
        items.push_back(Json{{"provenance", provenance_name(item.provenance.kind)},
                             {"x", var_names(certificate.structure, item.provenance.x)},
                             {"y", var_names(certificate.structure, item.provenance.y)},
                             {"multiplier", to_fraction(item.multiplier)}});
    }
    j["items"] = std::move(items);
    Json terms = Json::array();
    for (const auto& [var, c] : certificate.target.coeffs) {
        terms.push_back(Json{{"subset", var_names(certificate.structure, var)},
                             {"coeff", to_fraction(c)}});
    }
    j["target"] = Json{{"terms", std::move(terms)},
                       {"constant", to_fraction(certificate.target.constant)}};
    j["verified"] = verified;
    return j;
}

} // namespace kpn
