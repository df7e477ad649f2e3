#pragma once

#include <optional>

#include <json.hpp>

#include "kpn/access.hpp"
#include "kpn/bound.hpp"
#include "kpn/entropy.hpp"
#include "kpn/schemes.hpp"

namespace kpn {

using Json = nlohmann::json;

/// {"participants":["k","p1",...],"minimal_qualified":[["k","p1"],...]}
Json access_to_json(const AccessStructure& structure);
AccessStructure access_from_json(const Json& j);

/// {"scheme":"composite","n":4,"q":11,"secret_len":3,"shares":{...}} with an
/// optional "transcript" array for test-vector replay. A restricted bundle
/// omits absent participants from "shares".
Json bundle_to_json(const ShareBundle& bundle, const std::optional<DealTranscript>& transcript);
ShareBundle bundle_from_json(const Json& j);

/// {"scheme":...,"perfect":...,"violations":[...],"uniform":{...},
///  "rates":{"k":"2/3",...},"min_rate":"2/3","oracle":true}
Json verification_report_to_json(const SchemeSpec& spec, const PerfectnessReport& perfectness,
                                 const std::vector<std::pair<Participant, bool>>& uniformity,
                                 const EntropyReport& rates);

/// {"structure":"gamma_4","kappa":"5/3","rate_upper_bound":"3/5",
///  "certificate_verified":true} (certificate field only for gamma_n).
Json bound_report_to_json(const AccessStructure& structure, const Rational& kappa_value,
                          std::optional<bool> certificate_verified);

Json certificate_to_json(const Certificate& certificate, bool verified);

} // namespace kpn
