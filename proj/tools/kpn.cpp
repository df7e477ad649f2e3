#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "kpn/bound.hpp"
#include "kpn/entropy.hpp"
#include "kpn/jsonio.hpp"
#include "kpn/schemes.hpp"

namespace {

using namespace kpn;

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;

void emit(const Json& j, const std::string& format) {
    if (format == "plain") {
        for (const auto& [key, value] : j.items()) {
            std::cout << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump())
                      << "\n";
        }
    } else {
        std::cout << j.dump(2) << "\n";
    }
}

std::uint64_t resolve_budget(std::optional<std::uint64_t> flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("KPN_BUDGET")) {
        return std::stoull(env);
    }
    return kDefaultEnumerationBudget;
}

Prime resolve_modulus(std::optional<std::uint64_t> q, unsigned n) {
    if (q) return Prime(*q);
    return Prime::smallest_greater_than(2ULL * n - 1);
}

std::vector<std::uint64_t> parse_csv_u64(const std::string& csv) {
    std::vector<std::uint64_t> values;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw InvalidParameter("empty entry in list '" + csv + "'");
        values.push_back(std::stoull(item));
    }
    if (values.empty()) throw InvalidParameter("empty list");
    return values;
}

std::vector<Participant> parse_participants(const std::string& csv) {
    std::vector<Participant> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(Participant::named(item));
    }
    if (out.empty()) throw InvalidParameter("empty participant list");
    return out;
}

AccessStructure parse_structure(const std::string& name) {
    if (name.rfind("gamma_", 0) == 0) {
        const unsigned n = static_cast<unsigned>(std::stoul(name.substr(6)));
        return make_gamma(n);
    }
    return make_named(name);
}

int run_gamma(unsigned n, const std::string& format) {
    emit(access_to_json(make_gamma(n)), format);
    return kExitOk;
}

int run_deal(const std::string& scheme, unsigned n, std::optional<std::uint64_t> q,
             const std::string& secret_csv, std::uint64_t seed, const std::string& out_path,
             bool with_transcript, const std::string& format) {
    const SchemeSpec spec(scheme_kind_from_string(scheme), n, resolve_modulus(q, n));
    const SecretVector secret = parse_csv_u64(secret_csv);
    auto [bundle, transcript] = deal(spec, secret, seed);
    const Json j = bundle_to_json(
        bundle, with_transcript ? std::optional<DealTranscript>(transcript) : std::nullopt);
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw InvalidParameter("cannot open '" + out_path + "' for writing");
        out << j.dump(2) << "\n";
    } else {
        emit(j, format);
    }
    return kExitOk;
}

int run_reconstruct(const std::string& shares_path, const std::string& set_csv,
                    const std::string& format) {
    std::ifstream in(shares_path);
    if (!in) throw InvalidParameter("cannot open share file '" + shares_path + "'");
    Json j;
    in >> j;
    const ShareBundle bundle = bundle_from_json(j);
    const AccessStructure structure = bundle.spec.structure();
    const SubsetMask x = structure.mask_of(parse_participants(set_csv));
    const SecretVector secret = reconstruct(bundle.spec, bundle, x);
    emit(Json{{"secret", secret}}, format);
    return kExitOk;
}

int run_verify(const std::string& scheme, unsigned n, std::optional<std::uint64_t> q,
               std::optional<std::uint64_t> budget, const std::string& format) {
    const SchemeSpec spec(scheme_kind_from_string(scheme), n, resolve_modulus(q, n));
    const CountTable table = enumerate_joint(spec, resolve_budget(budget));
    const AccessStructure structure = spec.structure();
    const PerfectnessReport perfectness = check_perfect(table, structure);
    const auto uniformity = check_uniform_shares(table);
    const EntropyReport rates = entropy_report(table, {});
    emit(verification_report_to_json(spec, perfectness, uniformity, rates), format);
    return perfectness.perfect ? kExitOk : kExitVerificationFailure;
}

int run_rate(unsigned n, std::optional<std::uint64_t> q, std::optional<std::uint64_t> budget,
             const std::string& format) {
    const SchemeSpec spec(SchemeKind::Composite, n, resolve_modulus(q, n));
    const std::uint64_t allowed = resolve_budget(budget);
    Json j;
    try {
        const CountTable table = enumerate_joint(spec, allowed);
        const EntropyReport report = entropy_report(table, {});
        j["min_rate"] = report.min_rate_exact ? Json(to_fraction(*report.min_rate_exact))
                                              : Json(report.min_rate);
        j["oracle"] = true;
    } catch (const EnumerationTooLarge&) {
        j["min_rate"] = to_fraction(nominal_rate(spec));
        j["oracle"] = false;
    }
    emit(j, format);
    return kExitOk;
}

int run_bound(const std::string& structure_name, const std::string& format) {
    const AccessStructure structure = parse_structure(structure_name);
    const Rational k = kappa(structure);
    std::optional<bool> certificate_verified;
    if (structure_name.rfind("gamma_", 0) == 0) {
        const unsigned n = static_cast<unsigned>(std::stoul(structure_name.substr(6)));
        certificate_verified = verify_certificate(lemma_certificate(LemmaKind::Combined, n));
    }
    emit(bound_report_to_json(structure, k, certificate_verified), format);
    if (certificate_verified && !*certificate_verified) return kExitVerificationFailure;
    return kExitOk;
}

int run_certify(const std::string& lemma, unsigned n, const std::string& format) {
    const Certificate cert = lemma_certificate(lemma_kind_from_string(lemma), n);
    const bool verified = verify_certificate(cert);
    emit(certificate_to_json(cert, verified), format);
    return verified ? kExitOk : kExitVerificationFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"king-and-n-pawns secret sharing: dealers, oracle verification, and bounds"};
    app.require_subcommand(1);
    app.fallthrough(); // let subcommands reach the global --format flag
    std::string format = "json";
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "plain"}));

    unsigned gamma_n = 0;
    auto* gamma_cmd = app.add_subcommand("gamma", "print the king and n pawns structure");
    gamma_cmd->add_option("--n", gamma_n, "number of pawns")->required();

    std::string deal_scheme;
    unsigned deal_n = 0;
    std::optional<std::uint64_t> deal_q;
    std::string deal_secret;
    std::uint64_t deal_seed = 0;
    std::string deal_out;
    bool deal_with_transcript = false;
    auto* deal_cmd = app.add_subcommand("deal", "deal shares for a secret");
    deal_cmd->add_option("--scheme", deal_scheme, "sigma1|sigma2|composite")->required();
    deal_cmd->add_option("--n", deal_n, "number of pawns")->required();
    deal_cmd->add_option("--q", deal_q, "prime modulus (default: smallest prime > 2n-1)");
    deal_cmd->add_option("--secret", deal_secret, "comma-separated secret symbols")->required();
    deal_cmd->add_option("--seed", deal_seed, "RNG seed")->required();
    deal_cmd->add_option("--out", deal_out, "write the share file here instead of stdout");
    deal_cmd->add_flag("--with-transcript", deal_with_transcript,
                       "include the dealer randomness for replay");

    std::string rec_shares;
    std::string rec_set;
    auto* rec_cmd = app.add_subcommand("reconstruct", "reconstruct a secret from shares");
    rec_cmd->add_option("--shares", rec_shares, "share file")->required();
    rec_cmd->add_option("--set", rec_set, "comma-separated participants, e.g. k,p2")->required();

    std::string verify_scheme;
    unsigned verify_n = 0;
    std::optional<std::uint64_t> verify_q;
    std::optional<std::uint64_t> verify_budget;
    auto* verify_cmd =
        app.add_subcommand("verify", "exhaustively check perfectness and share uniformity");
    verify_cmd->add_option("--scheme", verify_scheme, "sigma1|sigma2|composite")->required();
    verify_cmd->add_option("--n", verify_n, "number of pawns")->required();
    verify_cmd->add_option("--q", verify_q, "prime modulus");
    verify_cmd->add_option("--budget", verify_budget, "enumeration budget");

    unsigned rate_n = 0;
    std::optional<std::uint64_t> rate_q;
    std::optional<std::uint64_t> rate_budget;
    auto* rate_cmd = app.add_subcommand("rate", "information rate of the composite scheme");
    rate_cmd->add_option("--n", rate_n, "number of pawns")->required();
    rate_cmd->add_option("--q", rate_q, "prime modulus");
    rate_cmd->add_option("--budget", rate_budget, "enumeration budget");

    std::string bound_structure;
    auto* bound_cmd = app.add_subcommand("bound", "exact LP upper bound on the rate");
    bound_cmd->add_option("--structure", bound_structure, "gamma_N|path4|fan|triangle-d")
        ->required();

    std::string certify_lemma;
    unsigned certify_n = 0;
    auto* certify_cmd = app.add_subcommand("certify", "verify a lemma certificate");
    certify_cmd->add_option("--lemma", certify_lemma, "down|up|combined")->required();
    certify_cmd->add_option("--n", certify_n, "number of pawns")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gamma_cmd->parsed()) return run_gamma(gamma_n, format);
        if (deal_cmd->parsed()) {
            return run_deal(deal_scheme, deal_n, deal_q, deal_secret, deal_seed, deal_out,
                            deal_with_transcript, format);
        }
        if (rec_cmd->parsed()) return run_reconstruct(rec_shares, rec_set, format);
        if (verify_cmd->parsed()) {
            return run_verify(verify_scheme, verify_n, verify_q, verify_budget, format);
        }
        if (rate_cmd->parsed()) return run_rate(rate_n, rate_q, rate_budget, format);
        if (bound_cmd->parsed()) return run_bound(bound_structure, format);
        if (certify_cmd->parsed()) return run_certify(certify_lemma, certify_n, format);
    } catch (const NotQualified& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerificationFailure;
    } catch (const EnumerationTooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerificationFailure;
    } catch (const ProblemTooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerificationFailure;
    } catch (const InvalidParameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
