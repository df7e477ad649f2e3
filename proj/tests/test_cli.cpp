#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef KPN_CLI_PATH
#error "KPN_CLI_PATH must point at the built kpn binary"
#endif

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
    const std::string out_path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                                 "/kpn_cli_out.txt";
    const std::string cmd =
        env + " " + std::string(KPN_CLI_PATH) + " " + args + " > " + out_path + " 2>&1";
    const int raw = std::system(cmd.c_str());
    RunResult result;
    result.exit_code = WEXITSTATUS(raw);
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    result.output = ss.str();
    return result;
}

nlohmann::json parse_output(const RunResult& r) { return nlohmann::json::parse(r.output); }

} // namespace

TEST_CASE("cli: gamma prints the structure") {
    const RunResult r = run_cli("gamma --n 3");
    REQUIRE(r.exit_code == 0);
    const auto j = parse_output(r);
    CHECK(j["participants"] == nlohmann::json::array({"k", "p1", "p2", "p3"}));
    CHECK(j["minimal_qualified"].size() == 4);
}

TEST_CASE("cli: deal then reconstruct round-trips, unqualified sets exit 1") {
    const std::string shares = "/tmp/kpn_test_shares.json";
    RunResult r = run_cli("deal --scheme composite --n 3 --q 7 --secret 3,4 --seed 11 --out " +
                          shares);
    REQUIRE(r.exit_code == 0);

    r = run_cli("reconstruct --shares " + shares + " --set k,p2");
    REQUIRE(r.exit_code == 0);
    CHECK(parse_output(r)["secret"] == nlohmann::json::array({3, 4}));

    r = run_cli("reconstruct --shares " + shares + " --set p1,p2,p3");
    REQUIRE(r.exit_code == 0);
    CHECK(parse_output(r)["secret"] == nlohmann::json::array({3, 4}));

    r = run_cli("reconstruct --shares " + shares + " --set p1,p2");
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("not qualified") != std::string::npos);

    std::remove(shares.c_str());
}

TEST_CASE("cli: every scheme round-trips through every minimal qualified set") {
    const std::string shares = "/tmp/kpn_roundtrip_shares.json";
    for (const std::string scheme : {"sigma1", "sigma2", "composite"}) {
        for (unsigned n : {2u, 3u, 4u}) {
            const std::size_t secret_len = scheme == "composite" ? n - 1 : 1;
            std::string secret;
            for (std::size_t i = 0; i < secret_len; ++i) {
                secret += (i ? "," : "") + std::to_string((i + 2) % 5);
            }
            RunResult r = run_cli("deal --scheme " + scheme + " --n " + std::to_string(n) +
                                  " --secret " + secret + " --seed 31337 --out " + shares);
            REQUIRE(r.exit_code == 0);

            std::vector<std::string> sets;
            for (unsigned i = 1; i <= n; ++i) sets.push_back("k,p" + std::to_string(i));
            std::string pawns = "p1";
            for (unsigned i = 2; i <= n; ++i) pawns += ",p" + std::to_string(i);
            sets.push_back(pawns);

            nlohmann::json want = nlohmann::json::array();
            {
                std::stringstream ss(secret);
                std::string item;
                while (std::getline(ss, item, ',')) want.push_back(std::stoull(item));
            }
            for (const std::string& set : sets) {
                r = run_cli("reconstruct --shares " + shares + " --set " + set);
                REQUIRE(r.exit_code == 0);
                CHECK(parse_output(r)["secret"] == want);
            }
        }
    }
    std::remove(shares.c_str());
}

TEST_CASE("cli: dealing is deterministic per seed") {
    const RunResult a = run_cli("deal --scheme sigma2 --n 4 --secret 6 --seed 5 --with-transcript");
    const RunResult b = run_cli("deal --scheme sigma2 --n 4 --secret 6 --seed 5 --with-transcript");
    const RunResult c = run_cli("deal --scheme sigma2 --n 4 --secret 6 --seed 6");
    REQUIRE(a.exit_code == 0);
    CHECK(a.output == b.output);
    CHECK(a.output != c.output);
}

TEST_CASE("cli: verify reports perfectness") {
    const RunResult r = run_cli("verify --scheme sigma2 --n 3");
    REQUIRE(r.exit_code == 0);
    const auto j = parse_output(r);
    CHECK(j["perfect"] == true);
    CHECK(j["violations"].empty());
    CHECK(j["uniform"]["p1"] == true);
    CHECK(j["min_rate"] == "1/2");
}

TEST_CASE("cli: verify respects the enumeration budget") {
    RunResult r = run_cli("verify --scheme composite --n 4");
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("budget") != std::string::npos);

    r = run_cli("verify --scheme sigma1 --n 2", "KPN_BUDGET=10");
    CHECK(r.exit_code == 1);

    r = run_cli("verify --scheme sigma1 --n 2 --budget 200", "KPN_BUDGET=10");
    CHECK(r.exit_code == 0);
}

TEST_CASE("cli: rate is oracle-backed when feasible, nominal otherwise") {
    RunResult r = run_cli("rate --n 3 --q 7");
    REQUIRE(r.exit_code == 0);
    auto j = parse_output(r);
    CHECK(j["min_rate"] == "2/3");
    CHECK(j["oracle"] == true);

    r = run_cli("rate --n 6");
    REQUIRE(r.exit_code == 0);
    j = parse_output(r);
    CHECK(j["min_rate"] == "5/9");
    CHECK(j["oracle"] == false);
}

TEST_CASE("cli: bound reports kappa and its reciprocal") {
    RunResult r = run_cli("bound --structure gamma_4");
    REQUIRE(r.exit_code == 0);
    auto j = parse_output(r);
    CHECK(j["kappa"] == "5/3");
    CHECK(j["rate_upper_bound"] == "3/5");
    CHECK(j["certificate_verified"] == true);

    r = run_cli("bound --structure path4");
    REQUIRE(r.exit_code == 0);
    j = parse_output(r);
    CHECK(j["kappa"] == "3/2");
    CHECK_FALSE(j.contains("certificate_verified"));

    r = run_cli("bound --structure gamma_9");
    CHECK(r.exit_code == 1); // exceeds the subset-variable cap
}

TEST_CASE("cli: certify emits the certificate with its verdict") {
    RunResult r = run_cli("certify --lemma down --n 3");
    REQUIRE(r.exit_code == 0);
    auto j = parse_output(r);
    CHECK(j["verified"] == true);
    CHECK(j["structure"] == "gamma_3");
    CHECK(j["target"]["constant"] == "2/1");

    r = run_cli("certify --lemma combined --n 10");
    REQUIRE(r.exit_code == 0);
    CHECK(parse_output(r)["verified"] == true);
}

TEST_CASE("cli: usage errors exit with 2") {
    CHECK(run_cli("bogus").exit_code == 2);
    CHECK(run_cli("gamma").exit_code == 2);                          // missing --n
    CHECK(run_cli("gamma --n 1").exit_code == 2);                    // invalid n
    CHECK(run_cli("deal --scheme sigma1 --n 3 --secret 1,2 --seed 1").exit_code == 2);
    CHECK(run_cli("deal --scheme sigma1 --n 3 --q 4 --secret 1 --seed 1").exit_code == 2);
    CHECK(run_cli("rate --n 3 --q 5").exit_code == 2);               // q must exceed 2n-1
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("cli: plain format prints key-value lines") {
    const RunResult r = run_cli("rate --n 3 --q 7 --format plain");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("min_rate: 2/3") != std::string::npos);
}
