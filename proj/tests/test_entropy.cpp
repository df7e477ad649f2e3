#include <doctest.h>

#include <cmath>

#include "kpn/entropy.hpp"

using namespace kpn;

namespace {

constexpr double kTol = 1e-9;

CountTable mock_table(std::vector<std::pair<std::uint64_t, std::uint64_t>> entries) {
    // q=2, one secret symbol, participants a and b with one share symbol each;
    // keys are s + 2a + 4b.
    OutcomeLayout layout(Prime(2), 1,
                         {Participant::named("a"), Participant::named("b")}, {1, 1});
    CountTable table{layout, {}, 0};
    for (const auto& [key, count] : entries) table.add(key, count);
    table.normalize();
    return table;
}

AccessStructure two_of_two() {
    return AccessStructure({Participant::named("a"), Participant::named("b")}, {0b11});
}

} // namespace

TEST_CASE("joint enumeration sizes and flat counts") {
    // 5 secrets x 5 transcripts: one free coefficient at n=2, so 25 distinct
    // polynomials and 25 outcomes.
    const CountTable t1 = enumerate_joint(SchemeSpec(SchemeKind::Sigma1, 2, Prime(5)));
    CHECK(t1.total == 25);
    CHECK(t1.counts.size() == 25); // distinct polynomials give distinct outcomes
    for (const auto& [key, count] : t1.counts) {
        (void)key;
        CHECK(count == 1);
    }

    const CountTable t2 = enumerate_joint(SchemeSpec(SchemeKind::Sigma2, 3, Prime(7)));
    CHECK(t2.total == 2401);

    const CountTable t3 = enumerate_joint(SchemeSpec(SchemeKind::Composite, 3, Prime(7)));
    CHECK(t3.total == 823543); // 7^7
}

TEST_CASE("parallel and serial enumeration agree") {
    for (const SchemeSpec& spec :
         {SchemeSpec(SchemeKind::Sigma2, 3, Prime(7)), SchemeSpec(SchemeKind::Composite, 2, Prime(5)),
          SchemeSpec(SchemeKind::Sigma1, 3, Prime(11))}) {
        const CountTable serial = enumerate_joint_serial(spec);
        const CountTable parallel = enumerate_joint(spec);
        CHECK(serial.total == parallel.total);
        CHECK(serial.counts == parallel.counts);
    }
}

TEST_CASE("enumeration budget is enforced with the computed size") {
    const SchemeSpec spec = SchemeSpec::with_default_modulus(SchemeKind::Composite, 4);
    CHECK(spec.q.value == 11);
    try {
        enumerate_joint(spec); // 11^(3+11) pairs, far beyond the default budget
        FAIL("expected EnumerationTooLarge");
    } catch (const EnumerationTooLarge& e) {
        BigInt expected = 1;
        for (int i = 0; i < 14; ++i) expected *= 11;
        CHECK(e.computed_size == expected.str());
    }
    CHECK_NOTHROW(enumerate_joint(SchemeSpec(SchemeKind::Sigma1, 2, Prime(5)), 25));
    CHECK_THROWS_AS(enumerate_joint(SchemeSpec(SchemeKind::Sigma1, 2, Prime(5)), 24),
                    EnumerationTooLarge);
}

TEST_CASE("perfectness by counting on real schemes") {
    const CountTable sigma1 = enumerate_joint(SchemeSpec(SchemeKind::Sigma1, 2, Prime(5)));
    const PerfectnessReport r1 = check_perfect(sigma1, make_gamma(2));
    CHECK(r1.perfect);
    CHECK(r1.violations.empty());

    const CountTable sigma2 = enumerate_joint(SchemeSpec(SchemeKind::Sigma2, 3, Prime(7)));
    CHECK(check_perfect(sigma2, make_gamma(3)).perfect);

    const CountTable composite = enumerate_joint(SchemeSpec(SchemeKind::Composite, 2, Prime(5)));
    CHECK(check_perfect(composite, make_gamma(2)).perfect);
}

TEST_CASE("perfectness violations are reported for leaky mock tables") {
    // share of a equals the secret: a (unqualified alone) learns everything
    const CountTable leaky = mock_table({{0b000, 1}, {0b011, 1}});
    const PerfectnessReport report = check_perfect(leaky, two_of_two());
    CHECK_FALSE(report.perfect);
    REQUIRE(!report.violations.empty());
    bool saw_a = false;
    for (const auto& v : report.violations) {
        if (v.subset == 0b01) saw_a = true;
        CHECK(v.detail.find("unqualified") != std::string::npos);
    }
    CHECK(saw_a);

    // both secrets map to the same share tuple: {a,b} cannot determine s
    const CountTable ambiguous = mock_table({{0b000, 1}, {0b001, 1}});
    const PerfectnessReport report2 = check_perfect(ambiguous, two_of_two());
    CHECK_FALSE(report2.perfect);
    bool saw_ab = false;
    for (const auto& v : report2.violations) {
        if (v.subset == 0b11) {
            saw_ab = true;
            CHECK(v.detail.find("qualified") != std::string::npos);
        }
    }
    CHECK(saw_ab);

    CHECK_THROWS_AS(check_perfect(leaky, make_gamma(2)), InvalidParameter);
}

TEST_CASE("share uniformity flags") {
    const CountTable sigma1 = enumerate_joint(SchemeSpec(SchemeKind::Sigma1, 3, Prime(7)));
    for (const auto& [who, uniform] : check_uniform_shares(sigma1)) {
        (void)who;
        CHECK(uniform);
    }
    const CountTable sigma2 = enumerate_joint(SchemeSpec(SchemeKind::Sigma2, 3, Prime(7)));
    for (const auto& [who, uniform] : check_uniform_shares(sigma2)) {
        (void)who;
        CHECK(uniform);
    }

    // a's share is stuck at zero: marginal misses half its domain
    const CountTable stuck = mock_table({{0b000, 1}, {0b001, 1}, {0b100, 1}, {0b101, 1}});
    const auto flags = check_uniform_shares(stuck);
    CHECK(flags[0].first.name() == "a");
    CHECK_FALSE(flags[0].second);
    CHECK(flags[1].second);
}

TEST_CASE("entropy report on worked schemes") {
    const CountTable sigma1 = enumerate_joint(SchemeSpec(SchemeKind::Sigma1, 2, Prime(5)));
    const SubsetMask king = 0b001;
    const SubsetMask s_bit = sigma1.layout.secret_bit();
    std::vector<SubsetMask> subsets = {king};
    const EntropyReport report = entropy_report(sigma1, subsets);
    CHECK(report.entropy_bits.at(king) == doctest::Approx(std::log2(5.0)).epsilon(1e-12));
    CHECK(report.normalized.at(s_bit) == 1.0);

    const CountTable composite = enumerate_joint(SchemeSpec(SchemeKind::Composite, 3, Prime(7)));
    const EntropyReport comp_report = entropy_report(composite, {});
    REQUIRE(comp_report.rates.size() == 4);
    for (const auto& rate : comp_report.rates) {
        REQUIRE(rate.exact.has_value());
        CHECK(*rate.exact == Rational(2, 3));
    }
    REQUIRE(comp_report.min_rate_exact.has_value());
    CHECK(*comp_report.min_rate_exact == Rational(2, 3));
    CHECK(comp_report.min_rate == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("composite oracle rate matches the paper fraction for n=2") {
    const CountTable composite = enumerate_joint(SchemeSpec(SchemeKind::Composite, 2, Prime(5)));
    const EntropyReport report = entropy_report(composite, {});
    REQUIRE(report.min_rate_exact.has_value());
    CHECK(*report.min_rate_exact == Rational(1));
}

TEST_CASE("conditional entropies cross-check the counting verdict") {
    const CountTable table = enumerate_joint(SchemeSpec(SchemeKind::Sigma2, 3, Prime(7)));
    const AccessStructure g = make_gamma(3);
    const SubsetMask s_bit = table.layout.secret_bit();
    const double h_secret = subset_entropy(table, s_bit);
    for (SubsetMask x = 0; x <= g.full_mask(); ++x) {
        const double conditional = subset_entropy(table, x | s_bit) - subset_entropy(table, x);
        if (g.is_qualified(x)) {
            CHECK(std::abs(conditional) <= kTol);
        } else {
            CHECK(std::abs(conditional - h_secret) <= kTol);
        }
    }
}

TEST_CASE("oracle entropies satisfy the axioms") {
    const CountTable table = enumerate_joint(SchemeSpec(SchemeKind::Sigma2, 3, Prime(7)));
    const AccessStructure g = make_gamma(3);
    const SubsetMask ground = table.layout.full_ground_mask();
    std::vector<double> H(ground + 1, 0.0);
    for (SubsetMask m = 0; m <= ground; ++m) H[m] = subset_entropy(table, m);

    const double h_secret = H[table.layout.secret_bit()];
    for (SubsetMask x = 0; x <= ground; ++x) {
        for (SubsetMask y = 0; y <= ground; ++y) {
            if ((x & y) == x) CHECK(H[x] <= H[y] + kTol); // monotone on x subset of y
            CHECK(H[x] + H[y] + kTol >= H[x & y] + H[x | y]);
        }
    }
    for (SubsetMask x = 0; x <= g.full_mask(); ++x) {
        for (SubsetMask y = 0; y <= g.full_mask(); ++y) {
            if (!g.is_qualified(x) || !g.is_qualified(y) || g.is_qualified(x & y)) continue;
            CHECK(H[x] + H[y] + kTol >= H[x & y] + H[x | y] + h_secret);
        }
    }
}
