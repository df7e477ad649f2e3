#include "kpn/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kpn {

OutcomeLayout::OutcomeLayout(Prime q_, unsigned secret_symbols_,
                             std::vector<Participant> participants_,
                             std::vector<unsigned> share_widths_)
    : q(q_.value),
      secret_symbols(secret_symbols_),
      participants(std::move(participants_)),
      share_widths(std::move(share_widths_)) {
    if (participants.size() != share_widths.size()) {
        throw InvalidParameter("one share width per participant required");
    }
    if (secret_symbols == 0) throw InvalidParameter("secret needs at least one symbol");
    offsets_.push_back(0);
    offsets_.push_back(secret_symbols);
    for (unsigned w : share_widths) {
        offsets_.push_back(offsets_.back() + w);
    }
    const unsigned digits = offsets_.back();
    powers_.assign(digits + 1, 1);
    for (unsigned i = 1; i <= digits; ++i) {
        if (powers_[i - 1] > UINT64_MAX / q) {
            BigInt size = 1;
            for (unsigned j = 0; j < digits; ++j) size *= q;
            throw EnumerationTooLarge("outcome space does not fit a 64-bit key", size.str());
        }
        powers_[i] = powers_[i - 1] * q;
    }
}

OutcomeLayout OutcomeLayout::for_scheme(const SchemeSpec& spec) {
    std::vector<unsigned> widths;
    for (std::size_t i = 0; i < spec.participant_count(); ++i) {
        widths.push_back(static_cast<unsigned>(spec.share_width(i)));
    }
    return OutcomeLayout(spec.q, static_cast<unsigned>(spec.secret_length()),
                         spec.structure().participants(), std::move(widths));
}

std::vector<unsigned> OutcomeLayout::digits_of(SubsetMask mask) const {
    if ((mask & ~full_ground_mask()) != 0) {
        throw InvalidParameter("subset references unknown ground element");
    }
    std::vector<unsigned> digits;
    if (mask & secret_bit()) {
        for (unsigned d = 0; d < secret_symbols; ++d) digits.push_back(d);
    }
    for (std::size_t i = 0; i < participants.size(); ++i) {
        if (mask & (SubsetMask{1} << i)) {
            for (unsigned d = offsets_[i + 1]; d < offsets_[i + 2]; ++d) digits.push_back(d);
        }
    }
    return digits;
}

std::uint64_t CountTable::secret_domain() const {
    return layout.pow_q(layout.secret_symbols);
}

std::unordered_map<std::uint64_t, std::uint64_t> CountTable::marginal(SubsetMask mask) const {
    const std::vector<unsigned> digits = layout.digits_of(mask);
    std::unordered_map<std::uint64_t, std::uint64_t> out;
    out.reserve(counts.size() / 4 + 1);
    const std::uint64_t q = layout.q;
    for (const auto& [key, count] : counts) {
        std::uint64_t projected = 0;
        std::uint64_t scale = 1;
        for (unsigned d : digits) {
            projected += (key / layout.pow_q(d)) % q * scale;
            scale *= q;
        }
        out[projected] += count;
    }
    return out;
}

void CountTable::add(std::uint64_t key, std::uint64_t count) {
    counts.emplace_back(key, count);
    total += count;
}

void CountTable::normalize() {
    std::sort(counts.begin(), counts.end());
    std::size_t out = 0;
    for (std::size_t i = 0; i < counts.size();) {
        std::uint64_t acc = 0;
        const std::uint64_t key = counts[i].first;
        while (i < counts.size() && counts[i].first == key) {
            acc += counts[i].second;
            ++i;
        }
        counts[out++] = {key, acc};
    }
    counts.resize(out);
}

namespace {

struct EnumerationPlan {
    std::uint64_t num_secrets;
    std::uint64_t num_transcripts;
    std::uint64_t total;
};

EnumerationPlan plan_enumeration(const SchemeSpec& spec, std::uint64_t budget) {
    BigInt secrets = 1, transcripts = 1;
    for (std::size_t i = 0; i < spec.secret_length(); ++i) secrets *= spec.q.value;
    for (std::size_t i = 0; i < spec.transcript_length(); ++i) transcripts *= spec.q.value;
    BigInt total = secrets * transcripts;
    if (total > budget) {
        throw EnumerationTooLarge("joint outcome space of " + total.str() +
                                      " pairs exceeds enumeration budget of " +
                                      std::to_string(budget),
                                  total.str());
    }
    return {static_cast<std::uint64_t>(secrets), static_cast<std::uint64_t>(transcripts),
            static_cast<std::uint64_t>(total)};
}

// Deals every (secret, transcript) pair with flat index in [begin, end) and
// writes the outcome keys to keys[begin..end).
void enumerate_range(const SchemeSpec& spec, const OutcomeLayout& layout,
                     std::uint64_t num_transcripts, std::uint64_t begin, std::uint64_t end,
                     std::uint64_t* keys) {
    const std::uint64_t q = layout.q;
    SecretVector secret(spec.secret_length());
    DealTranscript transcript(spec.transcript_length());
    std::vector<std::vector<std::uint64_t>> shares(spec.participant_count());
    for (std::size_t i = 0; i < shares.size(); ++i) shares[i].resize(spec.share_width(i));

    for (std::uint64_t flat = begin; flat < end; ++flat) {
        std::uint64_t s_idx = flat / num_transcripts;
        std::uint64_t t_idx = flat % num_transcripts;
        for (std::size_t d = 0; d < secret.size(); ++d) {
            secret[d] = s_idx % q;
            s_idx /= q;
        }
        for (std::size_t d = 0; d < transcript.size(); ++d) {
            transcript[d] = t_idx % q;
            t_idx /= q;
        }
        detail::deal_into(spec, secret, transcript, shares);

        std::uint64_t key = 0;
        unsigned digit = 0;
        for (std::size_t d = 0; d < secret.size(); ++d) {
            key += secret[d] * layout.pow_q(digit++);
        }
        for (const auto& vec : shares) {
            for (std::uint64_t v : vec) {
                key += v * layout.pow_q(digit++);
            }
        }
        keys[flat] = key;
    }
}

// Run-length encodes a sorted key array into the table.
CountTable aggregate_sorted(OutcomeLayout layout, const std::uint64_t* keys, std::size_t size) {
    CountTable table{std::move(layout), {}, size};
    table.counts.reserve(size);
    for (std::size_t i = 0; i < size;) {
        const std::uint64_t key = keys[i];
        std::size_t j = i;
        while (j < size && keys[j] == key) ++j;
        table.counts.emplace_back(key, j - i);
        i = j;
    }
    return table;
}

// Run-length encodes directly from independently sorted slices of `keys`
// (slice t spans [cuts[t], cuts[t+1])) via a k-way walk, so the slices never
// need to be merged in place.
CountTable aggregate_slices(OutcomeLayout layout, const std::uint64_t* keys, std::size_t size,
                            const std::vector<std::uint64_t>& cuts) {
    CountTable table{std::move(layout), {}, size};
    table.counts.reserve(size);
    const std::size_t slices = cuts.size() - 1;
    std::vector<std::size_t> cursor(slices);
    for (std::size_t t = 0; t < slices; ++t) cursor[t] = cuts[t];
    for (;;) {
        std::uint64_t min_key = UINT64_MAX;
        bool any = false;
        for (std::size_t t = 0; t < slices; ++t) {
            if (cursor[t] < cuts[t + 1] && (!any || keys[cursor[t]] < min_key)) {
                min_key = keys[cursor[t]];
                any = true;
            }
        }
        if (!any) break;
        std::uint64_t run = 0;
        for (std::size_t t = 0; t < slices; ++t) {
            while (cursor[t] < cuts[t + 1] && keys[cursor[t]] == min_key) {
                ++cursor[t];
                ++run;
            }
        }
        table.counts.emplace_back(min_key, run);
    }
    return table;
}

} // namespace

CountTable enumerate_joint_serial(const SchemeSpec& spec, std::uint64_t budget) {
    const EnumerationPlan plan = plan_enumeration(spec, budget);
    const OutcomeLayout layout = OutcomeLayout::for_scheme(spec);
    std::unique_ptr<std::uint64_t[]> keys(new std::uint64_t[plan.total]);
    enumerate_range(spec, layout, plan.num_transcripts, 0, plan.total, keys.get());
    std::sort(keys.get(), keys.get() + plan.total);
    return aggregate_sorted(layout, keys.get(), plan.total);
}

CountTable enumerate_joint(const SchemeSpec& spec, std::uint64_t budget) {
    const EnumerationPlan plan = plan_enumeration(spec, budget);
    const OutcomeLayout layout = OutcomeLayout::for_scheme(spec);
#ifdef _OPENMP
    const int max_threads = omp_get_max_threads();
    if (max_threads > 1 && plan.total >= 4096) {
        std::unique_ptr<std::uint64_t[]> keys(new std::uint64_t[plan.total]);
        std::vector<std::uint64_t> cuts;
#pragma omp parallel num_threads(max_threads)
        {
            const int tid = omp_get_thread_num();
            const int nthreads = omp_get_num_threads();
            const std::uint64_t chunk = (plan.total + nthreads - 1) / nthreads;
            const std::uint64_t begin = std::min<std::uint64_t>(plan.total, chunk * tid);
            const std::uint64_t end = std::min<std::uint64_t>(plan.total, begin + chunk);
#pragma omp single
            {
                for (int t = 0; t <= nthreads; ++t) {
                    cuts.push_back(std::min<std::uint64_t>(plan.total, chunk * t));
                }
            }
            if (begin < end) {
                enumerate_range(spec, layout, plan.num_transcripts, begin, end, keys.get());
                std::sort(keys.get() + begin, keys.get() + end);
            }
        }
        return aggregate_slices(layout, keys.get(), plan.total, cuts);
    }
#endif
    std::unique_ptr<std::uint64_t[]> keys(new std::uint64_t[plan.total]);
    enumerate_range(spec, layout, plan.num_transcripts, 0, plan.total, keys.get());
    std::sort(keys.get(), keys.get() + plan.total);
    return aggregate_sorted(layout, keys.get(), plan.total);
}

namespace {

std::string describe_subset(const CountTable& table, SubsetMask mask) {
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < table.layout.participants.size(); ++i) {
        if (mask & (SubsetMask{1} << i)) {
            if (!first) out += ",";
            out += table.layout.participants[i].name();
            first = false;
        }
    }
    return out + "}";
}

void check_structure_matches(const CountTable& table, const AccessStructure& structure) {
    if (structure.participant_count() != table.layout.participants.size()) {
        throw InvalidParameter("structure and table participants differ");
    }
    for (std::size_t i = 0; i < structure.participant_count(); ++i) {
        if (!(structure.participants()[i] == table.layout.participants[i])) {
            throw InvalidParameter("structure and table participants differ");
        }
    }
}

} // namespace

PerfectnessReport check_perfect(const CountTable& table, const AccessStructure& structure) {
    check_structure_matches(table, structure);
    PerfectnessReport report;
    const std::uint64_t num_secrets = table.secret_domain();
    const SubsetMask s_bit = table.layout.secret_bit();

    // Qualified side: every share assignment of X determines the secret.
    for (SubsetMask x : structure.minimal_qualified()) {
        auto joint = table.marginal(x | s_bit);
        const std::uint64_t secret_scale = table.layout.pow_q(table.layout.secret_symbols);
        // Keys encode the secret in the low digits (S projects first).
        std::unordered_map<std::uint64_t, std::uint64_t> seen; // assignment -> first secret
        std::unordered_map<std::uint64_t, bool> conflicted;
        for (const auto& [key, count] : joint) {
            (void)count;
            const std::uint64_t secret_value = key % secret_scale;
            const std::uint64_t assignment = key / secret_scale;
            auto [it, inserted] = seen.emplace(assignment, secret_value);
            if (!inserted && it->second != secret_value && !conflicted[assignment]) {
                conflicted[assignment] = true;
                report.violations.push_back(
                    {x, assignment,
                     "qualified set " + describe_subset(table, x) +
                         " has a share assignment consistent with more than one secret"});
            }
        }
    }

    // Unqualified side: per assignment, counts must agree across all secrets.
    for (SubsetMask x : structure.maximal_unqualified()) {
        auto joint = table.marginal(x | s_bit);
        const std::uint64_t secret_scale = table.layout.pow_q(table.layout.secret_symbols);
        std::unordered_map<std::uint64_t, std::unordered_map<std::uint64_t, std::uint64_t>> per;
        for (const auto& [key, count] : joint) {
            per[key / secret_scale][key % secret_scale] += count;
        }
        for (const auto& [assignment, by_secret] : per) {
            bool bad = by_secret.size() != num_secrets;
            if (!bad) {
                const std::uint64_t reference = by_secret.begin()->second;
                for (const auto& [sv, c] : by_secret) {
                    (void)sv;
                    if (c != reference) {
                        bad = true;
                        break;
                    }
                }
            }
            if (bad) {
                report.violations.push_back(
                    {x, assignment,
                     "unqualified set " + describe_subset(table, x) +
                         " sees secret-dependent counts"});
            }
        }
    }

    std::sort(report.violations.begin(), report.violations.end(),
              [](const PerfectnessViolation& a, const PerfectnessViolation& b) {
                  return a.subset != b.subset ? a.subset < b.subset
                                              : a.assignment < b.assignment;
              });
    report.perfect = report.violations.empty();
    return report;
}

std::vector<std::pair<Participant, bool>> check_uniform_shares(const CountTable& table) {
    std::vector<std::pair<Participant, bool>> result;
    for (std::size_t i = 0; i < table.layout.participants.size(); ++i) {
        const SubsetMask mask = SubsetMask{1} << i;
        auto counts = table.marginal(mask);
        BigInt domain = 1;
        for (unsigned d = 0; d < table.layout.share_widths[i]; ++d) domain *= table.layout.q;
        bool uniform = BigInt(counts.size()) == domain;
        if (uniform && !counts.empty()) {
            const std::uint64_t reference = counts.begin()->second;
            for (const auto& [key, c] : counts) {
                (void)key;
                if (c != reference) {
                    uniform = false;
                    break;
                }
            }
        }
        result.emplace_back(table.layout.participants[i], uniform);
    }
    return result;
}

double subset_entropy(const CountTable& table, SubsetMask mask) {
    if (mask == 0) return 0.0;
    auto counts = table.marginal(mask);
    const double total = static_cast<double>(table.total);
    double acc = 0.0;
    for (const auto& [key, c] : counts) {
        (void)key;
        acc += static_cast<double>(c) * std::log2(static_cast<double>(c));
    }
    return std::log2(total) - acc / total;
}

EntropyReport entropy_report(const CountTable& table, std::span<const SubsetMask> subsets) {
    EntropyReport report;
    const SubsetMask s_bit = table.layout.secret_bit();
    const double h_secret = subset_entropy(table, s_bit);
    for (SubsetMask mask : subsets) {
        const double H = subset_entropy(table, mask);
        report.entropy_bits[mask] = H;
        report.normalized[mask] = H / h_secret;
    }
    report.entropy_bits[s_bit] = h_secret;
    report.normalized[s_bit] = 1.0;

    const auto uniform = check_uniform_shares(table);
    bool first = true;
    for (std::size_t i = 0; i < table.layout.participants.size(); ++i) {
        const double H = subset_entropy(table, SubsetMask{1} << i);
        ParticipantRate rate{table.layout.participants[i], h_secret / H, std::nullopt};
        if (uniform[i].second) {
            rate.exact = Rational(table.layout.secret_symbols, table.layout.share_widths[i]);
        }
        report.rates.push_back(rate);
        if (first || rate.value < report.min_rate) {
            report.min_rate = rate.value;
            first = false;
        }
    }
    bool all_exact = std::all_of(report.rates.begin(), report.rates.end(),
                                 [](const ParticipantRate& r) { return r.exact.has_value(); });
    if (all_exact && !report.rates.empty()) {
        Rational best = *report.rates.front().exact;
        for (const auto& r : report.rates) best = std::min(best, *r.exact);
        report.min_rate_exact = best;
    }
    return report;
}

} // namespace kpn
