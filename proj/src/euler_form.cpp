#include "opn/euler_form.hpp"

#include <algorithm>
#include <stdexcept>

namespace opn {

LemmaId lemma_from_string(std::string_view s) {
    if (s.size() == 2 && s[0] == 'L' && s[1] >= '0' && s[1] <= '6')
        return static_cast<LemmaId>(s[1] - '0');
    throw std::invalid_argument("unknown lemma id: " + std::string(s));
}

std::string to_string(LemmaId id) {
    return "L" + std::to_string(static_cast<int>(id));
}

EulerFormReport check_euler_form(const Factorization& f) {
    for (const auto& part : f.parts())
        if (part.prime == 2)
            throw std::domain_error("euler form criteria apply to odd integers only");

    std::vector<const PrimePower*> odd_parts;
    for (const auto& part : f.parts())
        if (part.exponent % 2 == 1) odd_parts.push_back(&part);

    EulerFormReport report;
    auto add = [&](LemmaId id, bool satisfied, const std::string& witness) {
        report.lemmas.push_back(
            {id, satisfied ? LemmaStatus::satisfied : LemmaStatus::violated, satisfied ? "" : witness});
    };

    add(LemmaId::L0, f.size() >= 2,
        f.empty() ? "1 has no prime factor" : "prime power " + to_string(f));
    add(LemmaId::L2, !odd_parts.empty(), "all exponents even");
    {
        std::string names;
        for (const auto* part : odd_parts) {
            if (!names.empty()) names += ", ";
            names += part->prime.get_str();
        }
        add(LemmaId::L3, odd_parts.size() == 1,
            odd_parts.empty() ? "no odd exponent" : "odd exponents at primes " + names);
    }
    if (odd_parts.size() == 1) {
        const PrimePower& special = *odd_parts.front();
        add(LemmaId::L4, special.exponent % 4 == 1,
            "odd exponent " + std::to_string(special.exponent) + " of prime " +
                special.prime.get_str() + " is 3 (mod 4)");
        unsigned long q4 = mpz_fdiv_ui(special.prime.get_mpz_t(), 4);
        add(LemmaId::L5, q4 == 1,
            "prime " + special.prime.get_str() + " with the odd exponent is 3 (mod 4)");
    } else {
        // no unique odd exponent to constrain; the failure is already on L3
        add(LemmaId::L4, true, "");
        add(LemmaId::L5, true, "");
    }
    add(LemmaId::L6, f.size() >= 3, "only " + std::to_string(f.size()) + " distinct primes");

    report.overall = std::all_of(report.lemmas.begin(), report.lemmas.end(),
                                 [](const LemmaVerdict& v) { return v.status == LemmaStatus::satisfied; });
    return report;
}

namespace {

// smallest-prime-factor table for 0..limit
std::vector<uint32_t> spf_table(uint32_t limit) {
    std::vector<uint32_t> spf(limit + 1, 0);
    for (uint32_t i = 2; i <= limit; i++) {
        if (spf[i] == 0)
            for (uint64_t j = i; j <= limit; j += i)
                if (spf[j] == 0) spf[j] = i;
    }
    return spf;
}

uint64_t sigma_u64(uint64_t p, unsigned e) {
    uint64_t s = 1, pw = 1;
    for (unsigned i = 0; i < e; i++) {
        pw *= p;
        s += pw;
    }
    return s;
}

SweepReport sweep_l0(uint64_t bound) {
    SweepReport report{.check = "L0"};
    Int pw;
    for (uint32_t p : primes_below(static_cast<uint32_t>(bound))) {
        for (unsigned a = 1; a <= 20; a++) {
            report.trials++;
            Int s = sigma_prime_power(p, a);
            mpz_pow_ui(pw.get_mpz_t(), Int(p).get_mpz_t(), a);
            if (s == 2 * pw)
                report.add_failure(std::to_string(p) + "^" + std::to_string(a) + " is perfect");
        }
    }
    return report;
}

SweepReport sweep_l1(uint64_t bound) {
    SweepReport report{.check = "L1"};
    std::vector<uint32_t> counts(bound + 1, 0);
    for (uint64_t d = 1; d <= bound; d++)
        for (uint64_t m = d; m <= bound; m += d) counts[m]++;
    for (uint64_t n = 1; n <= bound; n++) {
        report.trials++;
        Int formula = divisor_count(factorize(n).factors);
        if (formula != counts[n])
            report.add_failure("n=" + std::to_string(n) + ": formula " + formula.get_str() +
                                       " vs enumerated " + std::to_string(counts[n]));
    }
    return report;
}

// Shared sweep over odd n <= bound via the spf table; calls back with the
// exponent parity profile and exact sigma.
template <typename Fn>
void for_each_odd_factored(uint64_t bound, Fn&& fn) {
    auto spf = spf_table(static_cast<uint32_t>(bound));
    for (uint64_t n = 1; n <= bound; n += 2) {
        uint64_t m = n, sigma_n = 1;
        unsigned odd_exponents = 0, distinct = 0;
        bool all_even = true;
        while (m > 1) {
            uint32_t p = spf[m];
            unsigned e = 0;
            while (m % p == 0) m /= p, e++;
            sigma_n *= sigma_u64(p, e);
            distinct++;
            if (e % 2 == 1) {
                odd_exponents++;
                all_even = false;
            }
        }
        fn(n, all_even, odd_exponents, distinct, sigma_n);
    }
}

SweepReport sweep_l2(uint64_t bound) {
    SweepReport report{.check = "L2"};
    for_each_odd_factored(bound, [&](uint64_t n, bool all_even, unsigned, unsigned, uint64_t s) {
        if (!all_even) return;
        report.trials++;
        if (s % 2 == 0)
            report.add_failure("n=" + std::to_string(n) + ": all exponents even but sigma " +
                                       std::to_string(s) + " is even");
    });
    return report;
}

SweepReport sweep_l3(uint64_t bound) {
    SweepReport report{.check = "L3"};
    for_each_odd_factored(bound, [&](uint64_t n, bool, unsigned odd_exponents, unsigned, uint64_t s) {
        if (odd_exponents < 2) return;
        report.trials++;
        if (s % 4 != 0)
            report.add_failure("n=" + std::to_string(n) + ": " + std::to_string(odd_exponents) +
                                       " odd exponents but sigma " + std::to_string(s) +
                                       " is not divisible by 4");
    });
    return report;
}

SweepReport sweep_l4(uint64_t bound) {
    SweepReport report{.check = "L4"};
    for (uint32_t q : primes_below(static_cast<uint32_t>(bound))) {
        if (q == 2) continue;
        for (unsigned beta = 3; beta <= 19; beta += 4) {
            report.trials++;
            Int s = sigma_prime_power(q, beta);
            if (s % 4 != 0)
                report.add_failure("sigma(" + std::to_string(q) + "^" + std::to_string(beta) +
                                           ") = " + s.get_str() + " not divisible by 4");
        }
    }
    return report;
}

SweepReport sweep_l5(uint64_t bound) {
    SweepReport report{.check = "L5"};
    for (uint32_t q : primes_below(static_cast<uint32_t>(bound))) {
        if (q % 4 != 3) continue;
        for (unsigned beta = 1; beta <= 17; beta += 4) {
            report.trials++;
            Int s = sigma_prime_power(q, beta);
            if (s % 4 != 0)
                report.add_failure("sigma(" + std::to_string(q) + "^" + std::to_string(beta) +
                                           ") = " + s.get_str() + " not divisible by 4");
        }
    }
    return report;
}

SweepReport sweep_l6(uint64_t bound) {
    SweepReport report{.check = "L6"};
    auto primes = primes_below(static_cast<uint32_t>(bound));
    Int pa, qb;
    for (uint32_t p : primes) {
        if (p == 2) continue;
        for (uint32_t q : primes) {
            if (q == 2 || q == p) continue;
            for (unsigned alpha = 2; alpha <= 8; alpha += 2) {
                mpz_pow_ui(pa.get_mpz_t(), Int(p).get_mpz_t(), alpha);
                Int sp = sigma_prime_power(p, alpha);
                for (unsigned beta = 1; beta <= 9; beta += 2) {
                    report.trials++;
                    mpz_pow_ui(qb.get_mpz_t(), Int(q).get_mpz_t(), beta);
                    if (sp * sigma_prime_power(q, beta) == 2 * pa * qb)
                        report.add_failure(std::to_string(p) + "^" + std::to_string(alpha) + "*" +
                                                   std::to_string(q) + "^" + std::to_string(beta) +
                                                   " is perfect");
                }
            }
        }
    }
    return report;
}

}  // namespace

SweepReport verify_lemma(LemmaId id, std::optional<uint64_t> bound) {
    switch (id) {
        case LemmaId::L0: return sweep_l0(bound.value_or(1000));
        case LemmaId::L1: return sweep_l1(bound.value_or(100'000));
        case LemmaId::L2: return sweep_l2(bound.value_or(1'000'000));
        case LemmaId::L3: return sweep_l3(bound.value_or(1'000'000));
        case LemmaId::L4: return sweep_l4(bound.value_or(500));
        case LemmaId::L5: return sweep_l5(bound.value_or(500));
        case LemmaId::L6: return sweep_l6(bound.value_or(100));
    }
    throw std::invalid_argument("unknown lemma id");
}

}  // namespace opn
