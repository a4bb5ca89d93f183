#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "opn/criteria.hpp"
#include "opn/search.hpp"
#include "oracles.hpp"

using opn::Criterion;
using opn::FilterVerdict;
using opn::InconclusiveKind;
using opn::Int;
using opn::OddPrime;
using opn::Outcome;
using opn::ShapeSpec;
using opn::ShapeTerm;
using opn::SymbolValue;

namespace {
OddPrime P(uint64_t p) { return OddPrime(opn::from_u64(p)); }
int sym(SymbolValue s) { return opn::to_int(s); }
}  // namespace

TEST_CASE("shape grammar round trips") {
    for (const char* text : {"3^2*5^2*13^2@29^1", "5^2*13^2*53^2@29^odd", "3*5*13@29^odd",
                             "3^2*5^4@17^5", "5*13@53^odd"}) {
        ShapeSpec s = opn::parse_shape(text);
        CHECK(opn::parse_shape(opn::to_string(s)) == s);
    }
    ShapeSpec exact = opn::parse_shape("3^2*5^2*13^2@29^1");
    CHECK(exact.exact());
    CHECK(exact.even_part.size() == 3);
    CHECK(exact.special.value() == 29);
    CHECK(exact.special_exponent == 1u);

    ShapeSpec mixed = opn::parse_shape("5^2*13^2*53^2@29^odd");
    CHECK_FALSE(mixed.exact());
    CHECK(mixed.even_part[0].exponent == 2u);
    CHECK_FALSE(mixed.special_exponent.has_value());

    // a bare special prime is parity-only, printed canonically with ^odd
    CHECK(opn::to_string(opn::parse_shape("3^2*5^2@29")) == "3^2*5^2@29^odd");
}

TEST_CASE("shape grammar rejects with positioned errors") {
    auto position_of = [](const std::string& text) -> std::size_t {
        try {
            opn::parse_shape(text);
        } catch (const opn::ParseError& e) {
            return e.position();
        }
        return static_cast<std::size_t>(-1);
    };
    CHECK(position_of("") == 0);
    CHECK(position_of("3^3*5^2@29") == 2);        // odd exponent in even part
    CHECK(position_of("3^2*5^2@4") == 8);         // special not an odd prime
    CHECK(position_of("3^2@3^1") == 4);           // special duplicated
    CHECK(position_of("@29") == 0);               // missing even part
    CHECK(position_of("3^2*5^2@29^2") == 11);     // even special exponent
    CHECK(position_of("3^2*5^2") == 7);           // missing @
    CHECK(position_of("3^2*5^2@29^odd!") == 14);  // trailing garbage
    CHECK(position_of("5^2*3^2@29") == 4);        // descending
    CHECK(position_of("15^2*17^2@29") == 0);      // 15 not prime
    CHECK(position_of("3^2*3^2@29") == 4);        // duplicate
    CHECK(position_of("3^2*5^2@29^od") == 11);    // bad parity keyword
}

TEST_CASE("shape validation enforces the invariants") {
    ShapeSpec good{{{P(3), 2}, {P(5), 2}}, P(13), 1};
    CHECK_NOTHROW(good.validate());
    CHECK(good.exact());

    ShapeSpec dup{{{P(3), 2}, {P(13), 2}}, P(13), 1};
    CHECK_THROWS_AS(dup.validate(), std::domain_error);

    ShapeSpec misordered{{{P(5), 2}, {P(3), 2}}, P(13), 1};
    CHECK_THROWS_AS(misordered.validate(), std::domain_error);

    ShapeSpec odd_even_exp{{{P(3), 3}}, P(13), 1};
    CHECK_THROWS_AS(odd_even_exp.validate(), std::domain_error);

    ShapeSpec even_special{{{P(3), 2}}, P(13), 2};
    CHECK_THROWS_AS(even_special.validate(), std::domain_error);

    ShapeSpec parity_only{{{P(3), std::nullopt}}, P(13), std::nullopt};
    CHECK_NOTHROW(parity_only.validate());
    CHECK_FALSE(parity_only.exact());
}

TEST_CASE("residue matrix of the second worked example is all -1 off the diagonal") {
    auto m = opn::residue_matrix({P(5), P(7), P(17), P(73)});
    REQUIRE(m.primes.size() == 4);
    int minus = 0;
    for (std::size_t i = 0; i < 4; i++)
        for (std::size_t j = 0; j < 4; j++) {
            if (i == j) {
                CHECK(m.at(i, j) == SymbolValue::zero);
            } else {
                CHECK(m.at(i, j) == SymbolValue::minus_one);
                minus++;
            }
        }
    CHECK(minus == 12);
    CHECK_FALSE(m.any_plus_one());
}

TEST_CASE("residue matrix pinned small cases") {
    auto m = opn::residue_matrix({P(3), P(7)});
    CHECK(sym(m.at(0, 1)) == -1);  // 3 is not a square mod 7
    CHECK(sym(m.at(1, 0)) == 1);   // 7 = 1 (mod 3)

    auto single = opn::residue_matrix({P(5)});
    CHECK(single.entries.size() == 1);
    CHECK(single.at(0, 0) == SymbolValue::zero);

    CHECK_THROWS_AS(opn::residue_matrix({P(5), P(5)}), std::domain_error);

    // entries match square-set enumeration on a random pool
    auto pool = std::vector<OddPrime>{P(3), P(11), P(13), P(41)};
    auto matrix = opn::residue_matrix(pool);
    for (std::size_t i = 0; i < pool.size(); i++)
        for (std::size_t j = 0; j < pool.size(); j++) {
            uint64_t pi = opn::to_u64(pool[i].value());
            uint64_t pj = opn::to_u64(pool[j].value());
            CHECK(sym(matrix.at(i, j)) == oracles::legendre_by_enumeration(pi, pj));
        }
}

TEST_CASE("theorem1 rejects the first worked example with a full symbol witness") {
    ShapeSpec shape = opn::parse_shape("5^2*13^2*53^2@29^odd");
    FilterVerdict v = opn::theorem1_filter(shape);
    CHECK(v.criterion == Criterion::theorem1);
    REQUIRE(v.outcome == Outcome::reject);
    REQUIRE(v.symbols.size() == 3);
    CHECK(v.symbols[0].first == 5);
    CHECK(v.symbols[1].first == 13);
    CHECK(v.symbols[2].first == 53);
    for (const auto& [prime, symbol] : v.symbols) CHECK(symbol == SymbolValue::plus_one);
}

TEST_CASE("theorem1 passes when some even-part prime is a non-residue") {
    // 3 is not a square mod 29
    FilterVerdict v = opn::theorem1_filter(opn::parse_shape("3^2*5^2*13^2*53^2@29^odd"));
    CHECK(v.outcome == Outcome::pass);
    CHECK(v.symbols.empty());  // pass carries no witness
    CHECK(v.reason.empty());
}

TEST_CASE("theorem1 is inconclusive off its residue class") {
    FilterVerdict v = opn::theorem1_filter(opn::parse_shape("5^2*13^2@17^odd"));
    CHECK(v.outcome == Outcome::inconclusive);
    CHECK(v.inconclusive_kind == InconclusiveKind::not_applicable);
    CHECK_FALSE(v.reason.empty());
}

TEST_CASE("theorem2 rejects the second worked example with the residue matrix") {
    ShapeSpec shape = opn::parse_shape("5^2*7^2*17^2@73^odd");
    FilterVerdict v = opn::theorem2_filter(shape);
    REQUIRE(v.outcome == Outcome::reject);
    REQUIRE(v.matrix.has_value());
    REQUIRE(v.matrix->primes.size() == 4);
    CHECK(v.matrix->primes[3].value() == 73);  // special included as row and column
    int minus = 0;
    for (std::size_t i = 0; i < 4; i++)
        for (std::size_t j = 0; j < 4; j++)
            if (i != j) {
                CHECK(v.matrix->at(i, j) == SymbolValue::minus_one);
                minus++;
            }
    CHECK(minus == 12);
}

TEST_CASE("theorem2 passes when any pair gives a nonzero square") {
    // 11 = 2^2 (mod 7)
    FilterVerdict v = opn::theorem2_filter(opn::parse_shape("3^2*7^2*11^2@17^odd"));
    CHECK(v.outcome == Outcome::pass);
    CHECK_FALSE(v.matrix.has_value());
}

TEST_CASE("theorem2 is inconclusive off its residue class") {
    FilterVerdict v = opn::theorem2_filter(opn::parse_shape("5^2*13^2@29^odd"));
    CHECK(v.outcome == Outcome::inconclusive);
    CHECK(v.inconclusive_kind == InconclusiveKind::not_applicable);
}

TEST_CASE("soundness: filters only reject inside their residue class") {
    opn::SplitMix64 rng(17);
    auto primes = oracles::sieve_primes(500);
    int rejects_checked = 0;
    for (int t = 0; t < 500; t++) {
        // random shape over 3..5 distinct odd primes
        std::vector<uint64_t> chosen;
        while (chosen.size() < 3 + rng.below(3)) {
            uint64_t p = primes[1 + rng.below(primes.size() - 1)];
            bool dup = false;
            for (uint64_t c : chosen) dup |= c == p;
            if (!dup) chosen.push_back(p);
        }
        uint64_t special = chosen.back();
        chosen.pop_back();
        std::sort(chosen.begin(), chosen.end());
        std::vector<ShapeTerm> even;
        for (uint64_t p : chosen) even.push_back({P(p), std::nullopt});
        ShapeSpec shape{even, P(special), std::nullopt};

        FilterVerdict t1 = opn::theorem1_filter(shape);
        FilterVerdict t2 = opn::theorem2_filter(shape);
        if (t1.outcome == Outcome::reject) {
            CHECK(special % 8 == 5);
            rejects_checked++;
        }
        if (t2.outcome == Outcome::reject) {
            CHECK(special % 8 == 1);
            rejects_checked++;
        }
        if (special % 8 != 5) CHECK(t1.outcome == Outcome::inconclusive);
        if (special % 8 != 1) CHECK(t2.outcome == Outcome::inconclusive);
    }
    CHECK(rejects_checked > 0);
}

TEST_CASE("theorem filters ignore exponent magnitudes") {
    opn::SplitMix64 rng(19);
    for (const char* text : {"5^2*13^2*53^2@29^1", "5^2*7^2*17^2@73^1", "3^2*7^2*11^2@17^3",
                             "3^2*5^2*13^2*53^2@29^5"}) {
        ShapeSpec base = opn::parse_shape(text);
        FilterVerdict t1 = opn::theorem1_filter(base);
        FilterVerdict t2 = opn::theorem2_filter(base);
        for (int m = 0; m < 10; m++) {
            ShapeSpec mutated = base;
            for (auto& term : mutated.even_part)
                *term.exponent += 2 * static_cast<unsigned>(rng.below(6));
            *mutated.special_exponent += 2 * static_cast<unsigned>(rng.below(6));
            CHECK(opn::theorem1_filter(mutated).outcome == t1.outcome);
            CHECK(opn::theorem2_filter(mutated).outcome == t2.outcome);
        }
        // parity-only variant agrees too
        ShapeSpec parity = base;
        for (auto& term : parity.even_part) term.exponent.reset();
        parity.special_exponent.reset();
        CHECK(opn::theorem1_filter(parity).outcome == t1.outcome);
        CHECK(opn::theorem2_filter(parity).outcome == t2.outcome);
    }
}

TEST_CASE("reciprocity corollary: two primes 3 mod 4 in the support force a theorem2 pass") {
    auto primes = oracles::sieve_primes(2000);
    std::vector<uint64_t> three_mod4, one_mod8;
    for (uint64_t p : primes) {
        if (p % 4 == 3) three_mod4.push_back(p);
        if (p % 8 == 1) one_mod8.push_back(p);
    }
    opn::SplitMix64 rng(23);
    for (int t = 0; t < 200; t++) {
        uint64_t a = three_mod4[rng.below(three_mod4.size())];
        uint64_t b = three_mod4[rng.below(three_mod4.size())];
        if (a == b) continue;
        uint64_t special = one_mod8[rng.below(one_mod8.size())];
        if (special == a || special == b) continue;
        std::vector<uint64_t> sorted{std::min(a, b), std::max(a, b)};
        ShapeSpec shape{{{P(sorted[0]), std::nullopt}, {P(sorted[1]), std::nullopt}},
                        P(special),
                        std::nullopt};
        CHECK(opn::theorem2_filter(shape).outcome == Outcome::pass);
    }
}

TEST_CASE("support filter pinned rejections") {
    // sigma(13) = 14 = 2*7 and 7 is outside {3, 13}
    FilterVerdict v = opn::support_filter(opn::parse_shape("3^2@13^1"));
    REQUIRE(v.outcome == Outcome::reject);
    bool found = false;
    for (const auto& f : v.findings)
        if (f.prime == 13) {
            found = true;
            CHECK(f.sigma_value == 14);
            CHECK(f.two_valuation == 1);
            REQUIRE(f.foreign_prime.has_value());
            CHECK(*f.foreign_prime == 7);
        }
    CHECK(found);

    // sigma(29) = 30 = 2*3*5 needs {3,5} inside the even part
    FilterVerdict w = opn::support_filter(opn::parse_shape("5^2*13^2*53^2@29^1"));
    REQUIRE(w.outcome == Outcome::reject);
    for (const auto& f : w.findings)
        if (f.prime == 29) {
            CHECK(f.sigma_value == 30);
            REQUIRE(f.foreign_prime.has_value());
            CHECK(*f.foreign_prime == 3);
        }

    // sigma(3^2) = 13 is odd: the even-part oddness requirement holds
    for (const auto& f : w.findings)
        if (f.prime == 5) CHECK(f.two_valuation == 0);
}

TEST_CASE("support filter flags a wrong 2-adic valuation on the special sigma") {
    // sigma(7) = 8 = 2^3
    FilterVerdict v = opn::support_filter(opn::parse_shape("3^2*5^2@7^1"));
    REQUIRE(v.outcome == Outcome::reject);
    const auto& special = v.findings.back();
    CHECK(special.prime == 7);
    CHECK(special.sigma_value == 8);
    CHECK(special.two_valuation == 3);
    CHECK_FALSE(special.ok);
}

TEST_CASE("support filter needs exact exponents standalone but is skipped in pipelines") {
    ShapeSpec parity = opn::parse_shape("5^2*13^2*53^2@29^odd");
    CHECK_THROWS_AS(opn::support_filter(parity), std::invalid_argument);
    FilterVerdict v = opn::apply_criterion(Criterion::support, parity, {});
    CHECK(v.outcome == Outcome::inconclusive);
    CHECK(v.inconclusive_kind == InconclusiveKind::not_applicable);
}

TEST_CASE("support filter degrades to inconclusive when the budget dies") {
    // sigma(1000193^2) = 27127 * 36877909 and (q+1)/2 = 1000003 * 1000213:
    // no factor below the trial bound, hopeless for a 4-iteration budget
    ShapeSpec shape = opn::parse_shape("1000193^2@2000432001277^1");
    FilterVerdict v = opn::support_filter(shape, {.rho_iterations = 4});
    CHECK(v.outcome == Outcome::inconclusive);
    CHECK(v.inconclusive_kind == InconclusiveKind::budget_exhausted);
    for (const auto& f : v.findings) CHECK(f.inconclusive);

    // with a real budget the same shape is decided (foreign prime found)
    FilterVerdict w = opn::support_filter(shape, {.rho_iterations = 1'000'000});
    CHECK(w.outcome == Outcome::reject);
}

TEST_CASE("parity entries reproduce the proof mechanism on pinned cases") {
    // special 29, beta = 1: sigma = 30, strip the 2, odd part 15 = 3 * 5
    opn::ParityEntry e = opn::parity_entry(P(29), 1);
    CHECK(e.sigma_value == 30);
    CHECK(e.two_valuation == 1);
    REQUIRE(e.odd_multiplicity_symbols.size() == 2);
    CHECK(e.odd_multiplicity_symbols[0].first == 3);
    CHECK(sym(e.odd_multiplicity_symbols[0].second) == -1);
    CHECK(e.odd_multiplicity_symbols[1].first == 5);
    CHECK(sym(e.odd_multiplicity_symbols[1].second) == 1);
    CHECK(e.nonresidue_count == 1);
    CHECK(e.expected_parity == 1);  // (2|29) = -1 and the valuation is odd
    CHECK(e.consistent);

    // p = 3, a = 2: sigma = 13 prime, (13|3) = (1|3) = +1
    opn::ParityEntry f = opn::parity_entry(P(3), 2);
    CHECK(f.sigma_value == 13);
    CHECK(f.two_valuation == 0);
    CHECK(f.nonresidue_count == 0);
    CHECK(f.expected_parity == 0);
    CHECK(f.consistent);

    // a = 0: sigma = 1, empty factorization, parity 0
    opn::ParityEntry g = opn::parity_entry(P(7), 0);
    CHECK(g.sigma_value == 1);
    CHECK(g.odd_multiplicity_symbols.empty());
    CHECK(g.expected_parity == 0);
    CHECK(g.consistent);
}

TEST_CASE("parity certificate is consistent on exact shapes") {
    opn::ParityCertificate cert = opn::parity_certificate(opn::parse_shape("5^2*13^2*53^2@29^1"));
    CHECK(cert.all_consistent);
    CHECK_FALSE(cert.any_inconclusive);
    REQUIRE(cert.entries.size() == 4);
    CHECK(cert.entries.back().prime == 29);

    FilterVerdict v = opn::parity_certificate_filter(opn::parse_shape("5^2*13^2*53^2@29^1"));
    CHECK(v.outcome == Outcome::pass);

    CHECK_THROWS_AS(opn::parity_certificate(opn::parse_shape("5*13@29^odd")),
                    std::invalid_argument);
}

TEST_CASE("parity certificate is consistent across random exact shapes") {
    opn::SplitMix64 rng(29);
    auto primes = oracles::sieve_primes(300);
    for (int t = 0; t < 60; t++) {
        uint64_t p = primes[1 + rng.below(primes.size() - 1)];
        unsigned a = static_cast<unsigned>(1 + rng.below(9));
        opn::ParityEntry e = opn::parity_entry(P(p), a, {.rho_iterations = 5'000'000});
        if (e.inconclusive) continue;
        CAPTURE(p);
        CAPTURE(a);
        CHECK(e.consistent);
    }
}

TEST_CASE("parity certificate reports inconclusive entries under a tiny budget") {
    opn::ParityCertificate cert =
        opn::parity_certificate(opn::parse_shape("3^2*5^2@101^41"), {.rho_iterations = 4});
    CHECK(cert.any_inconclusive);
    CHECK_FALSE(cert.all_consistent);

    FilterVerdict v =
        opn::parity_certificate_filter(opn::parse_shape("3^2*5^2@101^41"), {.rho_iterations = 4});
    CHECK(v.outcome == Outcome::inconclusive);
    CHECK(v.inconclusive_kind == InconclusiveKind::budget_exhausted);
}

TEST_CASE("parity mechanism sweep finds no counterexample") {
    opn::SweepReport report = opn::verify_parity_mechanism(2000, 123);
    CHECK(report.trials == 2000);
    CHECK(report.ok());

    // deterministic in the seed
    opn::SweepReport again = opn::verify_parity_mechanism(2000, 123);
    CHECK(again.trials == report.trials);
    CHECK(again.failure_count == report.failure_count);
}

TEST_CASE("euler form filter on shapes") {
    CHECK(opn::euler_form_filter(opn::parse_shape("3^2*5^2@13^1")).outcome == Outcome::pass);

    FilterVerdict l5 = opn::euler_form_filter(opn::parse_shape("3^2*5^2@7^1"));
    REQUIRE(l5.outcome == Outcome::reject);
    CHECK(l5.reason.find("L5") != std::string::npos);

    FilterVerdict l4 = opn::euler_form_filter(opn::parse_shape("3^2*5^2@13^3"));
    REQUIRE(l4.outcome == Outcome::reject);
    CHECK(l4.reason.find("L4") != std::string::npos);

    FilterVerdict l6 = opn::euler_form_filter(opn::parse_shape("3^2@13^1"));
    REQUIRE(l6.outcome == Outcome::reject);
    CHECK(l6.reason.find("L6") != std::string::npos);
}

TEST_CASE("theorem1 rejects a vacuous even part inside its residue class") {
    // no even-part primes: an odd count of non-residues among zero primes
    // cannot exist, so the hypothesis shape is excluded
    ShapeSpec shape{{}, P(29), std::nullopt};
    CHECK(opn::theorem1_filter(shape).outcome == Outcome::reject);
}

TEST_CASE("criterion names round trip") {
    for (Criterion c : {Criterion::euler_form, Criterion::theorem1, Criterion::theorem2,
                        Criterion::support, Criterion::parity_certificate})
        CHECK(opn::criterion_from_string(opn::to_string(c)) == c);
    CHECK_THROWS_AS(opn::criterion_from_string("theorem3"), std::invalid_argument);
}
