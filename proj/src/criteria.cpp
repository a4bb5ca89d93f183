#include "opn/criteria.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace opn {

bool ShapeSpec::exact() const {
    if (!special_exponent) return false;
    return std::all_of(even_part.begin(), even_part.end(),
                       [](const ShapeTerm& t) { return t.exponent.has_value(); });
}

std::vector<OddPrime> ShapeSpec::support() const {
    std::vector<OddPrime> s;
    s.reserve(even_part.size() + 1);
    for (const auto& term : even_part) s.push_back(term.prime);
    s.push_back(special);
    return s;
}

void ShapeSpec::validate() const {
    for (std::size_t i = 0; i < even_part.size(); i++) {
        const auto& term = even_part[i];
        if (i > 0 && !(even_part[i - 1].prime < term.prime))
            throw std::domain_error("shape: even-part primes must be strictly ascending");
        if (term.prime == special)
            throw std::domain_error("shape: special prime duplicated in even part");
        if (term.exponent && (*term.exponent % 2 != 0 || *term.exponent < 2))
            throw std::domain_error("shape: even-part exponents must be even and >= 2");
    }
    if (special_exponent && *special_exponent % 2 != 1)
        throw std::domain_error("shape: special exponent must be odd");
}

namespace {

Int parse_number(std::string_view text, std::size_t& pos) {
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) pos++;
    if (pos == start) throw ParseError(start, "expected a decimal number");
    return Int(std::string(text.substr(start, pos - start)), 10);
}

OddPrime checked_odd_prime(Int value, std::size_t pos) {
    if (mpz_even_p(value.get_mpz_t()) || value < 3 || !is_prime(value))
        throw ParseError(pos, value.get_str() + " is not an odd prime");
    return OddPrime::trusted(std::move(value));
}

}  // namespace

ShapeSpec parse_shape(std::string_view text) {
    if (text.empty()) throw ParseError(0, "empty shape");

    std::vector<ShapeTerm> even_part;
    std::size_t pos = 0;
    while (true) {
        if (pos < text.size() && text[pos] == '@') {
            if (even_part.empty()) throw ParseError(pos, "shape needs an even part before '@'");
            break;
        }
        std::size_t term_pos = pos;
        OddPrime prime = checked_odd_prime(parse_number(text, pos), term_pos);
        if (!even_part.empty()) {
            if (prime == even_part.back().prime)
                throw ParseError(term_pos, "duplicate prime " + prime.value().get_str());
            if (prime < even_part.back().prime)
                throw ParseError(term_pos, "primes must be strictly ascending");
        }
        std::optional<unsigned> exponent;
        if (pos < text.size() && text[pos] == '^') {
            pos++;
            std::size_t exp_pos = pos;
            Int e = parse_number(text, pos);
            if (!e.fits_uint_p()) throw ParseError(exp_pos, "exponent too large");
            unsigned ev = static_cast<unsigned>(e.get_ui());
            if (ev % 2 != 0 || ev < 2)
                throw ParseError(exp_pos, "even-part exponent must be even and >= 2");
            exponent = ev;
        }
        even_part.push_back({std::move(prime), exponent});

        if (pos >= text.size()) throw ParseError(pos, "expected '@special' after even part");
        if (text[pos] == '*') {
            pos++;
            continue;
        }
        if (text[pos] != '@') throw ParseError(pos, "expected '*' or '@'");
    }

    pos++;  // consume '@'
    std::size_t special_pos = pos;
    OddPrime special = checked_odd_prime(parse_number(text, pos), special_pos);
    for (const auto& term : even_part)
        if (term.prime == special)
            throw ParseError(special_pos, "special prime duplicated in even part");

    std::optional<unsigned> special_exponent;
    if (pos < text.size() && text[pos] == '^') {
        pos++;
        std::size_t exp_pos = pos;
        if (text.substr(pos, 3) == "odd") {
            pos += 3;  // explicit parity-only marker
        } else {
            Int e = parse_number(text, pos);
            if (!e.fits_uint_p()) throw ParseError(exp_pos, "exponent too large");
            unsigned ev = static_cast<unsigned>(e.get_ui());
            if (ev % 2 != 1) throw ParseError(exp_pos, "special exponent must be odd");
            special_exponent = ev;
        }
    }
    if (pos != text.size()) throw ParseError(pos, "trailing characters after shape");

    ShapeSpec shape{std::move(even_part), std::move(special), special_exponent};
    shape.validate();
    return shape;
}

std::string to_string(const ShapeSpec& shape) {
    std::string out;
    for (const auto& term : shape.even_part) {
        if (!out.empty()) out += '*';
        out += term.prime.value().get_str();
        if (term.exponent) {
            out += '^';
            out += std::to_string(*term.exponent);
        }
    }
    out += '@';
    out += shape.special.value().get_str();
    out += '^';
    out += shape.special_exponent ? std::to_string(*shape.special_exponent) : "odd";
    return out;
}

bool ResidueMatrix::any_plus_one() const {
    return std::any_of(entries.begin(), entries.end(),
                       [](SymbolValue s) { return s == SymbolValue::plus_one; });
}

ResidueMatrix residue_matrix(const std::vector<OddPrime>& primes) {
    for (std::size_t i = 0; i < primes.size(); i++)
        for (std::size_t j = i + 1; j < primes.size(); j++)
            if (primes[i] == primes[j]) throw std::domain_error("residue matrix: duplicate primes");

    ResidueMatrix m;
    m.primes = primes;
    m.entries.resize(primes.size() * primes.size(), SymbolValue::zero);
    for (std::size_t i = 0; i < primes.size(); i++)
        for (std::size_t j = 0; j < primes.size(); j++)
            if (i != j) m.entries[i * primes.size() + j] = legendre(primes[i].value(), primes[j]);
    return m;
}

Criterion criterion_from_string(std::string_view s) {
    if (s == "euler_form") return Criterion::euler_form;
    if (s == "theorem1") return Criterion::theorem1;
    if (s == "theorem2") return Criterion::theorem2;
    if (s == "support") return Criterion::support;
    if (s == "parity_certificate") return Criterion::parity_certificate;
    throw std::invalid_argument("unknown criterion: " + std::string(s));
}

std::string to_string(Criterion c) {
    switch (c) {
        case Criterion::euler_form: return "euler_form";
        case Criterion::theorem1: return "theorem1";
        case Criterion::theorem2: return "theorem2";
        case Criterion::support: return "support";
        case Criterion::parity_certificate: return "parity_certificate";
    }
    return "?";
}

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::pass: return "pass";
        case Outcome::reject: return "reject";
        case Outcome::inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

FilterVerdict not_applicable(Criterion c, const std::string& reason) {
    return {.criterion = c,
            .outcome = Outcome::inconclusive,
            .inconclusive_kind = InconclusiveKind::not_applicable,
            .reason = reason};
}

}  // namespace

FilterVerdict theorem1_filter(const ShapeSpec& shape) {
    shape.validate();
    unsigned long m8 = mpz_fdiv_ui(shape.special.value().get_mpz_t(), 8);
    if (m8 != 5)
        return not_applicable(Criterion::theorem1, "special prime is " + std::to_string(m8) +
                                                       " (mod 8); theorem needs 5");

    FilterVerdict v{.criterion = Criterion::theorem1, .outcome = Outcome::pass};
    bool all_squares = true;
    std::vector<std::pair<Int, SymbolValue>> symbols;
    for (const auto& term : shape.even_part) {
        SymbolValue s = legendre(term.prime.value(), shape.special);
        symbols.emplace_back(term.prime.value(), s);
        if (s != SymbolValue::plus_one) all_squares = false;
    }
    if (all_squares) {
        v.outcome = Outcome::reject;
        v.symbols = std::move(symbols);
        v.reason = "every even-part prime is a square mod " + shape.special.value().get_str() +
                   "; the required odd count of non-residues is impossible";
    }
    return v;
}

FilterVerdict theorem2_filter(const ShapeSpec& shape) {
    shape.validate();
    unsigned long m8 = mpz_fdiv_ui(shape.special.value().get_mpz_t(), 8);
    if (m8 != 1)
        return not_applicable(Criterion::theorem2, "special prime is " + std::to_string(m8) +
                                                       " (mod 8); theorem needs 1");

    FilterVerdict v{.criterion = Criterion::theorem2, .outcome = Outcome::pass};
    ResidueMatrix m = residue_matrix(shape.support());
    if (!m.any_plus_one()) {
        v.outcome = Outcome::reject;
        v.reason = "no prime of the shape is a nonzero square mod any other";
        v.matrix = std::move(m);
    }
    return v;
}

FilterVerdict euler_form_filter(const ShapeSpec& shape) {
    shape.validate();
    std::vector<std::string> violations;
    if (shape.even_part.empty())
        violations.push_back("L0: single prime power");
    if (shape.even_part.size() < 2)
        violations.push_back("L6: only " + std::to_string(shape.even_part.size() + 1) +
                             " distinct primes");
    if (shape.special_exponent && *shape.special_exponent % 4 != 1)
        violations.push_back("L4: special exponent " + std::to_string(*shape.special_exponent) +
                             " is 3 (mod 4)");
    if (mpz_fdiv_ui(shape.special.value().get_mpz_t(), 4) != 1)
        violations.push_back("L5: special prime " + shape.special.value().get_str() +
                             " is 3 (mod 4)");

    FilterVerdict v{.criterion = Criterion::euler_form, .outcome = Outcome::pass};
    if (!violations.empty()) {
        v.outcome = Outcome::reject;
        std::string joined;
        for (const auto& s : violations) {
            if (!joined.empty()) joined += "; ";
            joined += s;
        }
        v.reason = joined;
    }
    return v;
}

namespace {

// Factors sigma(prime^exponent) and checks 2-valuation and support inclusion.
SupportFinding examine_part(const Int& prime, unsigned exponent, const std::vector<Int>& allowed,
                            unsigned required_two_valuation, const FactorBudget& budget) {
    SupportFinding finding{.prime = prime, .exponent = exponent};
    finding.sigma_value = sigma_prime_power(prime, exponent);
    finding.two_valuation =
        static_cast<unsigned>(mpz_scan1(finding.sigma_value.get_mpz_t(), 0));

    if (finding.two_valuation != required_two_valuation) {
        finding.note = "sigma has 2-adic valuation " + std::to_string(finding.two_valuation) +
                       ", required " + std::to_string(required_two_valuation);
        return finding;
    }

    Int odd_part = finding.sigma_value >> finding.two_valuation;
    FactorOutcome outcome = factorize(odd_part, budget);
    // a foreign prime among the known factors excludes the shape even if the
    // cofactor stayed composite
    for (const auto& part : outcome.factors.parts()) {
        if (std::find(allowed.begin(), allowed.end(), part.prime) == allowed.end()) {
            finding.foreign_prime = part.prime;
            finding.note = "sigma contains prime " + part.prime.get_str() + " outside the shape";
            return finding;
        }
    }
    if (!outcome.complete()) {
        finding.inconclusive = true;
        finding.note = "factoring budget exhausted; composite cofactor " + outcome.cofactor.get_str();
        return finding;
    }
    finding.ok = true;
    return finding;
}

}  // namespace

FilterVerdict support_filter(const ShapeSpec& shape, const FactorBudget& budget) {
    shape.validate();
    if (!shape.exact())
        throw std::invalid_argument("support filter needs exact exponents");

    std::vector<Int> full_support, even_support;
    for (const auto& term : shape.even_part) {
        full_support.push_back(term.prime.value());
        even_support.push_back(term.prime.value());
    }
    full_support.push_back(shape.special.value());

    FilterVerdict v{.criterion = Criterion::support, .outcome = Outcome::pass};
    // sigma of an even-exponent part divides 2n and is odd: support stays
    // inside the shape. sigma of the special part carries exactly one 2.
    for (const auto& term : shape.even_part)
        v.findings.push_back(examine_part(term.prime.value(), *term.exponent, full_support, 0, budget));
    v.findings.push_back(
        examine_part(shape.special.value(), *shape.special_exponent, even_support, 1, budget));

    bool any_inconclusive = false;
    for (const auto& finding : v.findings) {
        if (finding.inconclusive) {
            any_inconclusive = true;
        } else if (!finding.ok) {
            v.outcome = Outcome::reject;
            v.reason = "sigma(" + finding.prime.get_str() + "^" + std::to_string(finding.exponent) +
                       ") = " + finding.sigma_value.get_str() + ": " + finding.note;
            return v;
        }
    }
    if (any_inconclusive) {
        v.outcome = Outcome::inconclusive;
        v.inconclusive_kind = InconclusiveKind::budget_exhausted;
        v.reason = "factoring budget exhausted before all sigma supports were known";
        return v;
    }
    v.findings.clear();  // Pass carries no witness
    return v;
}

ParityEntry parity_entry(const OddPrime& p, unsigned exponent, const FactorBudget& budget) {
    ParityEntry entry{.prime = p.value(), .exponent = exponent};
    entry.sigma_value = sigma_prime_power(p.value(), exponent);
    entry.two_valuation = static_cast<unsigned>(mpz_scan1(entry.sigma_value.get_mpz_t(), 0));

    Int odd_part = entry.sigma_value >> entry.two_valuation;
    FactorOutcome outcome = factorize(odd_part, budget);
    if (!outcome.complete()) {
        entry.inconclusive = true;
        entry.note = "factoring budget exhausted; composite cofactor " + outcome.cofactor.get_str();
        return entry;
    }

    for (const auto& part : outcome.factors.parts()) {
        if (part.exponent % 2 == 0) continue;
        SymbolValue s = legendre(part.prime, p);  // never 0: sigma(p^a) = 1 (mod p)
        entry.odd_multiplicity_symbols.emplace_back(part.prime, s);
        if (s == SymbolValue::minus_one) entry.nonresidue_count++;
    }
    bool two_adjustment = entry.two_valuation % 2 == 1 && legendre_two(p) == SymbolValue::minus_one;
    entry.expected_parity = two_adjustment ? 1 : 0;
    entry.consistent = entry.nonresidue_count % 2 == entry.expected_parity;
    return entry;
}

ParityCertificate parity_certificate(const ShapeSpec& shape, const FactorBudget& budget) {
    shape.validate();
    if (!shape.exact())
        throw std::invalid_argument("parity certificate needs exact exponents");

    ParityCertificate cert;
    for (const auto& term : shape.even_part)
        cert.entries.push_back(parity_entry(term.prime, *term.exponent, budget));
    cert.entries.push_back(parity_entry(shape.special, *shape.special_exponent, budget));

    cert.any_inconclusive = std::any_of(cert.entries.begin(), cert.entries.end(),
                                        [](const ParityEntry& e) { return e.inconclusive; });
    cert.all_consistent = std::all_of(cert.entries.begin(), cert.entries.end(),
                                      [](const ParityEntry& e) { return e.consistent; });
    return cert;
}

FilterVerdict parity_certificate_filter(const ShapeSpec& shape, const FactorBudget& budget) {
    ParityCertificate cert = parity_certificate(shape, budget);
    FilterVerdict v{.criterion = Criterion::parity_certificate, .outcome = Outcome::pass};
    for (const auto& entry : cert.entries) {
        if (!entry.inconclusive && !entry.consistent) {
            // cannot happen for correctly computed symbols; not a sound Reject
            v.outcome = Outcome::inconclusive;
            v.inconclusive_kind = InconclusiveKind::internal;
            v.reason = "parity inconsistency at sigma(" + entry.prime.get_str() + "^" +
                       std::to_string(entry.exponent) + "); arithmetic fault";
            return v;
        }
    }
    if (cert.any_inconclusive) {
        v.outcome = Outcome::inconclusive;
        v.inconclusive_kind = InconclusiveKind::budget_exhausted;
        v.reason = "factoring budget exhausted before all parities were certified";
    }
    return v;
}

SweepReport verify_parity_mechanism(uint64_t trials, uint64_t seed, uint32_t prime_bound) {
    SweepReport report{.check = "parity-mechanism"};
    std::vector<uint32_t> primes = primes_below(prime_bound);
    if (!primes.empty() && primes.front() == 2) primes.erase(primes.begin());
    if (primes.empty()) throw std::invalid_argument("parity mechanism: no odd primes below bound");

    SplitMix64 rng(seed);
    for (uint64_t t = 0; t < trials; t++) {
        uint64_t p = primes[rng.below(primes.size())];
        uint64_t x = 1 + rng.below(p - 1);
        uint64_t square = mulmod_u64(x, x, p);
        uint64_t n = square + p * rng.below(1000);

        report.trials++;
        OddPrime prime = OddPrime::trusted(from_u64(p));
        if (legendre(from_u64(n), prime) != SymbolValue::plus_one) {
            report.add_failure("legendre(" + std::to_string(n) + ", " + std::to_string(p) +
                                            ") != +1; generator broken");
            continue;
        }
        FactorOutcome outcome = factorize(from_u64(n));
        unsigned nonresidues = 0;
        for (const auto& part : outcome.factors.parts())
            if (part.exponent % 2 == 1 && legendre(part.prime, prime) == SymbolValue::minus_one)
                nonresidues++;
        if (nonresidues % 2 != 0)
            report.add_failure("p=" + std::to_string(p) + " n=" + std::to_string(n) +
                                            ": odd non-residue count " + std::to_string(nonresidues));
    }
    return report;
}

}  // namespace opn
