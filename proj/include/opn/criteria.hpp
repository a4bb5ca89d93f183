#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "opn/arith.hpp"
#include "opn/euler_form.hpp"
#include "opn/factor.hpp"

namespace opn {

// One prime of a candidate shape. The exponent is optional: absent means
// parity-only (even in the even part, odd for the special prime).
struct ShapeTerm {
    OddPrime prime;
    std::optional<unsigned> exponent;

    bool operator==(const ShapeTerm&) const = default;
};

// A candidate odd-perfect shape: the p_1..p_k with even exponents plus the
// one special prime carrying the odd exponent.
struct ShapeSpec {
    std::vector<ShapeTerm> even_part;  // strictly ascending primes
    OddPrime special;
    std::optional<unsigned> special_exponent;  // odd; absent = parity-only

    // true when every even-part exponent and the special exponent are present
    bool exact() const;
    // even part followed by the special prime
    std::vector<OddPrime> support() const;
    // throws std::domain_error on duplicate primes, misordered even part, or
    // exponents of the wrong parity
    void validate() const;

    bool operator==(const ShapeSpec&) const = default;
};

// Grammar: even part in factorization syntax with even exponents (a bare
// prime is parity-only), then `@q^b` (odd b), `@q^odd`, or `@q`.
// e.g. "3^2*5^2*13^2@29^1", "5^2*13^2*53^2@29^odd".
ShapeSpec parse_shape(std::string_view text);
std::string to_string(const ShapeSpec& shape);

// Legendre symbols over every ordered pair of a prime list; diagonal fixed
// at 0, every off-diagonal entry is +-1.
struct ResidueMatrix {
    std::vector<OddPrime> primes;
    std::vector<SymbolValue> entries;  // row-major, entries[i*n + j] = (p_i / p_j)

    SymbolValue at(std::size_t i, std::size_t j) const {
        return entries[i * primes.size() + j];
    }
    bool any_plus_one() const;

    bool operator==(const ResidueMatrix&) const = default;
};

ResidueMatrix residue_matrix(const std::vector<OddPrime>& primes);

enum class Criterion { euler_form, theorem1, theorem2, support, parity_certificate };

Criterion criterion_from_string(std::string_view s);  // throws std::invalid_argument
std::string to_string(Criterion c);

enum class Outcome { pass, reject, inconclusive };

std::string to_string(Outcome o);

enum class InconclusiveKind { none, not_applicable, budget_exhausted, internal };

struct SupportFinding {
    Int prime;            // shape prime whose sigma was examined
    unsigned exponent;
    Int sigma_value;
    unsigned two_valuation;
    std::optional<Int> foreign_prime;  // first support element outside the shape
    bool ok = false;
    bool inconclusive = false;
    std::string note;
};

// Reject carries a checkable witness; Inconclusive carries a reason;
// Pass carries none. Reject is only emitted when the theorem at hand
// logically excludes the shape.
struct FilterVerdict {
    Criterion criterion;
    Outcome outcome;
    InconclusiveKind inconclusive_kind = InconclusiveKind::none;
    std::string reason;

    std::vector<std::pair<Int, SymbolValue>> symbols;  // theorem1 witness
    std::optional<ResidueMatrix> matrix;               // theorem2 witness
    std::vector<SupportFinding> findings;              // support witness
};

// Applicable when special = 5 (mod 8): rejects when every even-part prime is
// a square mod the special prime (the required odd count of non-residues is
// then impossible).
FilterVerdict theorem1_filter(const ShapeSpec& shape);

// Applicable when special = 1 (mod 8): rejects when no off-diagonal entry of
// the residue matrix over even_part + special equals +1.
FilterVerdict theorem2_filter(const ShapeSpec& shape);

// Needs exact exponents (throws std::invalid_argument otherwise): factors
// sigma of every prime power and rejects on a foreign support prime or a
// 2-adic valuation other than 1 on the special sigma. Budget exhaustion
// degrades to Inconclusive.
FilterVerdict support_filter(const ShapeSpec& shape, const FactorBudget& budget = {});

// Structural Euler-form conditions applicable to a shape (L0/L6 support
// size, L5 special residue, L4 when the special exponent is concrete).
FilterVerdict euler_form_filter(const ShapeSpec& shape);

// One prime power's parity bookkeeping: factor s = sigma(p^a), strip the
// 2-part, list the odd-multiplicity primes with their symbols mod p. The
// count of non-residues among them must be odd exactly when the 2-valuation
// is odd and (2/p) = -1.
struct ParityEntry {
    Int prime;
    unsigned exponent;
    Int sigma_value;
    unsigned two_valuation;
    std::vector<std::pair<Int, SymbolValue>> odd_multiplicity_symbols;
    unsigned nonresidue_count = 0;
    unsigned expected_parity = 0;
    bool consistent = false;
    bool inconclusive = false;
    std::string note;
};

ParityEntry parity_entry(const OddPrime& p, unsigned exponent, const FactorBudget& budget = {});

struct ParityCertificate {
    std::vector<ParityEntry> entries;  // even part in order, then the special prime
    bool all_consistent = false;
    bool any_inconclusive = false;
};

// Exact exponents required (throws std::invalid_argument otherwise).
ParityCertificate parity_certificate(const ShapeSpec& shape, const FactorBudget& budget = {});

// Pipeline adapter: Pass when all entries are consistent, Inconclusive on
// budget exhaustion. An inconsistent entry would mean broken arithmetic on
// our side, not an excluded shape, so it maps to Inconclusive(internal)
// rather than an unsound Reject.
FilterVerdict parity_certificate_filter(const ShapeSpec& shape, const FactorBudget& budget = {});

// Randomized check of the proofs' engine: for (p, N) with legendre(N,p) = +1,
// the count of odd-multiplicity non-residue primes of N is even. N is built
// as a random nonzero square mod p plus a random multiple of p.
SweepReport verify_parity_mechanism(uint64_t trials, uint64_t seed, uint32_t prime_bound = 10000);

}  // namespace opn
