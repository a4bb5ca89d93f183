#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "opn/int_util.hpp"

namespace opn {

// One prime with a positive exponent; the atom of all factorizations.
struct PrimePower {
    Int prime;
    unsigned exponent = 1;

    bool operator==(const PrimePower&) const = default;
};

// Canonical factorization: parts strictly ascending by prime, exponents >= 1.
// The empty list represents 1.
class Factorization {
public:
    Factorization() = default;

    // Validates ordering, exponents and primality of every part.
    static Factorization from_parts(std::vector<PrimePower> parts);
    // Skips the primality checks; for parts produced by factorize() itself.
    static Factorization trusted(std::vector<PrimePower> parts);

    const std::vector<PrimePower>& parts() const { return parts_; }
    bool empty() const { return parts_.empty(); }
    std::size_t size() const { return parts_.size(); }

    Int value() const;

    bool operator==(const Factorization&) const = default;

private:
    std::vector<PrimePower> parts_;
};

// Exact below 2^64 (fixed deterministic Miller-Rabin witness set); above that
// probabilistic with `rounds` rounds over the first `rounds` prime bases.
bool is_prime(const Int& n, unsigned rounds = 40);
bool is_prime_u64(uint64_t n);

struct FactorBudget {
    uint64_t rho_iterations = 1'000'000;  // total Pollard-Brent evaluations per call
    uint64_t seed = 0;
    unsigned mr_rounds = 40;
};

// Result of factorize(): cofactor == 1 means complete; otherwise `factors`
// holds what was pulled out and `cofactor` the remaining composite.
struct FactorOutcome {
    Factorization factors;
    Int cofactor = 1;
    uint64_t iterations_used = 0;

    bool complete() const { return cofactor == 1; }
};

// Trial division up to a small bound, then seeded Pollard-Brent within the
// budget. Never throws on hard inputs; budget exhaustion is reported through
// the outcome. n <= 0 is a domain error.
FactorOutcome factorize(const Int& n, const FactorBudget& budget = {});

// 1 + p + ... + p^a via the closed form (p^(a+1) - 1) / (p - 1), exactly.
Int sigma_prime_power(const Int& p, unsigned long a);

// Multiplicative sum of divisors; sigma(1) = 1.
Int sigma(const Factorization& f);

// (a_1 + 1) * ... * (a_k + 1)
Int divisor_count(const Factorization& f);

enum class NumberKind { deficient, perfect, abundant };

struct Classification {
    NumberKind kind;
    Int aliquot_sum;  // sigma(n) - n
};

struct ClassifyResult {
    FactorOutcome factorization;
    Int sigma_value = 0;                          // valid iff complete
    std::optional<Classification> classification; // nullopt iff budget ran out
};

// n >= 2; throws std::domain_error otherwise.
ClassifyResult classify(const Int& n, const FactorBudget& budget = {});

// Primes below `limit` (simple sieve); used for trial division and sweeps.
std::vector<uint32_t> primes_below(uint32_t limit);

// Grammar error with the offset of the offending character.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t position, const std::string& message)
        : std::runtime_error("position " + std::to_string(position) + ": " + message),
          position_(position) {}

    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

// Text grammar: `p^e` terms joined by `*`, primes strictly ascending, `^1`
// may be omitted, e.g. "3^2*7^2*13". Rejects non-primes, duplicates and
// descending order with a positioned ParseError.
Factorization parse_factorization(std::string_view text);
std::string to_string(const Factorization& f);
std::string to_string(NumberKind kind);

}  // namespace opn
