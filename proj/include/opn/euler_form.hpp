#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "opn/factor.hpp"

namespace opn {

// L1 is the divisor-count formula; the structural report covers the rest.
enum class LemmaId { L0, L1, L2, L3, L4, L5, L6 };

LemmaId lemma_from_string(std::string_view s);  // throws std::invalid_argument
std::string to_string(LemmaId id);

enum class LemmaStatus { satisfied, violated };

struct LemmaVerdict {
    LemmaId id;
    LemmaStatus status;
    std::string witness;  // nonempty iff violated; names the offending prime/exponent
};

struct EulerFormReport {
    std::vector<LemmaVerdict> lemmas;  // L0, L2, L3, L4, L5, L6 in order
    bool overall = false;              // true iff every status is satisfied
};

// Structural necessary conditions on an odd factorization:
//   L0  more than one distinct prime
//   L2  not all exponents even
//   L3  exactly one exponent odd
//   L4  the odd exponent is 1 (mod 4)
//   L5  the prime carrying the odd exponent is 1 (mod 4)
//   L6  at least three distinct primes
// Overall "satisfied" means "not excluded by these conditions"; it never
// asserts perfection. A factorization containing 2 is a domain error.
EulerFormReport check_euler_form(const Factorization& f);

// Outcome of a bounded numeric sweep; zero failures expected everywhere.
struct SweepReport {
    std::string check;
    uint64_t trials = 0;
    uint64_t failure_count = 0;
    std::vector<std::string> failures;  // first few witnesses

    bool ok() const { return failure_count == 0; }

    void add_failure(std::string witness) {
        failure_count++;
        if (failures.size() < 20) failures.push_back(std::move(witness));
    }
};

// Runs one lemma's numeric consequence over a bounded domain. Default bounds:
//   L0  sigma(p^a) != 2 p^a            for primes p < 1000, 1 <= a <= 20
//   L1  divisor_count == enumeration   for all n <= 10^5
//   L2  all exponents even => sigma odd     for odd n <= 10^6
//   L3  >= 2 odd exponents => 4 | sigma(n)  for odd n <= 10^6
//   L4  4 | sigma(q^b)  for odd primes q < 500, b = 3 (mod 4), b <= 19
//   L5  4 | sigma(q^b)  for primes q = 3 (mod 4), q < 500, b = 1 (mod 4), b <= 17
//   L6  no p^a q^b is perfect, odd p != q < 100, even a <= 8, odd b <= 9
// `bound` overrides the principal bound (prime bound for L0/L4/L5/L6, the n
// ceiling for L1/L2/L3); exponent grids are fixed.
SweepReport verify_lemma(LemmaId id, std::optional<uint64_t> bound = {});

}  // namespace opn
