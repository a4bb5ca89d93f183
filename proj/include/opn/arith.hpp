#pragma once

#include <compare>
#include <utility>

#include "opn/int_util.hpp"

namespace opn {

// Value of a Legendre/Jacobi symbol: 0 exactly when the modulus divides the
// numerator.
enum class SymbolValue : int { minus_one = -1, zero = 0, plus_one = 1 };

constexpr int to_int(SymbolValue s) { return static_cast<int>(s); }
SymbolValue symbol_from_int(int v);  // throws std::domain_error off {-1,0,1}

// An odd prime >= 3, validated on construction against factor's primality
// test. trusted() skips the check for primes that come out of a sieve.
class OddPrime {
public:
    explicit OddPrime(Int value);
    static OddPrime trusted(Int value) { return OddPrime(std::move(value), 0); }

    const Int& value() const { return v_; }

    bool operator==(const OddPrime& o) const { return v_ == o.v_; }
    bool operator<(const OddPrime& o) const { return v_ < o.v_; }

private:
    OddPrime(Int value, int) : v_(std::move(value)) {}
    Int v_;
};

// base^exponent mod modulus in O(log exponent) multiplications.
// modulus >= 2, exponent >= 0; mod_pow(x, 0, m) == 1 for every x.
Int mod_pow(const Int& base, const Int& exponent, const Int& modulus);

// Euler's criterion: a^((p-1)/2) mod p, read as {-1, 0, +1}. Inputs are
// reduced mod p first.
SymbolValue legendre(const Int& a, const OddPrime& p);

// (2/q) by the closed form (-1)^((q^2-1)/8): -1 iff q = 3,5 (mod 8).
SymbolValue legendre_two(const OddPrime& q);

// Jacobi symbol over odd n >= 1 by the binary reciprocity reduction loop;
// agrees with legendre() whenever n is prime. Even or nonpositive n is a
// domain error.
SymbolValue jacobi(const Int& a, const Int& n);

// ((p2/p1), (p1/p2)). When p1 = p2 = 3 (mod 4) the two values are opposite;
// otherwise they are equal. p1 == p2 is a domain error.
std::pair<SymbolValue, SymbolValue> reciprocity_pair(const OddPrime& p1, const OddPrime& p2);

}  // namespace opn
