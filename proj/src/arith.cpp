#include "opn/arith.hpp"

#include <stdexcept>

#include "opn/factor.hpp"

namespace opn {

SymbolValue symbol_from_int(int v) {
    if (v < -1 || v > 1) throw std::domain_error("symbol value must be -1, 0 or +1");
    return static_cast<SymbolValue>(v);
}

OddPrime::OddPrime(Int value) : v_(std::move(value)) {
    if (v_ < 3 || mpz_even_p(v_.get_mpz_t()) || !is_prime(v_))
        throw std::domain_error("not an odd prime: " + v_.get_str());
}

Int mod_pow(const Int& base, const Int& exponent, const Int& modulus) {
    if (modulus < 2) throw std::domain_error("mod_pow: modulus must be >= 2");
    if (exponent < 0) throw std::domain_error("mod_pow: exponent must be >= 0");
    Int r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(), modulus.get_mpz_t());
    return r;
}

SymbolValue legendre(const Int& a, const OddPrime& p) {
    const Int& q = p.value();
    Int r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t());
    if (r == 0) return SymbolValue::zero;
    Int e = mod_pow(r, (q - 1) >> 1, q);
    if (e == 1) return SymbolValue::plus_one;
    if (e == q - 1) return SymbolValue::minus_one;
    throw std::logic_error("Euler criterion off {1, p-1}; modulus not prime?");
}

SymbolValue legendre_two(const OddPrime& q) {
    unsigned long m8 = mpz_fdiv_ui(q.value().get_mpz_t(), 8);
    return (m8 == 3 || m8 == 5) ? SymbolValue::minus_one : SymbolValue::plus_one;
}

namespace {

// Binary Jacobi loop over 64-bit values; a already reduced into [0, n).
int jacobi_u64(uint64_t a, uint64_t n) {
    int sign = 1;
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            uint64_t m8 = n & 7;
            if (m8 == 3 || m8 == 5) sign = -sign;
        }
        std::swap(a, n);
        if ((a & 3) == 3 && (n & 3) == 3) sign = -sign;
        a %= n;
    }
    return n == 1 ? sign : 0;
}

}  // namespace

SymbolValue jacobi(const Int& a, const Int& n) {
    if (n <= 0 || mpz_even_p(n.get_mpz_t()))
        throw std::domain_error("jacobi: denominator must be odd and positive");
    Int r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
    if (fits_u64(n)) return symbol_from_int(jacobi_u64(to_u64(r), to_u64(n)));

    Int num = r, den = n;
    int sign = 1;
    while (num != 0) {
        unsigned long twos = mpz_scan1(num.get_mpz_t(), 0);
        if (twos > 0) {
            num >>= twos;
            unsigned long m8 = mpz_fdiv_ui(den.get_mpz_t(), 8);
            if ((twos & 1) && (m8 == 3 || m8 == 5)) sign = -sign;
        }
        mpz_swap(num.get_mpz_t(), den.get_mpz_t());
        if (mpz_fdiv_ui(num.get_mpz_t(), 4) == 3 && mpz_fdiv_ui(den.get_mpz_t(), 4) == 3)
            sign = -sign;
        mpz_mod(num.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    }
    return symbol_from_int(den == 1 ? sign : 0);
}

std::pair<SymbolValue, SymbolValue> reciprocity_pair(const OddPrime& p1, const OddPrime& p2) {
    if (p1 == p2) throw std::domain_error("reciprocity_pair: primes must be distinct");
    return {legendre(p2.value(), p1), legendre(p1.value(), p2)};
}

}  // namespace opn
