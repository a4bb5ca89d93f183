#include "opn/factor.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>

namespace opn {

std::vector<uint32_t> primes_below(uint32_t limit) {
    std::vector<uint32_t> primes;
    if (limit <= 2) return primes;
    std::vector<char> composite(limit, 0);
    for (uint32_t i = 2; static_cast<uint64_t>(i) * i < limit; i++)
        if (!composite[i])
            for (uint64_t j = static_cast<uint64_t>(i) * i; j < limit; j += i) composite[j] = 1;
    for (uint32_t i = 2; i < limit; i++)
        if (!composite[i]) primes.push_back(i);
    return primes;
}

namespace {

const std::vector<uint32_t>& small_primes() {
    static const std::vector<uint32_t> primes = primes_below(10'000);
    return primes;
}

// Deterministic for all n < 2^64 (first twelve prime bases).
constexpr uint64_t kMrBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

bool mr_composite_u64(uint64_t n, uint64_t base, uint64_t d, int r) {
    uint64_t x = powmod_u64(base % n, d, n);
    if (x == 1 || x == n - 1) return false;
    for (int i = 1; i < r; i++) {
        x = mulmod_u64(x, x, n);
        if (x == n - 1) return false;
    }
    return true;
}

}  // namespace

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) d >>= 1, r++;
    for (uint64_t base : kMrBases)
        if (mr_composite_u64(n, base, d, r)) return false;
    return true;
}

bool is_prime(const Int& n, unsigned rounds) {
    if (n < 2) return false;
    if (fits_u64(n)) return is_prime_u64(to_u64(n));
    if (mpz_even_p(n.get_mpz_t())) return false;

    Int nm1 = n - 1;
    mp_bitcnt_t r = mpz_scan1(nm1.get_mpz_t(), 0);
    Int d = nm1 >> r;

    const auto& primes = small_primes();
    rounds = std::min<unsigned>(std::max(rounds, 1u), primes.size());
    Int x;
    for (unsigned i = 0; i < rounds; i++) {
        Int base = primes[i];
        mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
        if (x == 1 || x == nm1) continue;
        bool witness = true;
        for (mp_bitcnt_t j = 1; j < r && witness; j++) {
            x = x * x % n;
            if (x == nm1) witness = false;
        }
        if (witness) return false;
    }
    return true;
}

Factorization Factorization::from_parts(std::vector<PrimePower> parts) {
    for (std::size_t i = 0; i < parts.size(); i++) {
        if (parts[i].exponent < 1) throw std::domain_error("factorization: exponent must be >= 1");
        if (!is_prime(parts[i].prime))
            throw std::domain_error("factorization: " + parts[i].prime.get_str() + " is not prime");
        if (i > 0 && !(parts[i - 1].prime < parts[i].prime))
            throw std::domain_error("factorization: primes must be strictly ascending");
    }
    return trusted(std::move(parts));
}

Factorization Factorization::trusted(std::vector<PrimePower> parts) {
    Factorization f;
    f.parts_ = std::move(parts);
    return f;
}

Int Factorization::value() const {
    Int v = 1;
    Int pw;
    for (const auto& part : parts_) {
        mpz_pow_ui(pw.get_mpz_t(), part.prime.get_mpz_t(), part.exponent);
        v *= pw;
    }
    return v;
}

namespace {

// Pollard-Brent on 64-bit values; returns a nontrivial factor, or 0 once the
// shared budget runs dry. n must be odd, composite and > 1.
uint64_t brent_u64(uint64_t n, uint64_t c, uint64_t& budget) {
    auto f = [&](uint64_t x) { return (mulmod_u64(x, x, n) + c) % n; };
    uint64_t y = 2, r = 1, q = 1, g = 1, x = 0, ys = 0;
    const uint64_t batch = 128;
    while (g == 1) {
        x = y;
        for (uint64_t i = 0; i < r; i++) {
            if (budget == 0) return 0;
            budget--;
            y = f(y);
        }
        uint64_t k = 0;
        while (k < r && g == 1) {
            ys = y;
            uint64_t steps = std::min(batch, r - k);
            for (uint64_t i = 0; i < steps; i++) {
                if (budget == 0) return 0;
                budget--;
                y = f(y);
                q = mulmod_u64(q, x > y ? x - y : y - x, n);
            }
            g = std::gcd(q, n);
            k += batch;
        }
        r *= 2;
    }
    if (g == n) {
        do {
            if (budget == 0) return 0;
            budget--;
            ys = f(ys);
            g = std::gcd(x > ys ? x - ys : ys - x, n);
        } while (g == 1);
    }
    return g == n ? 0 : g;
}

Int brent_mpz(const Int& n, unsigned long c, uint64_t& budget) {
    auto f = [&](Int& x) {
        x = x * x + c;
        mpz_mod(x.get_mpz_t(), x.get_mpz_t(), n.get_mpz_t());
    };
    Int y = 2, q = 1, g = 1, x, ys, diff;
    uint64_t r = 1;
    const uint64_t batch = 128;
    while (g == 1) {
        x = y;
        for (uint64_t i = 0; i < r; i++) {
            if (budget == 0) return 0;
            budget--;
            f(y);
        }
        uint64_t k = 0;
        while (k < r && g == 1) {
            ys = y;
            uint64_t steps = std::min(batch, r - k);
            for (uint64_t i = 0; i < steps; i++) {
                if (budget == 0) return 0;
                budget--;
                f(y);
                diff = x > y ? x - y : y - x;
                q = q * diff % n;
            }
            mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            k += batch;
        }
        r *= 2;
    }
    if (g == n) {
        do {
            if (budget == 0) return 0;
            budget--;
            f(ys);
            diff = x > ys ? x - ys : ys - x;
            mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        } while (g == 1);
    }
    return g == n ? 0 : g;
}

}  // namespace

FactorOutcome factorize(const Int& n, const FactorBudget& budget) {
    if (n <= 0) throw std::domain_error("factorize: n must be positive");

    std::map<Int, unsigned> counts;
    Int rem = n;
    uint64_t iters_left = budget.rho_iterations;

    // Trial division; switches to plain 64-bit arithmetic once possible.
    for (uint32_t p : small_primes()) {
        if (fits_u64(rem)) break;
        while (mpz_divisible_ui_p(rem.get_mpz_t(), p)) {
            counts[p]++;
            mpz_divexact_ui(rem.get_mpz_t(), rem.get_mpz_t(), p);
        }
    }

    bool trial_complete = false;
    if (fits_u64(rem)) {
        uint64_t r = to_u64(rem);
        for (uint32_t p : small_primes()) {
            if (static_cast<uint64_t>(p) * p > r) {
                trial_complete = true;
                break;
            }
            while (r % p == 0) {
                counts[p]++;
                r /= p;
            }
        }
        if (r > 1 && trial_complete) {
            counts[r]++;  // below the square of the last trial prime, hence prime
            r = 1;
        }
        rem = from_u64(r == 0 ? 1 : r);
        if (r <= 1) trial_complete = true;
    }

    Int cofactor = 1;
    if (!trial_complete && rem > 1) {
        std::vector<Int> pending{rem};
        unsigned long c = static_cast<unsigned long>(budget.seed % 1024) + 1;
        while (!pending.empty()) {
            Int m = std::move(pending.back());
            pending.pop_back();
            if (is_prime(m, budget.mr_rounds)) {
                counts[m]++;
                continue;
            }
            Int factor = 0;
            while (factor == 0 && iters_left > 0) {
                if (fits_u64(m)) {
                    uint64_t g = brent_u64(to_u64(m), c, iters_left);
                    factor = from_u64(g);
                } else {
                    factor = brent_mpz(m, c, iters_left);
                }
                c++;  // next attempt uses a fresh polynomial
            }
            if (factor == 0) {
                cofactor *= m;
                for (const auto& left : pending) cofactor *= left;
                pending.clear();
            } else {
                pending.push_back(m / factor);
                pending.push_back(std::move(factor));
            }
        }
    }

    std::vector<PrimePower> parts;
    parts.reserve(counts.size());
    for (const auto& [p, e] : counts) parts.push_back({p, e});

    FactorOutcome out;
    out.factors = Factorization::trusted(std::move(parts));
    out.cofactor = cofactor;
    out.iterations_used = budget.rho_iterations - iters_left;
    return out;
}

Int sigma_prime_power(const Int& p, unsigned long a) {
    if (a == 0) return 1;
    Int numerator;
    mpz_pow_ui(numerator.get_mpz_t(), p.get_mpz_t(), a + 1);
    numerator -= 1;
    Int result;
    Int denom = p - 1;
    mpz_divexact(result.get_mpz_t(), numerator.get_mpz_t(), denom.get_mpz_t());
    return result;
}

Int sigma(const Factorization& f) {
    Int s = 1;
    for (const auto& part : f.parts()) s *= sigma_prime_power(part.prime, part.exponent);
    return s;
}

Int divisor_count(const Factorization& f) {
    Int c = 1;
    for (const auto& part : f.parts()) c *= part.exponent + 1;
    return c;
}

ClassifyResult classify(const Int& n, const FactorBudget& budget) {
    if (n < 2) throw std::domain_error("classify: n must be >= 2");
    ClassifyResult result;
    result.factorization = factorize(n, budget);
    if (!result.factorization.complete()) return result;

    result.sigma_value = sigma(result.factorization.factors);
    Classification c;
    c.aliquot_sum = result.sigma_value - n;
    if (c.aliquot_sum == n)
        c.kind = NumberKind::perfect;
    else if (c.aliquot_sum < n)
        c.kind = NumberKind::deficient;
    else
        c.kind = NumberKind::abundant;
    result.classification = c;
    return result;
}

namespace {

Int parse_number(std::string_view text, std::size_t& pos) {
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) pos++;
    if (pos == start) throw ParseError(start, "expected a decimal number");
    return Int(std::string(text.substr(start, pos - start)), 10);
}

}  // namespace

Factorization parse_factorization(std::string_view text) {
    if (text.empty()) throw ParseError(0, "empty factorization");
    if (text == "1") return Factorization();

    std::vector<PrimePower> parts;
    std::size_t pos = 0;
    while (true) {
        std::size_t term_pos = pos;
        Int prime = parse_number(text, pos);
        if (!is_prime(prime))
            throw ParseError(term_pos, prime.get_str() + " is not prime");
        if (!parts.empty()) {
            if (prime == parts.back().prime)
                throw ParseError(term_pos, "duplicate prime " + prime.get_str());
            if (prime < parts.back().prime)
                throw ParseError(term_pos, "primes must be strictly ascending");
        }

        unsigned exponent = 1;
        if (pos < text.size() && text[pos] == '^') {
            pos++;
            std::size_t exp_pos = pos;
            Int e = parse_number(text, pos);
            if (e < 1) throw ParseError(exp_pos, "exponent must be >= 1");
            if (!e.fits_uint_p()) throw ParseError(exp_pos, "exponent too large");
            exponent = static_cast<unsigned>(e.get_ui());
        }
        parts.push_back({std::move(prime), exponent});

        if (pos == text.size()) break;
        if (text[pos] != '*') throw ParseError(pos, "expected '*' between terms");
        pos++;
    }
    return Factorization::trusted(std::move(parts));
}

std::string to_string(const Factorization& f) {
    if (f.empty()) return "1";
    std::string out;
    for (const auto& part : f.parts()) {
        if (!out.empty()) out += '*';
        out += part.prime.get_str();
        if (part.exponent != 1) {
            out += '^';
            out += std::to_string(part.exponent);
        }
    }
    return out;
}

std::string to_string(NumberKind kind) {
    switch (kind) {
        case NumberKind::deficient: return "deficient";
        case NumberKind::perfect: return "perfect";
        case NumberKind::abundant: return "abundant";
    }
    return "?";
}

}  // namespace opn
