#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "opn/criteria.hpp"

namespace opn {

struct ScanOptions {
    uint64_t block_size = 1ull << 22;   // cells per sieve block
    unsigned jobs = 1;                  // worker threads over disjoint blocks
    bool odd_only = false;              // sieve and test odd n only
    uint64_t ceiling = 100'000'000;     // desk-scale end bound
};

struct ScanReport {
    uint64_t start = 0;
    uint64_t end = 0;
    std::vector<uint64_t> perfect_found;      // ascending; sigma(n) == 2n
    std::vector<uint64_t> odd_perfect_found;  // subset of perfect_found
    double elapsed_seconds = 0.0;
    double throughput = 0.0;  // numbers per second
};

// Divisor sums sigma(n) for n in [lo, hi), accumulated by walking divisor
// pairs; with odd_only only odd positions are meaningful. This is the
// additive route to sigma, independent of factorize().
std::vector<uint64_t> divisor_sums(uint64_t lo, uint64_t hi, bool odd_only = false);

// Blocked divisor-sum sieve over [start, end]; no per-number factorization.
// Requires 2 <= start <= end <= ceiling (std::invalid_argument otherwise).
ScanReport scan_perfect(uint64_t start, uint64_t end, const ScanOptions& options = {});

// Pull-based shape stream; returns nullopt when exhausted.
using ShapeSource = std::function<std::optional<ShapeSpec>()>;

struct ShapeEnumOptions {
    unsigned max_k = 3;          // largest even-part size; >= 2
    unsigned exponent_bound = 0; // 0 = parity-only; else attach even a <= bound, odd b <= bound
};

// Streams every (special prime, even-part subset of size 2..max_k) choice
// over a pool of distinct odd primes, in deterministic lexicographic order:
// specials ascending, subset size ascending, combinations ascending, and in
// exact-exponent mode the exponent grid in odometer order. Duplicates or a 2
// in the pool are a domain error; max_k < 2 is a usage error.
class ShapeEnumerator {
public:
    ShapeEnumerator(std::vector<OddPrime> pool, ShapeEnumOptions options = {});

    std::optional<ShapeSpec> next();

    // remaining-stream adapter
    ShapeSource source() {
        return [this] { return next(); };
    }

private:
    void reset_exponents();
    bool advance_exponents();
    bool advance_combination();

    std::vector<OddPrime> pool_;
    ShapeEnumOptions opt_;
    std::size_t special_ = 0;      // index into pool_
    std::size_t subset_size_ = 2;
    std::vector<std::size_t> combo_;     // indices into pool_ minus special
    std::vector<unsigned> exponents_;    // even part exponents, then special's
    bool done_ = false;
};

struct PipelineOptions {
    std::size_t survivor_cap = 10'000;
    unsigned jobs = 1;
};

struct PipelineStats {
    uint64_t shapes_in = 0;
    // aligned with the criteria list the pipeline ran, in that order
    std::vector<std::pair<Criterion, uint64_t>> rejected_by;
    uint64_t inconclusive = 0;     // undecided for budget/internal reasons
    uint64_t survivor_count = 0;
    std::vector<ShapeSpec> survivors;  // first survivor_cap survivors
};

// Verdicts computed for one shape, in criteria order up to the first Reject.
using VerdictSink = std::function<void(const ShapeSpec&, const std::vector<FilterVerdict>&)>;

// Applies the criteria in order per shape, stopping at the first Reject.
// A criterion that does not apply (wrong residue class, missing exponents)
// is neutral; only budget exhaustion marks a shape inconclusive. The sink,
// when set, observes every shape in input order.
PipelineStats run_pipeline(ShapeSource shapes, const std::vector<Criterion>& criteria,
                           const FactorBudget& budget = {}, const PipelineOptions& options = {},
                           const VerdictSink& sink = {});

FilterVerdict apply_criterion(Criterion c, const ShapeSpec& shape, const FactorBudget& budget);

}  // namespace opn
