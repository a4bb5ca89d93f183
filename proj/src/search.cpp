#include "opn/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <stdexcept>
#include <thread>

namespace opn {

// Walks divisor pairs (d, q), d <= q: every divisor of every n in [lo, hi)
// is visited exactly once.
std::vector<uint64_t> divisor_sums(uint64_t lo, uint64_t hi, bool odd_only) {
    std::vector<uint64_t> sums(hi - lo, 0);
    uint64_t root = isqrt_u64(hi - 1);

    if (!odd_only) {
        for (uint64_t d = 1; d <= root; d++) {
            uint64_t q = std::max((lo + d - 1) / d, d);
            uint64_t m = d * q;
            if (m >= hi) continue;
            if (q == d) {  // m = d^2 contributes d once
                sums[m - lo] += d;
                m += d;
                q++;
            }
            for (; m < hi; m += d, q++) sums[m - lo] += d + q;
        }
    } else {
        // odd n only: both members of every divisor pair are odd
        for (uint64_t d = 1; d <= root; d += 2) {
            uint64_t q = std::max((lo + d - 1) / d, d);
            if (q % 2 == 0) q++;
            uint64_t m = d * q;
            if (m >= hi) continue;
            if (q == d) {
                sums[m - lo] += d;
                m += 2 * d;
                q += 2;
            }
            for (; m < hi; m += 2 * d, q += 2) sums[m - lo] += d + q;
        }
    }
    return sums;
}

namespace {

void scan_block(uint64_t lo, uint64_t hi, bool odd_only, std::vector<uint64_t>& hits) {
    std::vector<uint64_t> sums = divisor_sums(lo, hi, odd_only);
    if (!odd_only) {
        for (uint64_t n = lo; n < hi; n++)
            if (sums[n - lo] == 2 * n) hits.push_back(n);
    } else {
        for (uint64_t n = lo | 1; n < hi; n += 2)
            if (sums[n - lo] == 2 * n) hits.push_back(n);
    }
}

}  // namespace

ScanReport scan_perfect(uint64_t start, uint64_t end, const ScanOptions& options) {
    if (start < 2 || start > end)
        throw std::invalid_argument("scan: need 2 <= start <= end");
    if (end > options.ceiling)
        throw std::invalid_argument("scan: end " + std::to_string(end) +
                                    " exceeds the desk-scale ceiling " +
                                    std::to_string(options.ceiling));
    if (options.block_size == 0) throw std::invalid_argument("scan: block size must be positive");

    auto t0 = std::chrono::steady_clock::now();

    uint64_t count = end - start + 1;
    uint64_t blocks = (count + options.block_size - 1) / options.block_size;
    std::vector<std::vector<uint64_t>> block_hits(blocks);

    std::atomic<uint64_t> next{0};
    auto worker = [&] {
        for (;;) {
            uint64_t b = next.fetch_add(1);
            if (b >= blocks) break;
            uint64_t lo = start + b * options.block_size;
            uint64_t hi = std::min(end + 1, lo + options.block_size);
            scan_block(lo, hi, options.odd_only, block_hits[b]);
        }
    };

    unsigned jobs = std::max(1u, options.jobs);
    std::vector<std::thread> threads;
    for (unsigned j = 1; j < jobs; j++) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();

    ScanReport report;
    report.start = start;
    report.end = end;
    for (auto& hits : block_hits)
        for (uint64_t n : hits) {
            report.perfect_found.push_back(n);
            if (n % 2 == 1) report.odd_perfect_found.push_back(n);
        }

    auto t1 = std::chrono::steady_clock::now();
    report.elapsed_seconds = std::chrono::duration<double>(t1 - t0).count();
    report.throughput =
        report.elapsed_seconds > 0 ? static_cast<double>(count) / report.elapsed_seconds : 0.0;
    return report;
}

ShapeEnumerator::ShapeEnumerator(std::vector<OddPrime> pool, ShapeEnumOptions options)
    : pool_(std::move(pool)), opt_(options) {
    if (opt_.max_k < 2) throw std::invalid_argument("shape enumeration: max_k must be >= 2");
    if (opt_.exponent_bound == 1)
        throw std::invalid_argument("shape enumeration: exponent bound must be >= 2");
    std::sort(pool_.begin(), pool_.end());
    for (std::size_t i = 1; i < pool_.size(); i++)
        if (pool_[i - 1] == pool_[i])
            throw std::domain_error("shape enumeration: duplicate primes in pool");

    // need one special plus at least two even-part primes
    done_ = pool_.size() < 3;
    if (!done_) {
        combo_.resize(subset_size_);
        for (std::size_t i = 0; i < subset_size_; i++) combo_[i] = i;
        reset_exponents();
    }
}

void ShapeEnumerator::reset_exponents() {
    if (opt_.exponent_bound == 0) return;
    exponents_.assign(subset_size_, 2);  // even-part exponents
    exponents_.push_back(1);             // special exponent
}

// odometer over (even exponents step 2 from 2, special exponent step 2 from 1)
bool ShapeEnumerator::advance_exponents() {
    if (opt_.exponent_bound == 0) return false;
    for (std::size_t i = exponents_.size(); i-- > 0;) {
        if (exponents_[i] + 2 <= opt_.exponent_bound) {
            exponents_[i] += 2;
            for (std::size_t j = i + 1; j < exponents_.size(); j++)
                exponents_[j] = j == exponents_.size() - 1 ? 1u : 2u;
            return true;
        }
    }
    return false;
}

bool ShapeEnumerator::advance_combination() {
    std::size_t m = pool_.size() - 1;  // choices excluding the special prime
    std::size_t s = subset_size_;
    for (std::size_t i = s; i-- > 0;) {
        if (combo_[i] + 1 <= m - (s - i)) {
            combo_[i]++;
            for (std::size_t j = i + 1; j < s; j++) combo_[j] = combo_[j - 1] + 1;
            return true;
        }
    }
    return false;
}

std::optional<ShapeSpec> ShapeEnumerator::next() {
    if (done_) return std::nullopt;

    // build the shape for the current state
    std::vector<ShapeTerm> even_part;
    even_part.reserve(subset_size_);
    for (std::size_t i = 0; i < subset_size_; i++) {
        std::size_t idx = combo_[i] < special_ ? combo_[i] : combo_[i] + 1;
        std::optional<unsigned> e;
        if (opt_.exponent_bound > 0) e = exponents_[i];
        even_part.push_back({pool_[idx], e});
    }
    std::optional<unsigned> special_e;
    if (opt_.exponent_bound > 0) special_e = exponents_.back();
    ShapeSpec shape{std::move(even_part), pool_[special_], special_e};

    // advance: exponents, then combination, then subset size, then special
    if (!advance_exponents()) {
        if (!advance_combination()) {
            std::size_t max_size = std::min<std::size_t>(opt_.max_k, pool_.size() - 1);
            if (subset_size_ + 1 <= max_size) {
                subset_size_++;
            } else if (special_ + 1 < pool_.size()) {
                special_++;
                subset_size_ = 2;
            } else {
                done_ = true;
                return shape;
            }
            combo_.resize(subset_size_);
            for (std::size_t i = 0; i < subset_size_; i++) combo_[i] = i;
        }
        reset_exponents();
    }
    return shape;
}

FilterVerdict apply_criterion(Criterion c, const ShapeSpec& shape, const FactorBudget& budget) {
    auto skipped = [&](Criterion crit) {
        return FilterVerdict{.criterion = crit,
                             .outcome = Outcome::inconclusive,
                             .inconclusive_kind = InconclusiveKind::not_applicable,
                             .reason = "shape has no exact exponents"};
    };
    switch (c) {
        case Criterion::euler_form: return euler_form_filter(shape);
        case Criterion::theorem1: return theorem1_filter(shape);
        case Criterion::theorem2: return theorem2_filter(shape);
        case Criterion::support:
            return shape.exact() ? support_filter(shape, budget) : skipped(c);
        case Criterion::parity_certificate:
            return shape.exact() ? parity_certificate_filter(shape, budget) : skipped(c);
    }
    throw std::invalid_argument("unknown criterion");
}

namespace {

struct ShapeOutcome {
    ShapeSpec shape;
    std::vector<FilterVerdict> verdicts;
    int rejected_index = -1;  // index into the criteria list
    bool undecided = false;   // budget/internal inconclusive seen
};

ShapeOutcome process_shape(ShapeSpec shape, const std::vector<Criterion>& criteria,
                           const FactorBudget& budget) {
    ShapeOutcome out{.shape = std::move(shape)};
    for (std::size_t i = 0; i < criteria.size(); i++) {
        FilterVerdict v = apply_criterion(criteria[i], out.shape, budget);
        bool reject = v.outcome == Outcome::reject;
        if (v.outcome == Outcome::inconclusive &&
            v.inconclusive_kind != InconclusiveKind::not_applicable)
            out.undecided = true;
        out.verdicts.push_back(std::move(v));
        if (reject) {
            out.rejected_index = static_cast<int>(i);
            break;
        }
    }
    return out;
}

}  // namespace

PipelineStats run_pipeline(ShapeSource shapes, const std::vector<Criterion>& criteria,
                           const FactorBudget& budget, const PipelineOptions& options,
                           const VerdictSink& sink) {
    PipelineStats stats;
    for (Criterion c : criteria) stats.rejected_by.emplace_back(c, 0);

    unsigned jobs = std::max(1u, options.jobs);
    const std::size_t chunk_size = jobs == 1 ? 1 : jobs * 32;

    std::vector<ShapeSpec> chunk;
    std::vector<std::optional<ShapeOutcome>> outcomes;
    for (;;) {
        chunk.clear();
        while (chunk.size() < chunk_size) {
            auto shape = shapes();
            if (!shape) break;
            chunk.push_back(std::move(*shape));
        }
        if (chunk.empty()) break;

        outcomes.assign(chunk.size(), std::nullopt);
        if (jobs == 1) {
            for (std::size_t i = 0; i < chunk.size(); i++)
                outcomes[i] = process_shape(std::move(chunk[i]), criteria, budget);
        } else {
            std::atomic<std::size_t> next{0};
            auto worker = [&] {
                for (;;) {
                    std::size_t i = next.fetch_add(1);
                    if (i >= chunk.size()) break;
                    outcomes[i] = process_shape(chunk[i], criteria, budget);
                }
            };
            std::vector<std::thread> threads;
            for (unsigned j = 1; j < jobs; j++) threads.emplace_back(worker);
            worker();
            for (auto& t : threads) t.join();
        }

        // merge in input order
        for (auto& slot : outcomes) {
            ShapeOutcome& out = *slot;
            stats.shapes_in++;
            if (out.rejected_index >= 0) {
                stats.rejected_by[out.rejected_index].second++;
            } else if (out.undecided) {
                stats.inconclusive++;
            } else {
                stats.survivor_count++;
                if (stats.survivors.size() < options.survivor_cap)
                    stats.survivors.push_back(out.shape);
            }
            if (sink) sink(out.shape, out.verdicts);
        }
    }
    return stats;
}

}  // namespace opn
