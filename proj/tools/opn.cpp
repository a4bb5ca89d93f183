#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "opn/records.hpp"

namespace {

struct Ctx {
    std::string format = "text";
    uint64_t seed = 0;
    uint64_t budget = 1'000'000;

    bool records() const { return format == "records"; }
    opn::FactorBudget fb() const { return {.rho_iterations = budget, .seed = seed}; }
};

void emit(const opn::Record& r) { std::cout << opn::to_line(r) << "\n"; }

opn::Int parse_int(const std::string& s) {
    try {
        return opn::Int(s, 10);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("not a decimal integer: " + s);
    }
}

std::vector<opn::Criterion> parse_criteria(const std::string& csv) {
    std::vector<opn::Criterion> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(opn::criterion_from_string(item));
    }
    if (out.empty()) throw std::invalid_argument("empty criteria list");
    return out;
}

int exit_code_for(const std::vector<opn::FilterVerdict>& verdicts) {
    bool undecided = false;
    for (const auto& v : verdicts) {
        if (v.outcome == opn::Outcome::reject) return 1;
        if (v.outcome == opn::Outcome::inconclusive &&
            v.inconclusive_kind != opn::InconclusiveKind::not_applicable)
            undecided = true;
    }
    return undecided ? 3 : 0;
}

void print_verdict_text(const opn::FilterVerdict& v) {
    std::cout << "  " << to_string(v.criterion) << ": " << to_string(v.outcome);
    if (!v.reason.empty()) std::cout << " - " << v.reason;
    std::cout << "\n";
    if (!v.symbols.empty()) {
        std::cout << "   ";
        for (const auto& [p, s] : v.symbols)
            std::cout << " (" << p.get_str() << "|.)=" << opn::to_int(s);
        std::cout << "\n";
    }
    if (v.matrix) {
        const auto& m = *v.matrix;
        for (std::size_t i = 0; i < m.primes.size(); i++) {
            std::cout << "    " << m.primes[i].value().get_str() << ":";
            for (std::size_t j = 0; j < m.primes.size(); j++)
                std::cout << " " << std::showpos << opn::to_int(m.at(i, j)) << std::noshowpos;
            std::cout << "\n";
        }
    }
    for (const auto& f : v.findings) {
        std::cout << "    sigma(" << f.prime.get_str() << "^" << f.exponent
                  << ") = " << f.sigma_value.get_str() << " [v2=" << f.two_valuation << "] "
                  << (f.ok ? "ok" : f.note) << "\n";
    }
}

int cmd_classify(const Ctx& ctx, const std::string& arg) {
    opn::Int n = parse_int(arg);
    opn::ClassifyResult r = opn::classify(n, ctx.fb());
    if (ctx.records()) {
        emit(opn::record_of(n, r));
    } else if (r.classification) {
        std::cout << n.get_str() << " = " << to_string(r.factorization.factors) << "\n"
                  << "sigma = " << r.sigma_value.get_str()
                  << "  aliquot = " << r.classification->aliquot_sum.get_str() << "  -> "
                  << to_string(r.classification->kind) << "\n";
    } else {
        std::cout << "inconclusive: budget exhausted, composite cofactor "
                  << r.factorization.cofactor.get_str() << "\n";
    }
    return r.classification ? 0 : 3;
}

int cmd_sigma(const Ctx& ctx, const std::string& arg) {
    opn::Int n = parse_int(arg);
    if (n < 1) throw std::domain_error("sigma: n must be positive");
    opn::FactorOutcome f = opn::factorize(n, ctx.fb());
    if (!f.complete()) {
        std::cout << "inconclusive: budget exhausted, composite cofactor " << f.cofactor.get_str()
                  << "\n";
        return 3;
    }
    opn::Int s = opn::sigma(f.factors);
    if (ctx.records()) {
        opn::Record r;
        r["type"] = "sigma";
        r["n"] = n.get_str();
        r["sigma"] = s.get_str();
        emit(r);
    } else {
        std::cout << s.get_str() << "\n";
    }
    return 0;
}

int cmd_factor(const Ctx& ctx, const std::string& arg) {
    opn::Int n = parse_int(arg);
    opn::FactorOutcome f = opn::factorize(n, ctx.fb());
    if (ctx.records()) {
        emit(opn::record_of(f.factors, n, f.cofactor));
    } else if (f.complete()) {
        std::cout << to_string(f.factors) << "\n";
    } else {
        std::cout << "partial: " << to_string(f.factors) << ", composite cofactor "
                  << f.cofactor.get_str() << "\n";
    }
    return f.complete() ? 0 : 3;
}

int cmd_divisors(const Ctx& ctx, const std::string& arg) {
    opn::Int n = parse_int(arg);
    if (n < 1) throw std::domain_error("divisors: n must be positive");
    opn::FactorOutcome f = opn::factorize(n, ctx.fb());
    if (!f.complete()) {
        std::cout << "inconclusive: budget exhausted\n";
        return 3;
    }
    opn::Int count = opn::divisor_count(f.factors);

    bool checked = false;
    if (n <= 1'000'000) {  // cross-check the formula against plain enumeration
        uint64_t v = opn::to_u64(n), enumerated = 0;
        for (uint64_t d = 1; d * d <= v; d++)
            if (v % d == 0) enumerated += (d * d == v) ? 1 : 2;
        checked = true;
        if (count != enumerated) {
            std::cerr << "verification failure: formula " << count.get_str() << " vs enumerated "
                      << enumerated << "\n";
            return 1;
        }
    }
    if (ctx.records()) {
        opn::Record r;
        r["type"] = "divisor_count";
        r["n"] = n.get_str();
        r["count"] = count.get_str();
        r["cross_checked"] = checked;
        emit(r);
    } else {
        std::cout << count.get_str() << "\n";
    }
    return 0;
}

int cmd_symbol(const Ctx& ctx, const std::string& kind, const std::string& a_arg,
               const std::string& n_arg) {
    opn::Int a = parse_int(a_arg);
    opn::Int n = parse_int(n_arg);
    opn::SymbolValue s = kind == "legendre" ? opn::legendre(a, opn::OddPrime(n))
                                            : opn::jacobi(a, n);
    if (ctx.records()) {
        opn::Record r;
        r["type"] = "symbol";
        r["kind"] = kind;
        r["a"] = a.get_str();
        r["n"] = n.get_str();
        r["value"] = opn::to_int(s);
        emit(r);
    } else {
        std::cout << opn::to_int(s) << "\n";
    }
    return 0;
}

int cmd_recip(const Ctx& ctx, const std::string& a1, const std::string& a2) {
    opn::OddPrime p1(parse_int(a1)), p2(parse_int(a2));
    auto [s21, s12] = opn::reciprocity_pair(p1, p2);
    bool both3 = mpz_fdiv_ui(p1.value().get_mpz_t(), 4) == 3 &&
                 mpz_fdiv_ui(p2.value().get_mpz_t(), 4) == 3;
    if (ctx.records()) {
        opn::Record r;
        r["type"] = "reciprocity";
        r["p1"] = p1.value().get_str();
        r["p2"] = p2.value().get_str();
        r["p2_over_p1"] = opn::to_int(s21);
        r["p1_over_p2"] = opn::to_int(s12);
        r["opposite"] = both3;
        emit(r);
    } else {
        std::cout << "(" << p2.value().get_str() << "|" << p1.value().get_str()
                  << ") = " << opn::to_int(s21) << "   (" << p1.value().get_str() << "|"
                  << p2.value().get_str() << ") = " << opn::to_int(s12) << "   "
                  << (both3 ? "opposite (both primes are 3 mod 4)" : "equal") << "\n";
    }
    return 0;
}

int cmd_euler_form(const Ctx& ctx, const std::string& arg) {
    opn::Factorization f = opn::parse_factorization(arg);
    opn::EulerFormReport report = opn::check_euler_form(f);
    if (ctx.records()) {
        emit(opn::record_of(f, report));
    } else {
        std::cout << to_string(f) << ": " << (report.overall ? "satisfied" : "violated") << "\n";
        for (const auto& v : report.lemmas) {
            std::cout << "  " << to_string(v.id) << " "
                      << (v.status == opn::LemmaStatus::satisfied ? "satisfied" : "violated");
            if (!v.witness.empty()) std::cout << " - " << v.witness;
            std::cout << "\n";
        }
    }
    return report.overall ? 0 : 1;
}

int cmd_filter(const Ctx& ctx, const std::string& shape_arg, const std::string& criteria_csv,
               bool criteria_explicit) {
    opn::ShapeSpec shape = opn::parse_shape(shape_arg);
    std::vector<opn::Criterion> criteria = parse_criteria(criteria_csv);
    if (criteria_explicit && !shape.exact()) {
        for (opn::Criterion c : criteria)
            if (c == opn::Criterion::support || c == opn::Criterion::parity_certificate)
                throw std::invalid_argument(to_string(c) + " needs a shape with exact exponents");
    }

    std::vector<opn::FilterVerdict> verdicts;
    if (!ctx.records()) std::cout << "shape " << to_string(shape) << "\n";
    for (opn::Criterion c : criteria) {
        opn::FilterVerdict v = opn::apply_criterion(c, shape, ctx.fb());
        if (ctx.records())
            emit(opn::record_of(shape, v));
        else
            print_verdict_text(v);
        bool rejected = v.outcome == opn::Outcome::reject;
        verdicts.push_back(std::move(v));
        if (rejected) break;
    }
    int rc = exit_code_for(verdicts);
    if (!ctx.records())
        std::cout << "result: " << (rc == 1 ? "reject" : rc == 3 ? "inconclusive" : "pass") << "\n";
    return rc;
}

int cmd_scan(const Ctx& ctx, uint64_t start, uint64_t end, bool odd_only, unsigned jobs,
             uint64_t block_size, uint64_t ceiling) {
    opn::ScanOptions options;
    options.odd_only = odd_only;
    options.jobs = jobs;
    if (block_size > 0) options.block_size = block_size;
    if (ceiling > 0) options.ceiling = ceiling;
    opn::ScanReport report = opn::scan_perfect(start, end, options);
    if (ctx.records()) {
        emit(opn::record_of(report));
    } else {
        std::cout << "scanned [" << report.start << ", " << report.end << "]"
                  << (odd_only ? " (odd only)" : "") << "\n";
        std::cout << "perfect:";
        if (report.perfect_found.empty()) std::cout << " none";
        for (uint64_t n : report.perfect_found) std::cout << " " << n;
        std::cout << "\nodd perfect:";
        if (report.odd_perfect_found.empty()) std::cout << " none";
        for (uint64_t n : report.odd_perfect_found) std::cout << " " << n;
        std::cout << "\nelapsed " << report.elapsed_seconds << " s  (" << report.throughput
                  << " numbers/s)\n";
    }
    return 0;
}

int cmd_shapes(const Ctx& ctx, const std::string& pool_csv, unsigned max_k, unsigned exponents) {
    std::vector<opn::OddPrime> pool;
    std::stringstream ss(pool_csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) pool.emplace_back(parse_int(item));

    opn::ShapeEnumerator en(std::move(pool), {.max_k = max_k, .exponent_bound = exponents});
    while (auto shape = en.next()) {
        if (ctx.records())
            emit(opn::record_of(*shape));
        else
            std::cout << to_string(*shape) << "\n";
    }
    return 0;
}

int cmd_filter_pipeline(const Ctx& ctx, const std::string& criteria_csv, std::size_t survivor_cap,
                        unsigned jobs) {
    std::vector<opn::Criterion> criteria = parse_criteria(criteria_csv);

    uint64_t line_no = 0;
    opn::ShapeSource source = [&line_no]() -> std::optional<opn::ShapeSpec> {
        std::string line;
        while (std::getline(std::cin, line)) {
            line_no++;
            std::size_t b = line.find_first_not_of(" \t\r");
            if (b == std::string::npos) continue;
            try {
                if (line[b] == '{') {
                    opn::Record r = opn::Record::parse(line);
                    return opn::parse_shape(r.at("shape").get<std::string>());
                }
                return opn::parse_shape(line.substr(b));
            } catch (const std::exception& e) {
                throw std::invalid_argument("stdin line " + std::to_string(line_no) + ": " +
                                            e.what());
            }
        }
        return std::nullopt;
    };

    opn::VerdictSink sink;
    if (ctx.records())
        sink = [](const opn::ShapeSpec& shape, const std::vector<opn::FilterVerdict>& verdicts) {
            for (const auto& v : verdicts) emit(opn::record_of(shape, v));
        };

    opn::PipelineStats stats = opn::run_pipeline(source, criteria, ctx.fb(),
                                                 {.survivor_cap = survivor_cap, .jobs = jobs}, sink);
    if (ctx.records()) {
        emit(opn::record_of(stats));
    } else {
        std::cout << "shapes: " << stats.shapes_in << "\n";
        for (const auto& [criterion, count] : stats.rejected_by)
            std::cout << "rejected by " << to_string(criterion) << ": " << count << "\n";
        std::cout << "inconclusive: " << stats.inconclusive << "\n";
        std::cout << "survivors: " << stats.survivor_count << "\n";
        for (const auto& s : stats.survivors) std::cout << "  " << to_string(s) << "\n";
    }
    return 0;
}

int cmd_verify(const Ctx& ctx, const std::string& id, std::optional<uint64_t> bound) {
    opn::SweepReport report;
    if (id == "parity-mechanism" || id == "parity")
        report = opn::verify_parity_mechanism(bound.value_or(10'000), ctx.seed);
    else
        report = opn::verify_lemma(opn::lemma_from_string(id), bound);

    if (ctx.records()) {
        emit(opn::record_of(report));
    } else {
        std::cout << report.check << ": " << report.trials << " trials, " << report.failure_count
                  << " failures\n";
        for (const auto& w : report.failures) std::cout << "  " << w << "\n";
    }
    return report.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"odd-perfect-number criteria toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    Ctx ctx;
    app.add_option("--format", ctx.format, "output format")
        ->check(CLI::IsMember({"text", "records"}));
    app.add_option("--seed", ctx.seed, "seed for randomized factoring");
    app.add_option("--budget", ctx.budget, "Pollard-Brent iteration budget");

    std::function<int()> action;

    std::string arg_n, arg_a, arg_b, arg_shape, arg_fact, arg_lemma;
    std::string criteria_csv = "euler_form,theorem1,theorem2,support,parity_certificate";
    std::string pool_csv;
    uint64_t scan_start = 2, scan_end = 10'000, scan_block = 0, scan_ceiling = 0;
    bool odd_only = false;
    unsigned jobs = 1, max_k = 3, exponents = 0;
    std::size_t survivor_cap = 10'000;
    std::optional<uint64_t> bound;

    auto* classify = app.add_subcommand("classify", "classify n as deficient/perfect/abundant");
    classify->add_option("n", arg_n)->required();
    classify->callback([&] { action = [&] { return cmd_classify(ctx, arg_n); }; });

    auto* sigma = app.add_subcommand("sigma", "sum of divisors of n");
    sigma->add_option("n", arg_n)->required();
    sigma->callback([&] { action = [&] { return cmd_sigma(ctx, arg_n); }; });

    auto* factor = app.add_subcommand("factor", "prime factorization of n");
    factor->add_option("n", arg_n)->required();
    factor->callback([&] { action = [&] { return cmd_factor(ctx, arg_n); }; });

    auto* divisors = app.add_subcommand("divisors", "divisor count of n, cross-checked");
    divisors->add_option("n", arg_n)->required();
    divisors->callback([&] { action = [&] { return cmd_divisors(ctx, arg_n); }; });

    auto* legendre = app.add_subcommand("legendre", "Legendre symbol (a|p)");
    legendre->add_option("a", arg_a)->required();
    legendre->add_option("p", arg_b)->required();
    legendre->callback([&] { action = [&] { return cmd_symbol(ctx, "legendre", arg_a, arg_b); }; });

    auto* jacobi = app.add_subcommand("jacobi", "Jacobi symbol (a|n)");
    jacobi->add_option("a", arg_a)->required();
    jacobi->add_option("n", arg_b)->required();
    jacobi->callback([&] { action = [&] { return cmd_symbol(ctx, "jacobi", arg_a, arg_b); }; });

    auto* recip = app.add_subcommand("recip", "quadratic reciprocity pair for two odd primes");
    recip->add_option("p1", arg_a)->required();
    recip->add_option("p2", arg_b)->required();
    recip->callback([&] { action = [&] { return cmd_recip(ctx, arg_a, arg_b); }; });

    auto* euler = app.add_subcommand("euler-form", "structural odd-perfect conditions");
    euler->add_option("factorization", arg_fact)->required();
    euler->callback([&] { action = [&] { return cmd_euler_form(ctx, arg_fact); }; });

    auto* filter = app.add_subcommand("filter", "run rejection criteria on one shape");
    filter->add_option("shape", arg_shape)->required();
    auto* copt = filter->add_option("--criteria", criteria_csv, "comma-separated criteria");
    filter->callback([&, copt] {
        action = [&, explicit_criteria = copt->count() > 0] {
            return cmd_filter(ctx, arg_shape, criteria_csv, explicit_criteria);
        };
    });

    auto* scan = app.add_subcommand("scan", "perfect-number range scan");
    scan->add_option("--start", scan_start)->required();
    scan->add_option("--end", scan_end)->required();
    scan->add_flag("--odd-only", odd_only);
    scan->add_option("--jobs", jobs);
    scan->add_option("--block-size", scan_block);
    scan->add_option("--ceiling", scan_ceiling, "override the desk-scale end bound");
    scan->callback([&] {
        action = [&] {
            return cmd_scan(ctx, scan_start, scan_end, odd_only, jobs, scan_block, scan_ceiling);
        };
    });

    auto* shapes = app.add_subcommand("shapes", "enumerate candidate shapes over a prime pool");
    shapes->add_option("--pool", pool_csv, "comma-separated odd primes")->required();
    shapes->add_option("--max-k", max_k);
    shapes->add_option("--exact-exponents", exponents, "attach exponents up to this bound");
    shapes->callback([&] { action = [&] { return cmd_shapes(ctx, pool_csv, max_k, exponents); }; });

    auto* pipeline = app.add_subcommand("filter-pipeline", "filter shapes read from stdin");
    pipeline->add_option("--criteria", criteria_csv);
    pipeline->add_option("--survivor-cap", survivor_cap);
    pipeline->add_option("--jobs", jobs);
    pipeline->callback(
        [&] { action = [&] { return cmd_filter_pipeline(ctx, criteria_csv, survivor_cap, jobs); }; });

    auto* verify = app.add_subcommand("verify-lemma", "numeric lemma sweeps");
    verify->add_option("lemma", arg_lemma, "L0..L6 or parity-mechanism")->required();
    verify->add_option("--bound", bound);
    verify->callback([&] { action = [&] { return cmd_verify(ctx, arg_lemma, bound); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return action ? action() : 2;
    } catch (const opn::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
