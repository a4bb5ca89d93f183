#include "opn/records.hpp"

namespace opn {

namespace {

std::string dec(const Int& n) { return n.get_str(); }

std::string to_string(InconclusiveKind k) {
    switch (k) {
        case InconclusiveKind::none: return "none";
        case InconclusiveKind::not_applicable: return "not_applicable";
        case InconclusiveKind::budget_exhausted: return "budget_exhausted";
        case InconclusiveKind::internal: return "internal";
    }
    return "?";
}

Record symbols_json(const std::vector<std::pair<Int, SymbolValue>>& symbols) {
    Record arr = Record::array();
    for (const auto& [prime, value] : symbols) arr.push_back({dec(prime), to_int(value)});
    return arr;
}

}  // namespace

Record record_of(const Factorization& f, const Int& n, const Int& cofactor) {
    Record r;
    r["type"] = "factorization";
    r["n"] = dec(n);
    r["factorization"] = to_string(f);
    r["complete"] = cofactor == 1;
    if (cofactor != 1) r["cofactor"] = dec(cofactor);
    return r;
}

Record record_of(const Int& n, const ClassifyResult& c) {
    Record r;
    r["type"] = "classification";
    r["n"] = dec(n);
    r["factorization"] = to_string(c.factorization.factors);
    r["complete"] = c.factorization.complete();
    if (c.classification) {
        r["sigma"] = dec(c.sigma_value);
        r["aliquot"] = dec(c.classification->aliquot_sum);
        r["kind"] = to_string(c.classification->kind);
    } else {
        r["cofactor"] = dec(c.factorization.cofactor);
    }
    return r;
}

Record record_of(const ResidueMatrix& m) {
    Record r;
    Record primes = Record::array();
    for (const auto& p : m.primes) primes.push_back(dec(p.value()));
    r["primes"] = primes;
    Record rows = Record::array();
    for (std::size_t i = 0; i < m.primes.size(); i++) {
        Record row = Record::array();
        for (std::size_t j = 0; j < m.primes.size(); j++) row.push_back(to_int(m.at(i, j)));
        rows.push_back(row);
    }
    r["entries"] = rows;
    return r;
}

Record record_of(const ShapeSpec& shape) {
    Record r;
    r["type"] = "shape";
    r["shape"] = to_string(shape);
    return r;
}

Record record_of(const ShapeSpec& shape, const FilterVerdict& v) {
    Record r;
    r["type"] = "verdict";
    r["shape"] = to_string(shape);
    r["criterion"] = to_string(v.criterion);
    r["outcome"] = to_string(v.outcome);
    if (v.outcome == Outcome::inconclusive) r["inconclusive_kind"] = to_string(v.inconclusive_kind);
    if (!v.reason.empty()) r["reason"] = v.reason;
    if (!v.symbols.empty()) r["symbols"] = symbols_json(v.symbols);
    if (v.matrix) r["matrix"] = record_of(*v.matrix);
    if (!v.findings.empty()) {
        Record arr = Record::array();
        for (const auto& f : v.findings) {
            Record e;
            e["prime"] = dec(f.prime);
            e["exponent"] = f.exponent;
            e["sigma"] = dec(f.sigma_value);
            e["two_valuation"] = f.two_valuation;
            if (f.foreign_prime) e["foreign_prime"] = dec(*f.foreign_prime);
            e["ok"] = f.ok;
            e["inconclusive"] = f.inconclusive;
            if (!f.note.empty()) e["note"] = f.note;
            arr.push_back(e);
        }
        r["findings"] = arr;
    }
    return r;
}

Record record_of(const ShapeSpec& shape, const ParityCertificate& c) {
    Record r;
    r["type"] = "parity_certificate";
    r["shape"] = to_string(shape);
    r["all_consistent"] = c.all_consistent;
    r["any_inconclusive"] = c.any_inconclusive;
    Record arr = Record::array();
    for (const auto& e : c.entries) {
        Record entry;
        entry["prime"] = dec(e.prime);
        entry["exponent"] = e.exponent;
        entry["sigma"] = dec(e.sigma_value);
        entry["two_valuation"] = e.two_valuation;
        entry["odd_multiplicity_symbols"] = symbols_json(e.odd_multiplicity_symbols);
        entry["nonresidue_count"] = e.nonresidue_count;
        entry["expected_parity"] = e.expected_parity;
        entry["consistent"] = e.consistent;
        entry["inconclusive"] = e.inconclusive;
        if (!e.note.empty()) entry["note"] = e.note;
        arr.push_back(entry);
    }
    r["entries"] = arr;
    return r;
}

Record record_of(const Factorization& f, const EulerFormReport& report) {
    Record r;
    r["type"] = "euler_form";
    r["factorization"] = to_string(f);
    r["overall"] = report.overall;
    Record arr = Record::array();
    for (const auto& v : report.lemmas) {
        Record e;
        e["id"] = to_string(v.id);
        e["status"] = v.status == LemmaStatus::satisfied ? "satisfied" : "violated";
        if (!v.witness.empty()) e["witness"] = v.witness;
        arr.push_back(e);
    }
    r["lemmas"] = arr;
    return r;
}

Record record_of(const SweepReport& report) {
    Record r;
    r["type"] = "sweep";
    r["check"] = report.check;
    r["trials"] = report.trials;
    r["failures"] = report.failure_count;
    if (!report.failures.empty()) r["witnesses"] = report.failures;
    return r;
}

Record record_of(const ScanReport& report) {
    Record r;
    r["type"] = "scan_report";
    r["start"] = report.start;
    r["end"] = report.end;
    r["perfect"] = report.perfect_found;
    r["odd_perfect"] = report.odd_perfect_found;
    r["elapsed_seconds"] = report.elapsed_seconds;
    r["throughput"] = report.throughput;
    return r;
}

Record record_of(const PipelineStats& stats) {
    Record r;
    r["type"] = "pipeline_stats";
    r["shapes_in"] = stats.shapes_in;
    Record rejected;
    for (const auto& [criterion, count] : stats.rejected_by) rejected[to_string(criterion)] = count;
    r["rejected_by"] = rejected;
    r["inconclusive"] = stats.inconclusive;
    r["survivor_count"] = stats.survivor_count;
    Record survivors = Record::array();
    for (const auto& s : stats.survivors) survivors.push_back(to_string(s));
    r["survivors"] = survivors;
    return r;
}

std::string to_line(const Record& r) { return r.dump(); }

}  // namespace opn
