#pragma once

#include <string>

#include <json.hpp>

#include "opn/criteria.hpp"
#include "opn/euler_form.hpp"
#include "opn/search.hpp"

namespace opn {

// Line-delimited record serialization. Field order is fixed (ordered_json)
// so identical inputs always produce byte-identical lines. Integers that can
// exceed 64 bits are emitted as decimal strings.
using Record = nlohmann::ordered_json;

Record record_of(const Factorization& f, const Int& n, const Int& cofactor);
Record record_of(const Int& n, const ClassifyResult& r);
Record record_of(const ResidueMatrix& m);
Record record_of(const ShapeSpec& shape);
Record record_of(const ShapeSpec& shape, const FilterVerdict& v);
Record record_of(const ShapeSpec& shape, const ParityCertificate& c);
Record record_of(const Factorization& f, const EulerFormReport& r);
Record record_of(const SweepReport& r);
Record record_of(const ScanReport& r);
Record record_of(const PipelineStats& s);

// One record per line, no padding; the inverse of Record::parse.
std::string to_line(const Record& r);

}  // namespace opn
