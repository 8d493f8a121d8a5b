#pragma once

// JSON and CSV output with fixed formatting: floats use %.17g so reports
// round-trip exactly and diff cleanly.

#include "hyperlab/poly.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace hyperlab::report {

using Json = nlohmann::ordered_json;

/// %.17g; non-finite values become the strings "inf", "-inf" and "nan".
std::string format_double(double v);

/// Pretty-printed JSON with two-space indent, keys in insertion order.
void write_json(const Json& j, std::ostream& os);
std::string dump(const Json& j);

Json complex_json(Complex z);
Json complex_list(const std::vector<Complex>& v);
Json poly_json(const PolyC& p);

/// CSV writer: header first, LF line endings, doubles via format_double.
class Csv {
public:
    Csv(std::ostream& os, const std::vector<std::string>& header);
    Csv& cell(const std::string& s);
    Csv& cell(double v);
    Csv& cell(long long v);
    void end_row();

private:
    std::ostream& os_;
    std::size_t columns_;
    std::size_t at_ = 0;
};

}  // namespace hyperlab::report
