#include "hyperlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hyperlab::report {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void write_string(const std::string& s, std::ostream& os) {
    // nlohmann handles escaping and UTF-8 validation.
    os << Json(s).dump();
}

void write(const Json& j, std::ostream& os, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(2 * depth), ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ",\n";
                first = false;
                os << pad;
                write_string(it.key(), os);
                os << ": ";
                write(it.value(), os, depth + 1);
            }
            os << '\n' << close << '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            // Arrays of scalars stay on one line.
            bool flat = true;
            for (const auto& e : j) flat = flat && !e.is_structured();
            if (flat) {
                os << '[';
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) os << ", ";
                    write(j[i], os, depth + 1);
                }
                os << ']';
                return;
            }
            os << "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ",\n";
                os << pad;
                write(j[i], os, depth + 1);
            }
            os << '\n' << close << ']';
            return;
        }
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            if (std::isfinite(v))
                os << format_double(v);
            else
                write_string(format_double(v), os);
            return;
        }
        default:
            os << j.dump();
    }
}

}  // namespace

void write_json(const Json& j, std::ostream& os) {
    write(j, os, 0);
    os << '\n';
}

std::string dump(const Json& j) {
    std::ostringstream os;
    write_json(j, os);
    return os.str();
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json complex_list(const std::vector<Complex>& v) {
    Json a = Json::array();
    for (const auto& z : v) a.push_back(complex_json(z));
    return a;
}

Json poly_json(const PolyC& p) { return complex_list(p.coeffs()); }

Csv::Csv(std::ostream& os, const std::vector<std::string>& header) : os_(os), columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
    os_ << '\n';
}

Csv& Csv::cell(const std::string& s) {
    if (at_ >= columns_) throw std::logic_error("Csv: too many cells in row");
    os_ << (at_++ ? "," : "") << s;
    return *this;
}

Csv& Csv::cell(double v) { return cell(format_double(v)); }

Csv& Csv::cell(long long v) { return cell(std::to_string(v)); }

void Csv::end_row() {
    if (at_ != columns_) throw std::logic_error("Csv: row has the wrong number of cells");
    os_ << '\n';
    at_ = 0;
}

}  // namespace hyperlab::report
