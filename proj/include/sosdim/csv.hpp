#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "sosdim/errors.hpp"
#include "sosdim/tscore.hpp"

namespace sosdim {

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

}  // namespace detail

/// Reads one time point per line, comma separated. Blank trailing lines are
/// ignored; every data row must have the same number of fields.
inline MultiSeries read_csv(std::istream& in, bool has_header) {
    std::vector<double> data;
    std::size_t width = 0;
    std::size_t rows = 0;
    std::size_t line_no = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (has_header && line_no == 1) continue;
        if (detail::trim(line).empty()) continue;
        std::string_view rest(line);
        std::size_t col = 0;
        while (true) {
            ++col;
            const auto comma = rest.find(',');
            const auto field = detail::trim(rest.substr(0, comma));
            if (field.empty()) throw ParseError(line_no, col, "empty field");
            double value = 0.0;
            const auto* first = field.data();
            const auto* last = field.data() + field.size();
            if (*first == '+') ++first;
            const auto [ptr, ec] = std::from_chars(first, last, value);
            if (ec != std::errc() || ptr != last) {
                throw ParseError(line_no, col, "not a number: '" + std::string(field) + "'");
            }
            if (!std::isfinite(value)) throw ParseError(line_no, col, "non-finite value");
            data.push_back(value);
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (rows == 0) {
            width = col;
        } else if (col != width) {
            throw ParseError(line_no, std::min(col, width) + 1,
                             "expected " + std::to_string(width) + " fields, found " +
                                 std::to_string(col));
        }
        ++rows;
    }
    if (rows < 2) throw ParseError(line_no + 1, 1, "need at least 2 data rows");
    Matrix values(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(width));
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < width; ++c) {
            values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                data[r * width + c];
        }
    }
    return MultiSeries(std::move(values));
}

inline MultiSeries read_csv_file(const std::string& path, bool has_header) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open '" + path + "'");
    return read_csv(in, has_header);
}

/// Writes with round-trip precision.
inline void write_csv(std::ostream& out, const MultiSeries& x) {
    const auto& v = x.values();
    char buf[32];
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
        for (Eigen::Index c = 0; c < v.cols(); ++c) {
            if (c > 0) out << ',';
            const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v(r, c));
            out.write(buf, ptr - buf);
        }
        out << '\n';
    }
}

}  // namespace sosdim
