#include "mplab/experiment/csv.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mplab::experiment {

std::string format_number(double v) {
    if (std::isnan(v)) return "";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void Table::add(std::vector<std::string> row) {
    if (row.size() != header.size()) throw std::logic_error("csv: row width differs from header");
    rows.push_back(std::move(row));
}

void write_csv(const Table& table, std::ostream& out) {
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out << ',';
            out << cells[i];
        }
        out << '\n';
    };
    line(table.header);
    for (const auto& r : table.rows) line(r);
}

std::string to_csv(const Table& table) {
    std::ostringstream ss;
    write_csv(table, ss);
    return ss.str();
}

}  // namespace mplab::experiment
