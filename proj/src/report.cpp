#include "qbss/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qbss {

ExperimentReport::ExperimentReport(std::vector<std::string> columns)
    : columns_(std::move(columns)) {
    if (columns_.empty())
        throw std::invalid_argument("report needs at least one column");
}

void ExperimentReport::add_row(std::vector<double> row) {
    if (row.size() != columns_.size())
        throw std::invalid_argument("report row width mismatch");
    rows_.push_back(std::move(row));
}

double ExperimentReport::cell(std::size_t row, const std::string& column) const {
    const auto it = std::find(columns_.begin(), columns_.end(), column);
    if (it == columns_.end())
        throw std::invalid_argument("no such report column: " + column);
    return rows_.at(row).at(static_cast<std::size_t>(it - columns_.begin()));
}

std::string ExperimentReport::format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void ExperimentReport::write_csv(std::ostream& out) const {
    for (std::size_t c = 0; c < columns_.size(); ++c)
        out << (c ? "," : "") << columns_[c];
    out << '\n';
    for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << (c ? "," : "") << format_double(row[c]);
        out << '\n';
    }
}

std::string ExperimentReport::csv() const {
    std::ostringstream os;
    write_csv(os);
    return os.str();
}

nlohmann::json ExperimentReport::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : rows_) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t c = 0; c < row.size(); ++c)
            obj[columns_[c]] = row[c];
        rows.push_back(std::move(obj));
    }
    return nlohmann::json{{"meta", meta_}, {"rows", std::move(rows)}};
}

} // namespace qbss
