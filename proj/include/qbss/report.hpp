#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace qbss {

/// Tabular experiment record: named numeric columns plus a free-form JSON
/// meta object. CSV output uses 17 significant digits, '.' as the decimal
/// separator and '\n' line endings so identical runs are byte-identical.
class ExperimentReport {
public:
    explicit ExperimentReport(std::vector<std::string> columns);

    void add_row(std::vector<double> row); // size must match the header

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<double>>& rows() const { return rows_; }
    bool empty() const { return rows_.empty(); }

    nlohmann::json& meta() { return meta_; }
    const nlohmann::json& meta() const { return meta_; }

    double cell(std::size_t row, const std::string& column) const;

    void write_csv(std::ostream& out) const;
    std::string csv() const;

    /// {"meta": ..., "rows": [{column: value, ...}, ...]}
    nlohmann::json to_json() const;

    static std::string format_double(double v);

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
    nlohmann::json meta_ = nlohmann::json::object();
};

} // namespace qbss
