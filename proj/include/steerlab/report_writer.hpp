#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace steerlab {

enum class OutputFormat { table, csv, json_lines };

/// "table", "csv" or "json-lines".
OutputFormat parse_format(std::string_view name);

using Cell = std::variant<std::string, double, long long, bool>;

/// Text form of a cell: numbers with 12 significant digits, booleans as true/false.
std::string cell_text(const Cell& cell);

struct Section {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    /// Free-text lines printed after the rows (table and csv prefix them with '#').
    std::vector<std::string> notes;
    /// One-row key/value section; the table format prints it vertically.
    bool record = false;

    void add_row(std::vector<Cell> row);
};

/// Ordered sections of one command's output.
struct Report {
    std::vector<Section> sections;

    Section& add(std::string name, std::vector<std::string> columns);
    /// A one-row section from (column, value) pairs.
    Section& add_record(std::string name, std::vector<std::pair<std::string, Cell>> fields);
};

/// table: aligned columns under a "[name]" heading per section.
/// csv: header plus rows; sections after the first are preceded by a blank line
///      and "# name".
/// json-lines: one object per row with a leading "section" key.
void write_report(std::ostream& os, const Report& report, OutputFormat format);

} // namespace steerlab
