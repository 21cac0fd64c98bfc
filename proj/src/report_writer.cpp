#include "steerlab/report_writer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "steerlab/errors.hpp"
#include "steerlab/format.hpp"

namespace steerlab {

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + '"';
}

std::string json_text(const Cell& cell) {
    if (const auto* s = std::get_if<std::string>(&cell)) {
        return nlohmann::json(*s).dump();
    }
    if (const auto* d = std::get_if<double>(&cell); d && !std::isfinite(*d)) {
        return "null";
    }
    return cell_text(cell);
}

void write_table(std::ostream& os, const Report& report) {
    bool first = true;
    for (const Section& s : report.sections) {
        if (!first) {
            os << '\n';
        }
        first = false;
        os << '[' << s.name << "]\n";
        if (s.record) {
            std::size_t key_width = 0;
            for (const std::string& c : s.columns) {
                key_width = std::max(key_width, c.size());
            }
            for (std::size_t c = 0; c < s.columns.size(); ++c) {
                os << s.columns[c] << std::string(key_width - s.columns[c].size() + 2, ' ') << cell_text(s.rows[0][c])
                   << '\n';
            }
            for (const std::string& note : s.notes) {
                os << "# " << note << '\n';
            }
            continue;
        }
        std::vector<std::size_t> width(s.columns.size());
        for (std::size_t c = 0; c < s.columns.size(); ++c) {
            width[c] = s.columns[c].size();
            for (const auto& row : s.rows) {
                width[c] = std::max(width[c], cell_text(row[c]).size());
            }
        }
        auto line = [&](const std::vector<std::string>& cells) {
            std::string text;
            for (std::size_t c = 0; c < cells.size(); ++c) {
                if (c > 0) {
                    text += "  ";
                }
                text += cells[c];
                if (c + 1 < cells.size()) {
                    text.append(width[c] - cells[c].size(), ' ');
                }
            }
            os << text << '\n';
        };
        line(s.columns);
        for (const auto& row : s.rows) {
            std::vector<std::string> cells;
            for (const Cell& cell : row) {
                cells.push_back(cell_text(cell));
            }
            line(cells);
        }
        for (const std::string& note : s.notes) {
            os << "# " << note << '\n';
        }
    }
}

void write_csv(std::ostream& os, const Report& report) {
    bool first = true;
    for (const Section& s : report.sections) {
        if (!first) {
            os << "\n# " << s.name << '\n';
        }
        first = false;
        for (std::size_t c = 0; c < s.columns.size(); ++c) {
            os << (c ? "," : "") << csv_escape(s.columns[c]);
        }
        os << '\n';
        for (const auto& row : s.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                os << (c ? "," : "") << csv_escape(cell_text(row[c]));
            }
            os << '\n';
        }
        for (const std::string& note : s.notes) {
            os << "# " << note << '\n';
        }
    }
}

void write_json_lines(std::ostream& os, const Report& report) {
    for (const Section& s : report.sections) {
        for (const auto& row : s.rows) {
            os << "{\"section\":" << nlohmann::json(s.name).dump();
            for (std::size_t c = 0; c < row.size(); ++c) {
                os << ',' << nlohmann::json(s.columns[c]).dump() << ':' << json_text(row[c]);
            }
            os << "}\n";
        }
        for (const std::string& note : s.notes) {
            os << "{\"section\":" << nlohmann::json(s.name).dump() << ",\"note\":" << nlohmann::json(note).dump()
               << "}\n";
        }
    }
}

} // namespace

OutputFormat parse_format(std::string_view name) {
    if (name == "table") {
        return OutputFormat::table;
    }
    if (name == "csv") {
        return OutputFormat::csv;
    }
    if (name == "json-lines") {
        return OutputFormat::json_lines;
    }
    throw ValidationError("unknown format '" + std::string(name) + "' (expected table, csv or json-lines)");
}

std::string cell_text(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>) {
                return v;
            } else if constexpr (std::is_same_v<T, double>) {
                return format_number(v);
            } else if constexpr (std::is_same_v<T, bool>) {
                return v ? "true" : "false";
            } else {
                return std::to_string(v);
            }
        },
        cell);
}

void Section::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw std::logic_error("row width does not match the columns of section " + name);
    }
    rows.push_back(std::move(row));
}

Section& Report::add(std::string name, std::vector<std::string> columns) {
    sections.push_back({std::move(name), std::move(columns), {}, {}, false});
    return sections.back();
}

Section& Report::add_record(std::string name, std::vector<std::pair<std::string, Cell>> fields) {
    Section& s = add(std::move(name), {});
    s.record = true;
    std::vector<Cell> row;
    for (auto& [key, value] : fields) {
        s.columns.push_back(std::move(key));
        row.push_back(std::move(value));
    }
    s.rows.push_back(std::move(row));
    return s;
}

void write_report(std::ostream& os, const Report& report, OutputFormat format) {
    switch (format) {
    case OutputFormat::table:
        write_table(os, report);
        break;
    case OutputFormat::csv:
        write_csv(os, report);
        break;
    case OutputFormat::json_lines:
        write_json_lines(os, report);
        break;
    }
}

} // namespace steerlab
