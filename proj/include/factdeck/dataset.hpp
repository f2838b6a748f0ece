#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "factdeck/error.hpp"
#include "factdeck/util.hpp"

namespace factdeck {

enum class ColumnKind { Nominal, Temporal, Quantitative };

constexpr std::string_view to_string(ColumnKind kind) {
    switch (kind) {
    case ColumnKind::Nominal: return "nominal";
    case ColumnKind::Temporal: return "temporal";
    case ColumnKind::Quantitative: return "quantitative";
    }
    return "nominal";
}

inline std::optional<ColumnKind> column_kind_from_string(std::string_view s) {
    if (s == "nominal") return ColumnKind::Nominal;
    if (s == "temporal") return ColumnKind::Temporal;
    if (s == "quantitative") return ColumnKind::Quantitative;
    return std::nullopt;
}

struct Column {
    std::string name;
    ColumnKind kind = ColumnKind::Nominal;

    bool operator==(const Column&) const = default;
};

/// Quantitative cells hold a double; nominal and temporal cells hold their text.
using Cell = std::variant<double, std::string>;

/// Text used for grouping and display. Numbers use the shortest round-trip form.
inline std::string cell_label(const Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
    return std::get<std::string>(cell);
}

enum class DataFormat { Csv, JsonRecords };

/// Explicit column kinds; always wins over inference.
using Schema = std::map<std::string, ColumnKind>;

class Dataset {
public:
    Dataset() = default;
    Dataset(std::string id, std::vector<Column> columns, std::vector<std::vector<Cell>> rows)
        : id_(std::move(id)), columns_(std::move(columns)), rows_(std::move(rows)) {
        std::unordered_set<std::string> seen;
        for (const auto& c : columns_) {
            if (c.name.empty()) throw Error(ErrorCode::MalformedInput, "column name is empty");
            if (!seen.insert(c.name).second)
                throw Error(ErrorCode::DuplicateColumn, "column '" + c.name + "' appears twice");
        }
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            if (rows_[r].size() != columns_.size())
                throw Error(ErrorCode::MalformedInput,
                            "row " + std::to_string(r) + " has " + std::to_string(rows_[r].size()) +
                                " cells, expected " + std::to_string(columns_.size()));
            for (std::size_t c = 0; c < columns_.size(); ++c) {
                bool numeric = std::holds_alternative<double>(rows_[r][c]);
                if (numeric != (columns_[c].kind == ColumnKind::Quantitative))
                    throw Error(ErrorCode::MalformedInput,
                                "cell type of column '" + columns_[c].name + "' does not match its kind");
            }
        }
    }

    [[nodiscard]] const std::string& id() const { return id_; }
    [[nodiscard]] const std::vector<Column>& columns() const { return columns_; }
    [[nodiscard]] const std::vector<std::vector<Cell>>& rows() const { return rows_; }
    [[nodiscard]] std::size_t row_count() const { return rows_.size(); }

    [[nodiscard]] std::optional<std::size_t> column_index(std::string_view name) const {
        for (std::size_t i = 0; i < columns_.size(); ++i)
            if (columns_[i].name == name) return i;
        return std::nullopt;
    }

    [[nodiscard]] const Column* find_column(std::string_view name) const {
        auto idx = column_index(name);
        return idx ? &columns_[*idx] : nullptr;
    }

    bool operator==(const Dataset&) const = default;

private:
    std::string id_;
    std::vector<Column> columns_;
    std::vector<std::vector<Cell>> rows_;
};

namespace detail {

/// RFC 4180 reader: quoted fields, doubled quotes, CRLF or LF line ends.
inline std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    bool record_started = false;
    std::size_t i = 0;
    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(record));
        record.clear();
        record_started = false;
    };
    while (i < text.size()) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    i += 2;
                    continue;
                }
                in_quotes = false;
                ++i;
                if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r')
                    throw Error(ErrorCode::MalformedInput, "unexpected character after closing quote");
                continue;
            }
            field.push_back(c);
            ++i;
            continue;
        }
        switch (c) {
        case '"':
            if (!field.empty() || field_was_quoted)
                throw Error(ErrorCode::MalformedInput, "quote inside unquoted field");
            in_quotes = true;
            field_was_quoted = true;
            record_started = true;
            ++i;
            break;
        case ',':
            record_started = true;
            end_field();
            ++i;
            break;
        case '\r':
            if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
            [[fallthrough]];
        case '\n':
            if (record_started || !field.empty()) end_record();
            ++i;
            break;
        default:
            record_started = true;
            field.push_back(c);
            ++i;
        }
    }
    if (in_quotes) throw Error(ErrorCode::MalformedInput, "unterminated quoted field");
    if (record_started || !field.empty()) end_record();
    return records;
}

inline ColumnKind infer_kind(const std::vector<std::string>& cells, bool numbers_are_typed,
                             const std::vector<bool>& is_json_number) {
    bool all_numeric = !cells.empty();
    bool all_dates = !cells.empty();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        bool numeric = numbers_are_typed ? is_json_number[i] : parse_number(cells[i]).has_value();
        all_numeric = all_numeric && numeric;
        all_dates = all_dates && !(numbers_are_typed && is_json_number[i]) && is_iso_date(cells[i]);
    }
    if (all_numeric) return ColumnKind::Quantitative;
    if (all_dates) return ColumnKind::Temporal;
    return ColumnKind::Nominal;
}

inline Dataset build_dataset(std::string id, const std::vector<std::string>& names,
                             const std::vector<std::vector<std::string>>& text_rows,
                             const std::vector<std::vector<bool>>& json_number, bool numbers_are_typed,
                             const Schema& schema) {
    const std::size_t ncol = names.size();
    for (const auto& [name, kind] : schema) {
        if (std::find(names.begin(), names.end(), name) == names.end())
            throw Error(ErrorCode::UnknownColumn, "schema names unknown column '" + name + "'");
    }
    std::vector<Column> columns;
    columns.reserve(ncol);
    for (std::size_t c = 0; c < ncol; ++c) {
        ColumnKind kind;
        if (auto it = schema.find(names[c]); it != schema.end()) {
            kind = it->second;
        } else {
            std::vector<std::string> cells;
            std::vector<bool> numbers;
            cells.reserve(text_rows.size());
            for (std::size_t r = 0; r < text_rows.size(); ++r) {
                cells.push_back(text_rows[r][c]);
                numbers.push_back(numbers_are_typed && json_number[r][c]);
            }
            kind = infer_kind(cells, numbers_are_typed, numbers);
        }
        columns.push_back({names[c], kind});
    }
    std::vector<std::vector<Cell>> rows;
    rows.reserve(text_rows.size());
    for (std::size_t r = 0; r < text_rows.size(); ++r) {
        std::vector<Cell> row;
        row.reserve(ncol);
        for (std::size_t c = 0; c < ncol; ++c) {
            const std::string& text = text_rows[r][c];
            if (columns[c].kind == ColumnKind::Quantitative) {
                auto v = parse_number(text);
                if (!v)
                    throw Error(ErrorCode::MalformedInput,
                                "column '" + names[c] + "' row " + std::to_string(r) + ": '" + text +
                                    "' is not a finite number");
                row.emplace_back(*v);
            } else {
                row.emplace_back(text);
            }
        }
        rows.push_back(std::move(row));
    }
    return Dataset(std::move(id), std::move(columns), std::move(rows));
}

} // namespace detail

/// Parses a schema sidecar document `{column: kind}`.
inline Schema parse_schema(const nlohmann::json& doc) {
    if (!doc.is_object()) throw Error(ErrorCode::MalformedInput, "schema sidecar must be an object");
    Schema schema;
    for (const auto& [name, kind] : doc.items()) {
        auto k = kind.is_string() ? column_kind_from_string(kind.get<std::string>()) : std::nullopt;
        if (!k) throw Error(ErrorCode::MalformedInput, "schema kind for '" + name + "' is not a column kind");
        schema[name] = *k;
    }
    return schema;
}

/// Loads CSV (header row required) or a JSON array of flat records.
/// Kinds are inferred quantitative, then temporal, then nominal unless the schema names them.
/// In JSON records only JSON numbers count as numeric, so "2009" as a string is temporal.
inline Dataset load_dataset(std::string_view source, DataFormat format, const Schema& schema = {},
                            std::string id = {}) {
    if (id.empty()) id = "ds-" + hex64(fnv1a(source)).substr(0, 12);
    std::vector<std::string> names;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::vector<bool>> numbers;

    if (format == DataFormat::Csv) {
        auto records = detail::parse_csv(source);
        if (records.empty()) throw Error(ErrorCode::MalformedInput, "CSV has no header row");
        names = std::move(records.front());
        std::unordered_set<std::string> seen;
        for (const auto& n : names) {
            if (n.empty()) throw Error(ErrorCode::MalformedInput, "empty column name in CSV header");
            if (!seen.insert(n).second) throw Error(ErrorCode::DuplicateColumn, "column '" + n + "' appears twice");
        }
        for (std::size_t r = 1; r < records.size(); ++r) {
            auto& rec = records[r];
            if (rec.size() != names.size())
                throw Error(ErrorCode::MalformedInput, "CSV record " + std::to_string(r) + " has " +
                                                           std::to_string(rec.size()) + " fields, expected " +
                                                           std::to_string(names.size()));
            for (std::size_t c = 0; c < rec.size(); ++c)
                if (rec[c].empty())
                    throw Error(ErrorCode::NullCell,
                                "empty cell in column '" + names[c] + "' of record " + std::to_string(r));
            rows.push_back(std::move(rec));
        }
        return detail::build_dataset(std::move(id), names, rows, numbers, false, schema);
    }

    nlohmann::ordered_json doc; // keeps the file's column order
    try {
        doc = nlohmann::ordered_json::parse(source);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::MalformedInput, e.what());
    }
    if (!doc.is_array()) throw Error(ErrorCode::MalformedInput, "JSON dataset must be an array of records");
    for (std::size_t r = 0; r < doc.size(); ++r) {
        const auto& rec = doc[r];
        if (!rec.is_object()) throw Error(ErrorCode::MalformedInput, "record " + std::to_string(r) + " is not an object");
        if (r == 0) {
            for (const auto& [k, v] : rec.items()) names.push_back(k);
        } else {
            for (const auto& [k, v] : rec.items())
                if (std::find(names.begin(), names.end(), k) == names.end())
                    throw Error(ErrorCode::MalformedInput, "record " + std::to_string(r) + " has unknown key '" + k + "'");
        }
        std::vector<std::string> row;
        std::vector<bool> num;
        for (const auto& name : names) {
            auto it = rec.find(name);
            if (it == rec.end() || it->is_null())
                throw Error(ErrorCode::NullCell, "record " + std::to_string(r) + " has no value for '" + name + "'");
            if (it->is_number()) {
                row.push_back(format_number(it->get<double>()));
                num.push_back(true);
            } else if (it->is_string()) {
                auto s = it->get<std::string>();
                if (s.empty())
                    throw Error(ErrorCode::NullCell, "record " + std::to_string(r) + " has empty '" + name + "'");
                row.push_back(std::move(s));
                num.push_back(false);
            } else if (it->is_boolean()) {
                row.push_back(it->get<bool>() ? "true" : "false");
                num.push_back(false);
            } else {
                throw Error(ErrorCode::MalformedInput, "record " + std::to_string(r) + " field '" + name + "' is nested");
            }
        }
        rows.push_back(std::move(row));
        numbers.push_back(std::move(num));
    }
    return detail::build_dataset(std::move(id), names, rows, numbers, true, schema);
}

} // namespace factdeck
