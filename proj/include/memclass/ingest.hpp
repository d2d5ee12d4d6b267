#pragma once

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "memclass/errors.hpp"
#include "memclass/util.hpp"

namespace memclass {

// ---------------------------------------------------------------------------
// Raw dataset carrier: header + text cells, no type coercion.
// ---------------------------------------------------------------------------

struct RawTable {
    std::vector<std::string> column_names;
    std::vector<std::vector<std::string>> rows;

    std::size_t row_count() const { return rows.size(); }
    std::size_t column_count() const { return column_names.size(); }

    // -1 when absent.
    int column_index(std::string_view name) const {
        for (std::size_t i = 0; i < column_names.size(); ++i) {
            if (column_names[i] == name) return static_cast<int>(i);
        }
        return -1;
    }
};

// Reads a comma-separated UTF-8 file with a mandatory header row. Cells are
// trimmed; ragged rows and duplicate header names are data errors.
inline RawTable load_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path.string());

    RawTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1) {
            table.column_names = split_csv_line(line);
            std::set<std::string> seen;
            for (const auto& name : table.column_names) {
                if (name.empty()) {
                    throw DataError("empty column name in header of " + path.string());
                }
                if (!seen.insert(name).second) {
                    throw DataError("duplicate column name '" + name + "' in header of " +
                                    path.string());
                }
            }
            continue;
        }
        if (line.empty() && line_no > 1) continue; // tolerate trailing blank line
        auto cells = split_csv_line(line);
        if (cells.size() != table.column_names.size()) {
            throw DataError("ragged row at line " + std::to_string(line_no) + " of " +
                            path.string() + ": expected " +
                            std::to_string(table.column_names.size()) + " cells, got " +
                            std::to_string(cells.size()));
        }
        table.rows.push_back(std::move(cells));
    }
    if (line_no == 0) throw DataError("empty file (missing header row): " + path.string());
    return table;
}

inline RawTable take_raw_rows(const RawTable& raw, const std::vector<std::size_t>& keep) {
    RawTable out;
    out.column_names = raw.column_names;
    out.rows.reserve(keep.size());
    for (std::size_t i : keep) out.rows.push_back(raw.rows[i]);
    return out;
}

// ---------------------------------------------------------------------------
// Label schemas and derivation
// ---------------------------------------------------------------------------

enum class TaskKind { Binary, MultiClass };

inline std::string task_name(TaskKind kind) {
    return kind == TaskKind::Binary ? "binary" : "multiclass";
}

inline TaskKind parse_task(std::string_view name) {
    if (name == "binary") return TaskKind::Binary;
    if (name == "multiclass") return TaskKind::MultiClass;
    throw UsageError("unknown task '" + std::string(name) + "' (expected binary|multiclass)");
}

struct LabelSchema {
    TaskKind kind = TaskKind::Binary;
    std::vector<std::string> class_names;

    static LabelSchema binary() { return {TaskKind::Binary, {"benign", "malware"}}; }
    static LabelSchema multiclass() {
        return {TaskKind::MultiClass, {"benign", "spyware", "ransomware", "trojan"}};
    }
    static LabelSchema for_task(TaskKind k) {
        return k == TaskKind::Binary ? binary() : multiclass();
    }

    std::size_t n_classes() const { return class_names.size(); }

    bool operator==(const LabelSchema& other) const {
        return kind == other.kind && class_names == other.class_names;
    }
};

struct LabelVector {
    LabelSchema schema;
    std::vector<int> values;

    std::size_t size() const { return values.size(); }

    std::vector<std::size_t> histogram() const {
        std::vector<std::size_t> h(schema.n_classes(), 0);
        for (int v : values) h[static_cast<std::size_t>(v)]++;
        return h;
    }
};

// Column names carrying the labels; overridable from the CLI.
struct LabelColumns {
    std::string class_column = "Class";
    std::string category_column = "Category";
};

namespace detail {

// Family name = Category prefix up to the first '-', compared case-insensitively.
inline std::string category_prefix(std::string_view category) {
    const std::size_t dash = category.find('-');
    return to_lower(dash == std::string_view::npos ? category : category.substr(0, dash));
}

inline int multiclass_family_index(const std::string& prefix) {
    if (prefix == "benign") return 0;
    if (prefix == "spyware") return 1;
    if (prefix == "ransomware") return 2;
    if (prefix == "trojan") return 3;
    return -1;
}

// Shared per-row rule for both schemas; throws DataError on any invalid row.
inline int derive_label_cells(const std::string& class_cell, const std::string& category_cell,
                              TaskKind kind, std::size_t row_index) {
    const std::string prefix = category_prefix(category_cell);
    const int family = multiclass_family_index(prefix);
    const std::string where = " (row " + std::to_string(row_index) + ")";

    if (iequals(class_cell, "Benign")) {
        if (family > 0) {
            throw DataError("inconsistent row: Class=Benign but Category names family '" +
                            prefix + "'" + where);
        }
        return 0;
    }
    if (iequals(class_cell, "Malicious")) {
        if (family <= 0) {
            throw DataError("unknown malware family in Category '" + category_cell + "'" + where);
        }
        return kind == TaskKind::Binary ? 1 : family;
    }
    throw DataError("unknown class value '" + class_cell + "'" + where);
}

} // namespace detail

// Maps the Class/Category text columns onto integer class indices.
// Binary: Benign->0, Malicious->1. Multi-class: benign 0, spyware 1,
// ransomware 2, trojan 3 with the family taken from the Category prefix.
inline LabelVector derive_labels(const RawTable& raw, const LabelSchema& schema,
                                 const LabelColumns& columns = {}) {
    const int class_col = raw.column_index(columns.class_column);
    if (class_col < 0) throw DataError("missing class column '" + columns.class_column + "'");
    const int cat_col = raw.column_index(columns.category_column);
    if (cat_col < 0) throw DataError("missing category column '" + columns.category_column + "'");

    LabelVector labels;
    labels.schema = schema;
    labels.values.reserve(raw.row_count());
    for (std::size_t i = 0; i < raw.row_count(); ++i) {
        labels.values.push_back(detail::derive_label_cells(
            raw.rows[i][static_cast<std::size_t>(class_col)],
            raw.rows[i][static_cast<std::size_t>(cat_col)], schema.kind, i));
    }
    return labels;
}

// Row indices that would fail label derivation or numeric parsing of the
// feature cells. Used by --drop-bad-rows; feature columns are everything not
// listed in `drop` and not declared categorical.
inline std::vector<std::size_t> find_invalid_rows(const RawTable& raw, const LabelSchema& schema,
                                                  const LabelColumns& columns,
                                                  const std::vector<std::string>& drop,
                                                  const std::vector<std::string>& categorical) {
    const int class_col = raw.column_index(columns.class_column);
    const int cat_col = raw.column_index(columns.category_column);
    if (class_col < 0) throw DataError("missing class column '" + columns.class_column + "'");
    if (cat_col < 0) throw DataError("missing category column '" + columns.category_column + "'");

    std::vector<bool> is_numeric_feature(raw.column_count(), true);
    for (const auto& name : drop) {
        const int idx = raw.column_index(name);
        if (idx >= 0) is_numeric_feature[static_cast<std::size_t>(idx)] = false;
    }
    for (const auto& name : categorical) {
        const int idx = raw.column_index(name);
        if (idx >= 0) is_numeric_feature[static_cast<std::size_t>(idx)] = false;
    }

    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < raw.row_count(); ++i) {
        bool ok = true;
        try {
            detail::derive_label_cells(raw.rows[i][static_cast<std::size_t>(class_col)],
                                       raw.rows[i][static_cast<std::size_t>(cat_col)],
                                       schema.kind, i);
        } catch (const DataError&) {
            ok = false;
        }
        for (std::size_t j = 0; ok && j < raw.column_count(); ++j) {
            if (is_numeric_feature[j] && !parse_double(raw.rows[i][j])) ok = false;
        }
        if (!ok) bad.push_back(i);
    }
    return bad;
}

} // namespace memclass
