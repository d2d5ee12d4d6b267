#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "memclass/errors.hpp"
#include "memclass/ingest.hpp"
#include "memclass/rng.hpp"
#include "memclass/table.hpp"

namespace memclass {

// ---------------------------------------------------------------------------
// Indicator encoding
// ---------------------------------------------------------------------------

// Converts a raw text table into a numeric FeatureTable. Each column named in
// `categorical` is replaced in place by one 0/1 indicator column per distinct
// value, named "<col>=<value>" in sorted-value order; every other column must
// parse as a finite real in every row.
inline FeatureTable one_hot_encode(const RawTable& raw,
                                   const std::vector<std::string>& categorical) {
    std::vector<bool> is_categorical(raw.column_count(), false);
    for (const auto& name : categorical) {
        const int idx = raw.column_index(name);
        if (idx < 0) throw DataError("categorical column not found: '" + name + "'");
        is_categorical[static_cast<std::size_t>(idx)] = true;
    }

    struct ColumnPlan {
        std::size_t source;
        bool categorical;
        std::vector<std::string> values; // sorted distinct values when categorical
    };
    std::vector<ColumnPlan> plan;
    std::vector<std::string> out_names;
    for (std::size_t j = 0; j < raw.column_count(); ++j) {
        ColumnPlan p{j, is_categorical[j], {}};
        if (p.categorical) {
            std::set<std::string> distinct;
            for (const auto& row : raw.rows) distinct.insert(row[j]);
            p.values.assign(distinct.begin(), distinct.end());
            for (const auto& v : p.values) out_names.push_back(raw.column_names[j] + "=" + v);
        } else {
            out_names.push_back(raw.column_names[j]);
        }
        plan.push_back(std::move(p));
    }

    std::vector<double> values;
    values.reserve(raw.row_count() * out_names.size());
    for (std::size_t i = 0; i < raw.row_count(); ++i) {
        for (const auto& p : plan) {
            const std::string& cell = raw.rows[i][p.source];
            if (p.categorical) {
                for (const auto& v : p.values) values.push_back(cell == v ? 1.0 : 0.0);
            } else {
                const auto parsed = parse_double(cell);
                if (!parsed) {
                    throw DataError("non-numeric cell '" + cell + "' at row " + std::to_string(i) +
                                    ", column '" + raw.column_names[p.source] + "'");
                }
                values.push_back(*parsed);
            }
        }
    }
    return FeatureTable(std::move(out_names), std::move(values));
}

// Drops the named columns and parses the rest numerically. The input table is
// untouched.
inline FeatureTable to_feature_table(const RawTable& raw, const std::vector<std::string>& drop,
                                     const std::vector<std::string>& categorical = {}) {
    std::vector<bool> keep(raw.column_count(), true);
    for (const auto& name : drop) {
        const int idx = raw.column_index(name);
        if (idx < 0) throw DataError("cannot drop missing column: '" + name + "'");
        keep[static_cast<std::size_t>(idx)] = false;
    }
    RawTable sub;
    for (std::size_t j = 0; j < raw.column_count(); ++j) {
        if (keep[j]) sub.column_names.push_back(raw.column_names[j]);
    }
    sub.rows.reserve(raw.row_count());
    for (const auto& row : raw.rows) {
        std::vector<std::string> cells;
        cells.reserve(sub.column_names.size());
        for (std::size_t j = 0; j < raw.column_count(); ++j) {
            if (keep[j]) cells.push_back(row[j]);
        }
        sub.rows.push_back(std::move(cells));
    }
    std::vector<std::string> kept_categorical;
    for (const auto& name : categorical) {
        if (sub.column_index(name) >= 0) kept_categorical.push_back(name);
    }
    return one_hot_encode(sub, kept_categorical);
}

// ---------------------------------------------------------------------------
// Min-max scaling
// ---------------------------------------------------------------------------

struct ScalerParams {
    std::vector<std::string> column_names;
    std::vector<double> min;
    std::vector<double> max;

    bool operator==(const ScalerParams& other) const {
        return column_names == other.column_names && min == other.min && max == other.max;
    }
};

inline ScalerParams fit_minmax(const FeatureTable& train) {
    if (train.row_count() == 0) throw DataError("cannot fit scaler on an empty table");
    ScalerParams params;
    params.column_names = train.column_names();
    params.min.resize(train.column_count());
    params.max.resize(train.column_count());
    for (std::size_t j = 0; j < train.column_count(); ++j) {
        double lo = train.at(0, j), hi = train.at(0, j);
        for (std::size_t i = 1; i < train.row_count(); ++i) {
            lo = std::min(lo, train.at(i, j));
            hi = std::max(hi, train.at(i, j));
        }
        params.min[j] = lo;
        params.max[j] = hi;
    }
    return params;
}

// x' = (x - min) / (max - min); constant columns map to 0. Values outside the
// fitted range are not clamped, so test rows may land outside [0, 1].
inline FeatureTable apply_minmax(const FeatureTable& table, const ScalerParams& params) {
    if (table.column_names() != params.column_names) {
        throw DataError("scaler was fitted on a different column set");
    }
    std::vector<double> values;
    values.reserve(table.row_count() * table.column_count());
    for (std::size_t i = 0; i < table.row_count(); ++i) {
        for (std::size_t j = 0; j < table.column_count(); ++j) {
            const double span = params.max[j] - params.min[j];
            values.push_back(span == 0.0 ? 0.0 : (table.at(i, j) - params.min[j]) / span);
        }
    }
    return FeatureTable(table.column_names(), std::move(values));
}

// ---------------------------------------------------------------------------
// Stratified splitting
// ---------------------------------------------------------------------------

struct SplitResult {
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
    std::uint64_t seed = 0;
    double ratio = 0.0;
};

// Seeded per-class shuffle; round(ratio * n_c) rows of every class go to
// train, clamped so both sides keep at least one row per non-empty class.
inline SplitResult stratified_split(const LabelVector& labels, double ratio,
                                    std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0)) {
        throw UsageError("split ratio must lie strictly between 0 and 1");
    }
    std::vector<std::vector<std::size_t>> by_class(labels.schema.n_classes());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        by_class[static_cast<std::size_t>(labels.values[i])].push_back(i);
    }

    SplitResult split;
    split.seed = seed;
    split.ratio = ratio;
    SeedSequence seeds(seed);
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        auto& members = by_class[c];
        const std::uint64_t class_seed = seeds.next(); // consumed even for empty classes
        if (members.empty()) continue;
        if (members.size() < 2) {
            throw DataError("class '" + labels.schema.class_names[c] +
                            "' has fewer than 2 samples; cannot split");
        }
        Rng rng(class_seed);
        rng.shuffle(members);
        auto n_train = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(members.size())));
        n_train = std::clamp<std::size_t>(n_train, 1, members.size() - 1);
        split.train_indices.insert(split.train_indices.end(), members.begin(),
                                   members.begin() + static_cast<std::ptrdiff_t>(n_train));
        split.test_indices.insert(split.test_indices.end(),
                                  members.begin() + static_cast<std::ptrdiff_t>(n_train),
                                  members.end());
    }
    std::sort(split.train_indices.begin(), split.train_indices.end());
    std::sort(split.test_indices.begin(), split.test_indices.end());
    return split;
}

inline LabelVector take_labels(const LabelVector& labels, const std::vector<std::size_t>& indices) {
    LabelVector out;
    out.schema = labels.schema;
    out.values.reserve(indices.size());
    for (std::size_t i : indices) out.values.push_back(labels.values[i]);
    return out;
}

} // namespace memclass
