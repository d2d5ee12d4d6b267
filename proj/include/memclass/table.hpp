#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "memclass/errors.hpp"

namespace memclass {

// Immutable numeric matrix, row-major, with named columns. All cells are
// finite by construction.
class FeatureTable {
public:
    FeatureTable() = default;

    FeatureTable(std::vector<std::string> column_names, std::vector<double> values)
        : column_names_(std::move(column_names)), values_(std::move(values)) {
        cols_ = column_names_.size();
        if (cols_ == 0) {
            if (!values_.empty()) throw DataError("feature table with values but no columns");
            rows_ = 0;
            return;
        }
        if (values_.size() % cols_ != 0) {
            throw DataError("feature table size is not a multiple of the column count");
        }
        rows_ = values_.size() / cols_;
        for (double v : values_) {
            if (!std::isfinite(v)) throw DataError("non-finite value in feature table");
        }
    }

    std::size_t row_count() const { return rows_; }
    std::size_t column_count() const { return cols_; }
    const std::vector<std::string>& column_names() const { return column_names_; }

    double at(std::size_t row, std::size_t col) const { return values_[row * cols_ + col]; }
    std::span<const double> row(std::size_t r) const {
        return {values_.data() + r * cols_, cols_};
    }
    const std::vector<double>& values() const { return values_; }

    int column_index(std::string_view name) const {
        for (std::size_t i = 0; i < cols_; ++i) {
            if (column_names_[i] == name) return static_cast<int>(i);
        }
        return -1;
    }

    FeatureTable take_rows(const std::vector<std::size_t>& indices) const {
        std::vector<double> out;
        out.reserve(indices.size() * cols_);
        for (std::size_t r : indices) {
            out.insert(out.end(), values_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                       values_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
        }
        return FeatureTable(column_names_, std::move(out));
    }

private:
    std::vector<std::string> column_names_;
    std::vector<double> values_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
};

} // namespace memclass
