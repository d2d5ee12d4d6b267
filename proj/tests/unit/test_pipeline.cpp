#include <doctest.h>

#include <algorithm>
#include <set>

#include "memclass/pipeline.hpp"
#include "oracles.hpp"

using namespace memclass;

namespace {

FeatureTable column(std::vector<double> values) {
    return FeatureTable({"x"}, std::move(values));
}

} // namespace

TEST_CASE("one_hot_encode expands categorical columns in sorted-value order") {
    RawTable raw;
    raw.column_names = {"os", "v"};
    raw.rows = {{"B", "1"}, {"A", "2"}, {"B", "3"}};
    const FeatureTable table = one_hot_encode(raw, {"os"});
    CHECK(table.column_names() == std::vector<std::string>{"os=A", "os=B", "v"});
    CHECK(table.at(0, 0) == 0.0);
    CHECK(table.at(0, 1) == 1.0);
    CHECK(table.at(1, 0) == 1.0);
    CHECK(table.at(1, 1) == 0.0);
    CHECK(table.at(2, 2) == 3.0);
}

TEST_CASE("one_hot_encode with no categorical columns is the identity") {
    RawTable raw;
    raw.column_names = {"a", "b"};
    raw.rows = {{"1", "2"}, {"3", "4"}};
    const FeatureTable table = one_hot_encode(raw, {});
    CHECK(table.column_names() == raw.column_names);
    CHECK(table.values() == std::vector<double>{1, 2, 3, 4});
}

TEST_CASE("one_hot_encode single distinct value yields one constant indicator") {
    RawTable raw;
    raw.column_names = {"os"};
    raw.rows = {{"A"}, {"A"}};
    const FeatureTable table = one_hot_encode(raw, {"os"});
    CHECK(table.column_names() == std::vector<std::string>{"os=A"});
    CHECK(table.values() == std::vector<double>{1, 1});
}

TEST_CASE("one_hot_encode errors") {
    RawTable raw;
    raw.column_names = {"a"};
    raw.rows = {{"x"}};
    CHECK_THROWS_AS(one_hot_encode(raw, {"nope"}), DataError);
    CHECK_THROWS_AS(one_hot_encode(raw, {}), DataError); // non-numeric, undeclared
}

TEST_CASE("encoding then dropping indicators reconstructs the numeric subtable") {
    RawTable raw;
    raw.column_names = {"a", "os", "b"};
    raw.rows = {{"1", "X", "4"}, {"2", "Y", "5"}, {"3", "X", "6"}};
    const FeatureTable encoded = one_hot_encode(raw, {"os"});
    const FeatureTable direct = to_feature_table(raw, {"os"});

    std::vector<double> reconstructed;
    for (std::size_t i = 0; i < encoded.row_count(); ++i) {
        for (std::size_t j = 0; j < encoded.column_count(); ++j) {
            if (encoded.column_names()[j].find("os=") != 0) {
                reconstructed.push_back(encoded.at(i, j));
            }
        }
    }
    CHECK(reconstructed == direct.values());
}

TEST_CASE("fit_minmax per-column extrema") {
    FeatureTable table({"a", "b"}, {2, 5, 4, 5, 6, 7});
    const ScalerParams params = fit_minmax(table);
    CHECK(params.min == std::vector<double>{2, 5});
    CHECK(params.max == std::vector<double>{6, 7});
    CHECK_THROWS_AS(fit_minmax(FeatureTable({"a"}, {})), DataError);
}

TEST_CASE("apply_minmax formula, degenerate column, no clamping") {
    const ScalerParams fitted = fit_minmax(column({2, 4, 6}));
    const FeatureTable scaled = apply_minmax(column({2, 4, 6}), fitted);
    CHECK(scaled.values() == std::vector<double>{0.0, 0.5, 1.0});

    ScalerParams wide{{"x"}, {0}, {10}};
    CHECK(apply_minmax(column({12}), wide).values() == std::vector<double>{1.2});

    const ScalerParams flat = fit_minmax(column({5, 5}));
    CHECK(flat.min == flat.max);
    CHECK(apply_minmax(column({5, 5}), flat).values() == std::vector<double>{0.0, 0.0});

    ScalerParams other{{"y"}, {0}, {1}};
    CHECK_THROWS_AS(apply_minmax(column({1}), other), DataError);
}

TEST_CASE("scaling train columns lands exactly on [0,1] and preserves order") {
    Rng rng(77);
    for (int round = 0; round < 20; ++round) {
        const FeatureTable table = oracles::random_table(rng, 40, 3);
        const FeatureTable scaled = apply_minmax(table, fit_minmax(table));
        for (std::size_t j = 0; j < scaled.column_count(); ++j) {
            double lo = 1e9, hi = -1e9;
            for (std::size_t i = 0; i < scaled.row_count(); ++i) {
                lo = std::min(lo, scaled.at(i, j));
                hi = std::max(hi, scaled.at(i, j));
            }
            CHECK(lo == 0.0);
            CHECK(hi == 1.0);
            // Affine map: pairwise order preserved.
            for (std::size_t i = 1; i < scaled.row_count(); ++i) {
                const bool before = table.at(i - 1, j) < table.at(i, j);
                const bool after = scaled.at(i - 1, j) < scaled.at(i, j);
                CHECK(before == after);
            }
        }
    }
}

TEST_CASE("stratified_split: exact example and invariants") {
    LabelVector labels{LabelSchema::binary(), {0, 0, 0, 0, 0, 1, 1, 1, 1, 1}};
    const SplitResult split = stratified_split(labels, 0.8, 123);
    CHECK(split.train_indices.size() == 8);
    CHECK(split.test_indices.size() == 2);

    std::vector<int> train_hist(2, 0), test_hist(2, 0);
    for (auto i : split.train_indices) train_hist[static_cast<std::size_t>(labels.values[i])]++;
    for (auto i : split.test_indices) test_hist[static_cast<std::size_t>(labels.values[i])]++;
    CHECK(train_hist == std::vector<int>{4, 4});
    CHECK(test_hist == std::vector<int>{1, 1});

    // Partition of [0, n)
    std::set<std::size_t> all(split.train_indices.begin(), split.train_indices.end());
    all.insert(split.test_indices.begin(), split.test_indices.end());
    CHECK(all.size() == 10);
}

TEST_CASE("stratified_split determinism and seed sensitivity") {
    LabelVector labels{LabelSchema::binary(), {}};
    Rng rng(5);
    for (int i = 0; i < 40; ++i) labels.values.push_back(static_cast<int>(rng.below(2)));

    const SplitResult a = stratified_split(labels, 0.8, 9);
    const SplitResult b = stratified_split(labels, 0.8, 9);
    CHECK(a.train_indices == b.train_indices);
    CHECK(a.test_indices == b.test_indices);

    const SplitResult c = stratified_split(labels, 0.8, 10);
    std::vector<int> counts_a(2, 0), counts_c(2, 0);
    for (auto i : a.train_indices) counts_a[static_cast<std::size_t>(labels.values[i])]++;
    for (auto i : c.train_indices) counts_c[static_cast<std::size_t>(labels.values[i])]++;
    CHECK(counts_a == counts_c); // per-class counts identical across seeds
    CHECK(a.train_indices != c.train_indices);
}

TEST_CASE("stratified_split per-class proportion within one sample") {
    Rng rng(31);
    for (int round = 0; round < 25; ++round) {
        LabelVector labels{LabelSchema::multiclass(), {}};
        const std::size_t n = 20 + rng.below(200);
        for (std::size_t i = 0; i < n; ++i) labels.values.push_back(static_cast<int>(rng.below(4)));
        const double ratio = 0.5 + rng.unit() * 0.4;
        SplitResult split;
        try {
            split = stratified_split(labels, ratio, rng.next());
        } catch (const DataError&) {
            continue; // a class drew < 2 members
        }
        const auto hist = labels.histogram();
        std::vector<std::size_t> train_hist(4, 0);
        for (auto i : split.train_indices) train_hist[static_cast<std::size_t>(labels.values[i])]++;
        for (std::size_t c = 0; c < 4; ++c) {
            if (hist[c] == 0) continue;
            const double expected = ratio * static_cast<double>(hist[c]);
            CHECK(std::abs(static_cast<double>(train_hist[c]) - expected) < 1.0);
        }
        CHECK(split.train_indices.size() + split.test_indices.size() == n);
    }
}

TEST_CASE("stratified_split rejects tiny classes and degenerate ratios") {
    LabelVector labels{LabelSchema::binary(), {0, 0, 1}};
    CHECK_THROWS_AS(stratified_split(labels, 0.8, 1), DataError);
    LabelVector ok{LabelSchema::binary(), {0, 0, 1, 1}};
    CHECK_THROWS_AS(stratified_split(ok, 0.0, 1), UsageError);
    CHECK_THROWS_AS(stratified_split(ok, 1.0, 1), UsageError);
}
