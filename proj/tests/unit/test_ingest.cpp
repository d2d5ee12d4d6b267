#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "memclass/ingest.hpp"
#include "memclass/pipeline.hpp"

using namespace memclass;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& content) {
    const fs::path path = fs::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    return path;
}

RawTable sample_raw() {
    RawTable raw;
    raw.column_names = {"Category", "a", "b", "c", "Class"};
    raw.rows = {
        {"Benign", "1", "2.5", "3", "Benign"},
        {"Ransomware-Shade-x", "4", "5", "6", "Malicious"},
        {"Spyware-Gator-7", "7", "8", "9", "Malicious"},
        {"Trojan-Emotet-1", "1", "0", "2", "Malicious"},
    };
    return raw;
}

} // namespace

TEST_CASE("load_csv parses header and rows with trimming") {
    const auto path = write_temp("mc_basic.csv", "a,b , c,d\n1, 2,3 ,4\n5,6,7,8\n");
    const RawTable raw = load_csv(path);
    CHECK(raw.row_count() == 2);
    CHECK(raw.column_count() == 4);
    CHECK(raw.column_names[1] == "b");
    CHECK(raw.column_names[2] == "c");
    CHECK(raw.rows[0][1] == "2");
    CHECK(raw.rows[0][2] == "3");
}

TEST_CASE("load_csv rejects ragged rows with the line number") {
    const auto path = write_temp("mc_ragged.csv", "a,b,c,d\n1,2,3,4\n1,2,3\n");
    CHECK_THROWS_WITH_AS(load_csv(path), doctest::Contains("line 3"), DataError);
}

TEST_CASE("load_csv rejects duplicate and empty header names") {
    CHECK_THROWS_AS(load_csv(write_temp("mc_dup.csv", "a,b,a\n1,2,3\n")), DataError);
    CHECK_THROWS_AS(load_csv(write_temp("mc_empty_name.csv", "a,,c\n1,2,3\n")), DataError);
}

TEST_CASE("load_csv rejects a missing file") {
    CHECK_THROWS_AS(load_csv("/nonexistent/nope.csv"), DataError);
}

TEST_CASE("derive_labels maps binary and multiclass targets") {
    const RawTable raw = sample_raw();

    const LabelVector binary = derive_labels(raw, LabelSchema::binary());
    CHECK(binary.values == std::vector<int>{0, 1, 1, 1});

    const LabelVector multi = derive_labels(raw, LabelSchema::multiclass());
    CHECK(multi.values == std::vector<int>{0, 2, 1, 3});

    // Deterministic: a second run yields the identical vector.
    CHECK(derive_labels(raw, LabelSchema::multiclass()).values == multi.values);
}

TEST_CASE("derive_labels is case-insensitive on the family prefix") {
    RawTable raw = sample_raw();
    raw.rows[1][0] = "RANSOMWARE-shade-x";
    CHECK(derive_labels(raw, LabelSchema::multiclass()).values[1] == 2);
}

TEST_CASE("derive_labels rejects invalid rows") {
    SUBCASE("unknown family") {
        RawTable raw = sample_raw();
        raw.rows[1][0] = "Worm-foo-1";
        CHECK_THROWS_AS(derive_labels(raw, LabelSchema::multiclass()), DataError);
    }
    SUBCASE("unknown class value") {
        RawTable raw = sample_raw();
        raw.rows[0][4] = "Mystery";
        CHECK_THROWS_AS(derive_labels(raw, LabelSchema::binary()), DataError);
    }
    SUBCASE("benign row naming a malware family") {
        RawTable raw = sample_raw();
        raw.rows[0][0] = "Spyware-Gator-3";
        CHECK_THROWS_AS(derive_labels(raw, LabelSchema::binary()), DataError);
    }
    SUBCASE("missing label column") {
        RawTable raw = sample_raw();
        raw.column_names[4] = "NotClass";
        CHECK_THROWS_AS(derive_labels(raw, LabelSchema::binary()), DataError);
    }
}

TEST_CASE("to_feature_table drops columns and parses the rest") {
    const RawTable raw = sample_raw();
    const FeatureTable table = to_feature_table(raw, {"Category", "Class"});
    CHECK(table.column_count() == 3);
    CHECK(table.column_names() == std::vector<std::string>{"a", "b", "c"});
    CHECK(table.at(0, 1) == 2.5);
    CHECK(table.at(3, 2) == 2.0);

    // Input untouched, repeat call identical.
    CHECK(raw.column_count() == 5);
    const FeatureTable again = to_feature_table(raw, {"Category", "Class"});
    CHECK(again.values() == table.values());
}

TEST_CASE("to_feature_table error paths") {
    const RawTable raw = sample_raw();
    CHECK_THROWS_AS(to_feature_table(raw, {"missing"}), DataError);

    RawTable bad = raw;
    bad.rows[2][1] = "abc";
    CHECK_THROWS_WITH_AS(to_feature_table(bad, {"Category", "Class"}),
                         doctest::Contains("row 2"), DataError);
    CHECK_THROWS_WITH_AS(to_feature_table(bad, {"Category", "Class"}), doctest::Contains("'a'"),
                         DataError);

    RawTable inf = raw;
    inf.rows[1][2] = "inf";
    CHECK_THROWS_AS(to_feature_table(inf, {"Category", "Class"}), DataError);
}

TEST_CASE("find_invalid_rows flags label and parse failures") {
    RawTable raw = sample_raw();
    raw.rows[1][0] = "Worm-foo-1"; // bad family
    raw.rows[3][2] = "oops";       // bad numeric cell
    const auto bad = find_invalid_rows(raw, LabelSchema::multiclass(), {},
                                       {"Category", "Class"}, {});
    CHECK(bad == std::vector<std::size_t>{1, 3});

    const RawTable kept = take_raw_rows(raw, {0, 2});
    CHECK(kept.row_count() == 2);
    CHECK_NOTHROW(derive_labels(kept, LabelSchema::multiclass()));
}
