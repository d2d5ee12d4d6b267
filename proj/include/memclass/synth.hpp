#pragma once

#include <cstdint>
#include <string>

#include "memclass/errors.hpp"
#include "memclass/rng.hpp"
#include "memclass/util.hpp"

namespace memclass {

// Gaussian-blob dataset in the ingest schema: Category, f1..fN, Class. Class c
// is centered at c * separation on every coordinate with unit variance. Row i
// belongs to class i % classes, which spreads any remainder round-robin.
// Output is byte-identical for identical arguments.
inline std::string synth_blobs_csv(int classes, int rows, int features, double separation,
                                   std::uint64_t seed) {
    if (classes < 2 || classes > 4) {
        throw UsageError("classes must be between 2 and 4 (benign + up to three families)");
    }
    if (rows < 2 * classes) throw UsageError("need at least two rows per class");
    if (features < 1) throw UsageError("need at least one feature");

    static constexpr const char* kFamilies[] = {"Benign", "Spyware", "Ransomware", "Trojan"};

    std::string out = "Category";
    for (int f = 1; f <= features; ++f) out += ",f" + std::to_string(f);
    out += ",Class\n";

    Rng rng(seed);
    for (int i = 0; i < rows; ++i) {
        const int c = i % classes;
        if (c == 0) {
            out += "Benign";
        } else {
            out += std::string(kFamilies[c]) + "-synth" + std::to_string(c) + "-" +
                   std::to_string(i);
        }
        const double center = static_cast<double>(c) * separation;
        for (int f = 0; f < features; ++f) {
            out += "," + format_double(center + rng.normal());
        }
        out += c == 0 ? ",Benign\n" : ",Malicious\n";
    }
    return out;
}

} // namespace memclass
