#pragma once

#include <cstdint>
#include <span>
#include <thread>
#include <vector>

#include "memclass/hyperparams.hpp"
#include "memclass/rng.hpp"
#include "memclass/table.hpp"
#include "memclass/tree.hpp"

namespace memclass {

// Static block partition; results land in caller-indexed slots, so the output
// is identical for any thread count.
template <typename Fn>
void parallel_for(std::size_t count, int n_threads, Fn&& fn) {
    if (n_threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(n_threads), count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

struct ForestModel {
    std::vector<Tree> trees;
    std::vector<std::uint64_t> tree_seeds;
};

// Bagged ensemble: tree i grows on n draws with replacement, from its own
// generator seeded by the i-th value of a splitmix64 stream over the forest
// seed. Each tree is self-contained, so parallel training is bit-identical
// to serial.
inline ForestModel fit_forest(const FeatureTable& table, std::span<const int> labels,
                              int n_classes, const ForestParams& params, std::uint64_t seed,
                              int n_threads = 1) {
    const std::size_t n = table.row_count();
    if (n == 0) throw DataError("cannot fit a forest on an empty table");

    ForestModel model;
    model.tree_seeds.resize(static_cast<std::size_t>(params.n_estimators));
    SeedSequence seeds(seed);
    for (auto& s : model.tree_seeds) s = seeds.next();

    model.trees.resize(static_cast<std::size_t>(params.n_estimators));
    parallel_for(model.trees.size(), n_threads, [&](std::size_t i) {
        Rng rng(model.tree_seeds[i]);
        std::vector<std::uint32_t> bootstrap(n);
        for (auto& r : bootstrap) r = static_cast<std::uint32_t>(rng.below(n));
        model.trees[i] = fit_tree_rows(table, labels, n_classes, params.tree, rng,
                                       std::move(bootstrap));
    });
    return model;
}

// Majority vote over tree predictions; ties break toward the lowest class
// index. Invariant under permutation of the tree list.
inline int predict_forest(const ForestModel& model, std::span<const double> row) {
    if (model.trees.empty()) throw ModelError("forest has no trees");
    std::vector<std::int64_t> votes(static_cast<std::size_t>(model.trees[0].n_classes), 0);
    for (const Tree& tree : model.trees) votes[static_cast<std::size_t>(tree.predict(row))]++;
    int cls = 0;
    for (std::size_t c = 1; c < votes.size(); ++c) {
        if (votes[c] > votes[static_cast<std::size_t>(cls)]) cls = static_cast<int>(c);
    }
    return cls;
}

} // namespace memclass
