#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "ctis/hypercube.hpp"

namespace ctis {

/// Mean squared error over all voxels. Throws DimensionError on mismatched dims.
[[nodiscard]] double mse(const HyperCube& truth, const HyperCube& pred);
/// Mean absolute error over all voxels.
[[nodiscard]] double mae(const HyperCube& truth, const HyperCube& pred);

struct CategoryScore {
    double mse = 0.0;
    double mae = 0.0;
    std::uint64_t count = 0;   ///< samples
    std::uint64_t voxels = 0;
};

struct ScoreReport {
    double mse = 0.0;
    double mae = 0.0;
    std::uint64_t count = 0;
    std::uint64_t voxels = 0;
    std::map<std::string, CategoryScore> per_category;  ///< full / sparse / blank
    std::map<std::string, CategoryScore> per_scene;     ///< mosaic / blobs / blank

    [[nodiscard]] std::string to_json() const;
    /// Aligned table: one row per category, then per scene kind, then total.
    [[nodiscard]] std::string to_table() const;
};

/// Streaming partial sums. Merging is associative, so workers can score
/// disjoint subsets and combine their accumulators.
class ScoreAccumulator {
public:
    void add(const HyperCube& truth, const HyperCube& pred, const std::string& category,
             const std::string& scene = {});
    void merge(const ScoreAccumulator& other);

    [[nodiscard]] bool empty() const noexcept { return total_.count == 0; }

    /// Voxel-weighted means. Throws EmptyReportError when nothing was added.
    [[nodiscard]] ScoreReport report() const;

private:
    struct Sums {
        double sq = 0.0;
        double abs = 0.0;
        std::uint64_t count = 0;
        std::uint64_t voxels = 0;
        void merge(const Sums& o) noexcept;
    };
    static CategoryScore finish(const Sums& s) noexcept;

    Sums total_;
    std::map<std::string, Sums> by_category_;
    std::map<std::string, Sums> by_scene_;
};

struct ScoredPair {
    const HyperCube* truth = nullptr;
    const HyperCube* pred = nullptr;
    std::string category;
    std::string scene;
};

/// Pulls pairs from `next` until it returns false.
template <typename Source>
[[nodiscard]] ScoreReport score_batch(Source&& next) {
    ScoreAccumulator acc;
    ScoredPair pair;
    while (next(pair)) acc.add(*pair.truth, *pair.pred, pair.category, pair.scene);
    return acc.report();
}

}  // namespace ctis
