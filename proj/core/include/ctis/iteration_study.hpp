#pragma once

#include <cstdint>
#include <vector>

#include "ctis/em_solver.hpp"
#include "ctis/scene.hpp"

namespace ctis {

/// Reconstruction error and cost of EM as a function of iteration count,
/// averaged over independently generated exact-data instances.
struct IterationStudyConfig {
    std::vector<std::size_t> iterations{1, 5, 10, 20, 50, 100, 500, 1000};
    std::size_t repetitions = 20;
    std::size_t side = 32;
    std::size_t bands = 5;
    /// Empty means default_shifts(bands).
    std::vector<std::uint32_t> shifts;
    /// Instances alternate between these scene kinds.
    std::vector<SceneKind> kinds{SceneKind::mosaic, SceneKind::blobs};
    std::uint64_t seed = 1;
    EmInit init = EmInit::backprojection;
};

struct IterationStudyRow {
    std::size_t iterations = 0;
    double mean_ms = 0.0;
    double stddev_ms = 0.0;
    double mse = 0.0;
    double mse_stddev = 0.0;
    double mae = 0.0;
};

[[nodiscard]] std::vector<IterationStudyRow> run_iteration_study(const IterationStudyConfig& config);

/// Coefficient of determination of the least-squares line y ~ a + b x.
[[nodiscard]] double linear_fit_r2(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ctis
