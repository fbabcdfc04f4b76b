#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ctis/hypercube.hpp"
#include "ctis/optics.hpp"
#include "ctis/system_matrix.hpp"

namespace ctis {

enum class EmInit : std::uint8_t {
    backprojection,  ///< f0 = H^T g
    ones,            ///< f0 = 1
};

[[nodiscard]] std::string_view to_string(EmInit init) noexcept;
[[nodiscard]] EmInit em_init_from_string(std::string_view name);

struct EmConfig {
    std::size_t iterations = 20;
    EmInit init = EmInit::backprojection;
    double epsilon = 1e-12;
    bool record_trajectory = false;
    /// Also evaluate the Poisson log-likelihood per iteration (costs a log
    /// per detector pixel). Only read when record_trajectory is set.
    bool record_loglik = true;
};

struct EmIteration {
    std::size_t k = 0;            ///< 1-based iteration index
    double loglik = 0.0;          ///< NaN when not recorded
    double residual_l1 = 0.0;     ///< ||g - H f_k||_1
    double ms = 0.0;              ///< wall time of this iteration
};

struct EmResult {
    HyperCube estimate;
    std::vector<EmIteration> trajectory;
    /// Set when g was all zero: the estimate is all zero by construction.
    bool zero_input = false;
    double total_ms = 0.0;
};

/// One multiplicative update:
///   f_next[j] = f[j] / colsum[j] * (H^T (g / max(H f, eps)))[j]
/// Throws DimensionError on length mismatch and DomainError on negative or
/// non-finite inputs.
[[nodiscard]] std::vector<double> em_step(const SparseSystemMatrix& H, std::span<const double> g,
                                          std::span<const double> f, double epsilon = 1e-12);

/// Runs cfg.iterations updates from cfg.init. Throws DimensionError if the
/// image geometry differs from H's, ConfigError on an invalid cfg.
[[nodiscard]] EmResult reconstruct(const SparseSystemMatrix& H, const CtisImage& g, const EmConfig& cfg = {});
[[nodiscard]] EmResult reconstruct(const SparseSystemMatrix& H, std::span<const double> g, const EmConfig& cfg = {});

/// sum_i g_i ln(max(g_hat_i, eps)) - g_hat_i. Throws DomainError on negative
/// entries, DimensionError on a length mismatch.
[[nodiscard]] double poisson_loglik(std::span<const double> g, std::span<const double> g_hat, double epsilon = 1e-12);

}  // namespace ctis
