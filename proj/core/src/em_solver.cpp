#include "ctis/em_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "ctis/error.hpp"
#include "ctis/parallel.hpp"

namespace ctis {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

void require_nonnegative(std::span<const double> v, const char* what) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i]) || v[i] < 0.0) {
            throw DomainError(std::string(what) + "[" + std::to_string(i) + "] is negative or non-finite");
        }
    }
}

/// ratio[i] = g[i] / max(g_hat[i], eps)
void detector_ratio(std::span<const double> g, std::span<const double> g_hat, double eps, std::span<double> ratio) {
    for (std::size_t i = 0; i < g.size(); ++i) ratio[i] = g[i] / std::max(g_hat[i], eps);
}

/// f[j] = f[j] / max(colsum[j], eps) * back[j]
void apply_correction(std::span<double> f, std::span<const double> colsum, std::span<const double> back, double eps) {
    parallel_for(f.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t j = begin; j < end; ++j) f[j] = f[j] / std::max(colsum[j], eps) * back[j];
    });
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s;
}

}  // namespace

std::string_view to_string(EmInit init) noexcept {
    return init == EmInit::backprojection ? "backprojection" : "ones";
}

EmInit em_init_from_string(std::string_view name) {
    if (name == "backprojection") return EmInit::backprojection;
    if (name == "ones") return EmInit::ones;
    throw ConfigError("unknown EM init mode '" + std::string(name) + "'");
}

std::vector<double> em_step(const SparseSystemMatrix& H, std::span<const double> g, std::span<const double> f,
                            double epsilon) {
    if (g.size() != H.rows() || f.size() != H.cols()) {
        throw DimensionError("em_step: image length " + std::to_string(g.size()) + " / cube length " +
                             std::to_string(f.size()) + " do not match H (" + std::to_string(H.rows()) + " x " +
                             std::to_string(H.cols()) + ")");
    }
    if (!(epsilon > 0.0)) throw DomainError("em_step: epsilon must be positive");
    require_nonnegative(g, "g");
    require_nonnegative(f, "f");

    const auto g_hat = H.matvec(f);
    std::vector<double> ratio(g.size());
    detector_ratio(g, g_hat, epsilon, ratio);
    const auto back = H.rmatvec(ratio);
    const auto colsum = H.column_sums();
    std::vector<double> next(f.begin(), f.end());
    apply_correction(next, colsum, back, epsilon);
    return next;
}

EmResult reconstruct(const SparseSystemMatrix& H, std::span<const double> g, const EmConfig& cfg) {
    if (cfg.iterations < 1) throw ConfigError("EM iterations must be >= 1");
    if (!(cfg.epsilon > 0.0)) throw ConfigError("EM epsilon must be positive");
    if (g.size() != H.rows()) {
        throw DimensionError("image length " + std::to_string(g.size()) + " does not match H rows " +
                             std::to_string(H.rows()));
    }
    require_nonnegative(g, "g");

    const auto start = Clock::now();
    EmResult result;
    result.zero_input = std::all_of(g.begin(), g.end(), [](double v) { return v == 0.0; });

    const auto colsum = H.column_sums();
    std::vector<double> f;
    if (cfg.init == EmInit::backprojection) {
        f = H.rmatvec(g);
    } else {
        f.assign(H.cols(), 1.0);
    }

    std::vector<double> g_hat(H.rows());
    std::vector<double> ratio(H.rows());
    std::vector<double> back(H.cols());
    H.matvec(f, g_hat);
    if (cfg.record_trajectory) result.trajectory.reserve(cfg.iterations);

    for (std::size_t k = 1; k <= cfg.iterations; ++k) {
        const auto t0 = Clock::now();
        detector_ratio(g, g_hat, cfg.epsilon, ratio);
        H.rmatvec(ratio, back);
        apply_correction(f, colsum, back, cfg.epsilon);
        H.matvec(f, g_hat);
        if (cfg.record_trajectory) {
            EmIteration it;
            it.k = k;
            it.residual_l1 = l1_distance(g, g_hat);
            it.loglik = cfg.record_loglik ? poisson_loglik(g, g_hat, cfg.epsilon)
                                          : std::numeric_limits<double>::quiet_NaN();
            it.ms = elapsed_ms(t0);
            result.trajectory.push_back(it);
        }
    }

    const auto& geom = H.geometry();
    result.estimate = HyperCube::devectorize(f, geom.cube_side(), geom.cube_side(), geom.bands());
    result.total_ms = elapsed_ms(start);
    return result;
}

EmResult reconstruct(const SparseSystemMatrix& H, const CtisImage& g, const EmConfig& cfg) {
    if (!(g.geometry() == H.geometry())) {
        throw DimensionError("image geometry does not match the system matrix geometry");
    }
    const auto flat = vectorize(g);
    return reconstruct(H, std::span<const double>(flat), cfg);
}

double poisson_loglik(std::span<const double> g, std::span<const double> g_hat, double epsilon) {
    if (g.size() != g_hat.size()) {
        throw DimensionError("poisson_loglik: lengths " + std::to_string(g.size()) + " and " +
                             std::to_string(g_hat.size()) + " differ");
    }
    require_nonnegative(g, "g");
    require_nonnegative(g_hat, "g_hat");
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i] != 0.0) s += g[i] * std::log(std::max(g_hat[i], epsilon));
        s -= g_hat[i];
    }
    return s;
}

}  // namespace ctis
