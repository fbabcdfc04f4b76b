#include "ctis/iteration_study.hpp"

#include <chrono>
#include <cmath>

#include "ctis/detail/rng.hpp"
#include "ctis/error.hpp"
#include "ctis/metrics.hpp"

namespace ctis {
namespace {

struct Stats {
    double mean = 0.0;
    double stddev = 0.0;
};

Stats stats(const std::vector<double>& v) {
    Stats s;
    if (v.empty()) return s;
    for (double x : v) s.mean += x;
    s.mean /= static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    return s;
}

}  // namespace

std::vector<IterationStudyRow> run_iteration_study(const IterationStudyConfig& config) {
    if (config.iterations.empty()) throw ConfigError("iteration list is empty");
    if (config.repetitions == 0) throw ConfigError("repetitions must be >= 1");
    if (config.kinds.empty()) throw ConfigError("scene kind list is empty");

    const ShiftGeometry geometry(config.side, config.shifts.empty() ? default_shifts(config.bands) : config.shifts);
    const auto H = SparseSystemMatrix::build(geometry);

    const std::size_t n_counts = config.iterations.size();
    std::vector<std::vector<double>> ms(n_counts), errs(n_counts), abs_errs(n_counts);
    for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
        SceneSpec spec;
        spec.kind = config.kinds[rep % config.kinds.size()];
        spec.seed = detail::mix_seed(config.seed, rep);
        spec.rows = spec.cols = config.side;
        spec.bands = config.bands;
        const auto truth = generate_scene(spec);
        const auto g = simulate(truth, geometry);

        for (std::size_t i = 0; i < n_counts; ++i) {
            EmConfig cfg;
            cfg.iterations = config.iterations[i];
            cfg.init = config.init;
            const auto t0 = std::chrono::steady_clock::now();
            const auto result = reconstruct(H, g, cfg);
            ms[i].push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
            errs[i].push_back(mse(truth, result.estimate));
            abs_errs[i].push_back(mae(truth, result.estimate));
        }
    }

    std::vector<IterationStudyRow> rows;
    rows.reserve(n_counts);
    for (std::size_t i = 0; i < n_counts; ++i) {
        const auto t = stats(ms[i]);
        const auto e = stats(errs[i]);
        rows.push_back({config.iterations[i], t.mean, t.stddev, e.mean, e.stddev, stats(abs_errs[i]).mean});
    }
    return rows;
}

double linear_fit_r2(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw DimensionError("linear fit needs >= 2 paired points");
    const auto n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw DimensionError("linear fit needs distinct x values");
    if (syy == 0.0) return 1.0;
    return (sxy * sxy) / (sxx * syy);
}

}  // namespace ctis
