#include "ctis/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ctis/error.hpp"

namespace ctis {
namespace {

void require_same_dims(const HyperCube& truth, const HyperCube& pred) {
    if (truth.rows() != pred.rows() || truth.cols() != pred.cols() || truth.bands() != pred.bands()) {
        throw DimensionError("cube dims differ: " + std::to_string(truth.rows()) + "x" + std::to_string(truth.cols()) +
                             "x" + std::to_string(truth.bands()) + " vs " + std::to_string(pred.rows()) + "x" +
                             std::to_string(pred.cols()) + "x" + std::to_string(pred.bands()));
    }
}

struct Residuals {
    double sq = 0.0;
    double abs = 0.0;
};

Residuals residuals(const HyperCube& truth, const HyperCube& pred) {
    require_same_dims(truth, pred);
    Residuals r;
    const auto a = truth.data();
    const auto b = pred.data();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        r.sq += d * d;
        r.abs += std::abs(d);
    }
    return r;
}

nlohmann::json score_json(const CategoryScore& s) {
    return {{"mse", s.mse}, {"mae", s.mae}, {"count", s.count}, {"voxels", s.voxels}};
}

}  // namespace

double mse(const HyperCube& truth, const HyperCube& pred) {
    return residuals(truth, pred).sq / static_cast<double>(truth.size());
}

double mae(const HyperCube& truth, const HyperCube& pred) {
    return residuals(truth, pred).abs / static_cast<double>(truth.size());
}

void ScoreAccumulator::Sums::merge(const Sums& o) noexcept {
    sq += o.sq;
    abs += o.abs;
    count += o.count;
    voxels += o.voxels;
}

void ScoreAccumulator::add(const HyperCube& truth, const HyperCube& pred, const std::string& category,
                           const std::string& scene) {
    const auto r = residuals(truth, pred);
    const Sums s{r.sq, r.abs, 1, truth.size()};
    total_.merge(s);
    by_category_[category].merge(s);
    if (!scene.empty()) by_scene_[scene].merge(s);
}

void ScoreAccumulator::merge(const ScoreAccumulator& other) {
    total_.merge(other.total_);
    for (const auto& [k, v] : other.by_category_) by_category_[k].merge(v);
    for (const auto& [k, v] : other.by_scene_) by_scene_[k].merge(v);
}

CategoryScore ScoreAccumulator::finish(const Sums& s) noexcept {
    const double n = static_cast<double>(s.voxels);
    return {n > 0 ? s.sq / n : 0.0, n > 0 ? s.abs / n : 0.0, s.count, s.voxels};
}

ScoreReport ScoreAccumulator::report() const {
    if (empty()) throw EmptyReportError("no samples were scored");
    ScoreReport rep;
    const auto t = finish(total_);
    rep.mse = t.mse;
    rep.mae = t.mae;
    rep.count = t.count;
    rep.voxels = t.voxels;
    for (const auto& [k, v] : by_category_) rep.per_category[k] = finish(v);
    for (const auto& [k, v] : by_scene_) rep.per_scene[k] = finish(v);
    return rep;
}

std::string ScoreReport::to_json() const {
    nlohmann::json j;
    j["mse"] = mse;
    j["mae"] = mae;
    j["count"] = count;
    j["voxels"] = voxels;
    j["per_category"] = nlohmann::json::object();
    for (const auto& [k, v] : per_category) j["per_category"][k] = score_json(v);
    j["per_scene"] = nlohmann::json::object();
    for (const auto& [k, v] : per_scene) j["per_scene"][k] = score_json(v);
    return j.dump(2);
}

std::string ScoreReport::to_table() const {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof line, "%-14s %14s %14s %10s\n", "category", "MSE", "MAE", "samples");
    out << line;
    auto row = [&](const std::string& name, double m, double a, std::uint64_t n) {
        std::snprintf(line, sizeof line, "%-14s %14.6g %14.6g %10llu\n", name.c_str(), m, a,
                      static_cast<unsigned long long>(n));
        out << line;
    };
    for (const auto& [k, v] : per_category) row(k, v.mse, v.mae, v.count);
    for (const auto& [k, v] : per_scene) row("scene:" + k, v.mse, v.mae, v.count);
    row("total", mse, mae, count);
    return out.str();
}

}  // namespace ctis
