#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ctis/cube_io.hpp"
#include "ctis/dataset.hpp"
#include "ctis/em_solver.hpp"
#include "ctis/error.hpp"
#include "ctis/iteration_study.hpp"
#include "ctis/metrics.hpp"
#include "ctis/optics.hpp"
#include "ctis/parallel.hpp"
#include "ctis/scene.hpp"
#include "ctis/system_matrix.hpp"

namespace ctis::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct GlobalOptions {
    std::size_t threads = 0;
};

void echo_config(std::ostream& err, const std::string& command, json cfg, const GlobalOptions& global) {
    cfg["command"] = command;
    cfg["threads"] = thread_count();
    if (global.threads != 0) cfg["threads_flag"] = global.threads;
    err << "# config " << cfg.dump() << '\n';
}

ShiftGeometry make_geometry(std::size_t side, std::size_t bands, const std::vector<std::uint32_t>& shifts,
                            const std::string& weight) {
    return {side, shifts.empty() ? default_shifts(bands) : shifts, weight_mode_from_string(weight)};
}

// ---------------------------------------------------------------------------
// gen-scene

struct GenSceneOptions {
    std::string kind = "mosaic";
    std::uint64_t seed = 0;
    std::size_t rows = 200;
    std::size_t cols = 400;
    std::size_t bands = 5;
    std::size_t grid_rows = 4;
    std::size_t grid_cols = 6;
    std::size_t min_blobs = 3;
    std::size_t max_blobs = 8;
    std::string out;
    std::string pgm;
    std::size_t pgm_band = 0;
};

int cmd_gen_scene(const GenSceneOptions& o, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
    SceneSpec spec;
    spec.kind = scene_kind_from_string(o.kind);
    spec.seed = o.seed;
    spec.rows = o.rows;
    spec.cols = o.cols;
    spec.bands = o.bands;
    spec.grid_rows = o.grid_rows;
    spec.grid_cols = o.grid_cols;
    spec.min_blobs = o.min_blobs;
    spec.max_blobs = o.max_blobs;
    echo_config(err, "gen-scene",
                {{"kind", o.kind},
                 {"seed", o.seed},
                 {"rows", o.rows},
                 {"cols", o.cols},
                 {"bands", o.bands},
                 {"grid", {o.grid_rows, o.grid_cols}},
                 {"blobs", {o.min_blobs, o.max_blobs}},
                 {"out", o.out},
                 {"pgm", o.pgm}},
                g);
    const auto cube = generate_scene(spec);
    write_cube(cube, fs::path(o.out));
    if (!o.pgm.empty()) write_pgm16(cube, o.pgm_band, fs::path(o.pgm), spec.value_scale);
    out << "wrote " << o.out << " (" << cube.cols() << "x" << cube.rows() << "x" << cube.bands() << ")\n";
    return kOk;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOptions {
    std::string cube;
    std::vector<std::uint32_t> shifts;
    std::string weight = "unit";
    std::string out;
    std::string blocks;
    std::string pgm;
};

int cmd_simulate(const SimulateOptions& o, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
    const auto cube = read_cube(fs::path(o.cube));
    const auto geometry = make_geometry(cube.rows(), cube.bands(), o.shifts, o.weight);
    echo_config(err, "simulate",
                {{"cube", o.cube},
                 {"shifts", std::vector<std::uint32_t>(geometry.shifts().begin(), geometry.shifts().end())},
                 {"weight", o.weight},
                 {"out", o.out},
                 {"blocks", o.blocks},
                 {"pgm", o.pgm}},
                g);
    const auto image = simulate(cube, geometry);
    write_image(image, fs::path(o.out));
    if (!o.blocks.empty()) write_cube(extract_blocks(image).blocks, fs::path(o.blocks));
    if (!o.pgm.empty()) write_pgm16(image.as_cube(), 0, fs::path(o.pgm));
    out << "wrote " << o.out << " (q=" << geometry.canvas_side() << ", block_side=" << geometry.block_side()
        << ")\n";
    return kOk;
}

// ---------------------------------------------------------------------------
// sysmat

struct SysmatOptions {
    std::size_t side = 100;
    std::size_t bands = 25;
    std::vector<std::uint32_t> shifts;
    std::string weight = "unit";
    std::string dump;
};

int cmd_sysmat(const SysmatOptions& o, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
    const auto geometry = make_geometry(o.side, o.bands, o.shifts, o.weight);
    echo_config(err, "sysmat",
                {{"side", o.side},
                 {"bands", o.bands},
                 {"shifts", std::vector<std::uint32_t>(geometry.shifts().begin(), geometry.shifts().end())},
                 {"weight", o.weight},
                 {"dump", o.dump}},
                g);
    const auto t0 = std::chrono::steady_clock::now();
    const auto H = SparseSystemMatrix::build(geometry);
    const double build_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (!o.dump.empty()) H.dump(fs::path(o.dump));
    const json stats = {{"q", geometry.canvas_side()},
                        {"rows", H.rows()},
                        {"cols", H.cols()},
                        {"nonzeros", H.nonzeros()},
                        {"nonzeros_per_column", SparseSystemMatrix::kNonzerosPerColumn},
                        {"column_sparsity", H.column_sparsity()},
                        {"sparsity", H.sparsity()},
                        {"memory_bytes", H.memory_bytes()},
                        {"build_ms", build_ms}};
    out << stats.dump(2) << '\n';
    return kOk;
}

// ---------------------------------------------------------------------------
// em

struct EmOptions {
    std::string image;
    std::size_t iterations = 20;
    std::string init = "backprojection";
    double epsilon = 1e-12;
    std::string trajectory;
    std::string out;
    std::vector<std::uint32_t> shifts;
    std::size_t side = 0;
    std::size_t bands = 0;
};

class UsageError : public Error {
public:
    using Error::Error;
};

int cmd_em(const EmOptions& o, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
    const auto image = read_image(fs::path(o.image));
    const auto& geom = image.geometry();
    if (!o.shifts.empty() &&
        !std::equal(o.shifts.begin(), o.shifts.end(), geom.shifts().begin(), geom.shifts().end())) {
        throw UsageError("--shifts disagree with the shift table in the image metadata");
    }
    if (o.side != 0 && o.side != geom.cube_side()) {
        throw UsageError("--side " + std::to_string(o.side) + " disagrees with image metadata side " +
                         std::to_string(geom.cube_side()));
    }
    if (o.bands != 0 && o.bands != geom.bands()) {
        throw UsageError("--bands " + std::to_string(o.bands) + " disagrees with image metadata bands " +
                         std::to_string(geom.bands()));
    }
    EmConfig cfg;
    cfg.iterations = o.iterations;
    cfg.init = em_init_from_string(o.init);
    cfg.epsilon = o.epsilon;
    cfg.record_trajectory = !o.trajectory.empty();
    echo_config(err, "em",
                {{"image", o.image},
                 {"iterations", cfg.iterations},
                 {"init", std::string(to_string(cfg.init))},
                 {"epsilon", cfg.epsilon},
                 {"trajectory", o.trajectory},
                 {"out", o.out},
                 {"side", geom.cube_side()},
                 {"bands", geom.bands()},
                 {"shifts", std::vector<std::uint32_t>(geom.shifts().begin(), geom.shifts().end())},
                 {"weight", std::string(to_string(geom.weight_mode()))}},
                g);

    const auto H = SparseSystemMatrix::build(geom);
    const auto result = reconstruct(H, image, cfg);
    if (result.zero_input) err << "warning: input image is all zero; estimate is all zero\n";
    write_cube(result.estimate, fs::path(o.out));
    if (cfg.record_trajectory) {
        std::ofstream csv(o.trajectory, std::ios::trunc);
        if (!csv) throw IoError("cannot open " + o.trajectory + " for writing");
        csv << "k,loglik,residual_l1,ms\n";
        csv.precision(17);
        for (const auto& it : result.trajectory) {
            csv << it.k << ',' << it.loglik << ',' << it.residual_l1 << ',' << it.ms << '\n';
        }
        if (!csv) throw IoError("write failed: " + o.trajectory);
    }
    out << "wrote " << o.out << " after " << cfg.iterations << " iterations in " << result.total_ms << " ms\n";
    return kOk;
}

// ---------------------------------------------------------------------------
// em-batch

struct EmBatchOptions {
    std::string manifest;
    std::string split = "test";
    std::size_t iterations = 20;
    std::string init = "backprojection";
    std::string out;
};

int cmd_em_batch(const EmBatchOptions& o, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
    DatasetReader reader{fs::path(o.manifest)};
    const auto& m = reader.manifest();
    std::optional<Split> only;
    if (o.split != "all") only = split_from_string(o.split);
    EmConfig cfg;
    cfg.iterations = o.iterations;
    cfg.init = em_init_from_string(o.init);
    echo_config(err, "em-batch",
                {{"manifest", o.manifest},
                 {"split", o.split},
                 {"iterations", cfg.iterations},
                 {"init", std::string(to_string(cfg.init))},
                 {"out", o.out}},
                g);
    const auto H = SparseSystemMatrix::build(m.geometry);
    PredictionWriter writer{fs::path(o.out)};
    std::size_t n = 0;
    for (const auto& s : m.samples) {
        if (only && s.split != *only) continue;
        const auto rec = reader.read(s);
        const auto image = input_to_image(rec.input, m.geometry, m.input_format);
        writer.write(s.id, reconstruct(H, image, cfg).estimate);
        ++n;
    }
    writer.close();
    out << "wrote " << n << " predictions to " << o.out << '\n';
    return kOk;
}

// ---------------------------------------------------------------------------
// dataset

struct DatasetOptions {
    std::string config;
    std::vector<std::string> sources;
    std::size_t side = 100;
    std::size_t bands = 5;
    std::vector<std::uint32_t> shifts;
    std::string weight = "unit";
    std::string format = "blocks";
    bool no_full = false;
    bool no_sparse = false;
    std::vector<std::size_t> full_stride{1, 1};
    std::vector<std::size_t> sparse_stride{10, 15};
    std::size_t blanks = 0;
    std::size_t test_blanks = 0;
    std::size_t total = 0;
    std::vector<double> mix{0.6, 0.3, 0.1};
    std::uint64_t seed = 0;
    double train_frac = 0.9;
    std::string out;
    bool plan_only = false;
};

/// kind:seed:rows:cols:bands[:test]
SourceConfig parse_source(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 5 && parts.size() != 6) {
        throw UsageError("source '" + text + "' must be kind:seed:rows:cols:bands[:test]");
    }
    SourceConfig src;
    try {
        src.scene.kind = scene_kind_from_string(parts[0]);
        src.scene.seed = std::stoull(parts[1]);
        src.scene.rows = std::stoull(parts[2]);
        src.scene.cols = std::stoull(parts[3]);
        src.scene.bands = std::stoull(parts[4]);
    } catch (const std::logic_error&) {
        throw UsageError("source '" + text + "' has a non-numeric field");
    }
    if (parts.size() == 6) {
        if (parts[5] != "test") throw UsageError("source '" + text + "': only 'test' may follow the band count");
        src.held_out = true;
    }
    return src;
}

json dataset_config_to_json(const DatasetConfig& c) {
    json sources = json::array();
    for (const auto& s : c.sources) {
        sources.push_back({{"kind", std::string(to_string(s.scene.kind))},
                           {"seed", s.scene.seed},
                           {"rows", s.scene.rows},
                           {"cols", s.scene.cols},
                           {"bands", s.scene.bands},
                           {"held_out", s.held_out}});
    }
    return {{"sources", sources},
            {"crop_side", c.crop_side},
            {"bands", c.bands},
            {"shifts", c.shifts.empty() ? default_shifts(c.bands) : c.shifts},
            {"weight", std::string(to_string(c.weight_mode))},
            {"input_format", std::string(to_string(c.input_format))},
            {"full", c.full},
            {"sparse", c.sparse},
            {"full_stride", {c.full_stride_rows, c.full_stride_cols}},
            {"sparse_stride", {c.sparse_stride_rows, c.sparse_stride_cols}},
            {"blank_count", c.blank_count},
            {"test_blank_count", c.test_blank_count},
            {"total_samples", c.total_samples},
            {"mix", {c.mix_full, c.mix_sparse, c.mix_blank}},
            {"seed", c.seed},
            {"train_fraction", c.train_fraction}};
}

DatasetConfig dataset_config_from_json(const json& j) {
    DatasetConfig c;
    try {
        for (const auto& s : j.at("sources")) {
            SourceConfig src;
            src.scene.kind = scene_kind_from_string(s.at("kind").get<std::string>());
            src.scene.seed = s.at("seed").get<std::uint64_t>();
            src.scene.rows = s.at("rows").get<std::size_t>();
            src.scene.cols = s.at("cols").get<std::size_t>();
            src.scene.bands = s.at("bands").get<std::size_t>();
            src.held_out = s.value("held_out", false);
            c.sources.push_back(src);
        }
        c.crop_side = j.value("crop_side", c.crop_side);
        c.bands = j.value("bands", c.bands);
        c.shifts = j.value("shifts", c.shifts);
        c.weight_mode = weight_mode_from_string(j.value("weight", std::string("unit")));
        c.input_format = input_format_from_string(j.value("input_format", std::string("blocks")));
        c.full = j.value("full", c.full);
        c.sparse = j.value("sparse", c.sparse);
        if (j.contains("full_stride")) {
            c.full_stride_rows = j["full_stride"].at(0).get<std::size_t>();
            c.full_stride_cols = j["full_stride"].at(1).get<std::size_t>();
        }
        if (j.contains("sparse_stride")) {
            c.sparse_stride_rows = j["sparse_stride"].at(0).get<std::size_t>();
            c.sparse_stride_cols = j["sparse_stride"].at(1).get<std::size_t>();
        }
        c.blank_count = j.value("blank_count", c.blank_count);
        c.test_blank_count = j.value("test_blank_count", c.test_blank_count);
        c.total_samples = j.value("total_samples", c.total_samples);
        if (j.contains("mix")) {
            c.mix_full = j["mix"].at(0).get<double>();
            c.mix_sparse = j["mix"].at(1).get<double>();
            c.mix_blank = j["mix"].at(2).get<double>();
        }
        c.seed = j.value("seed", c.seed);
        c.train_fraction = j.value("train_fraction", c.train_fraction);
    } catch (const json::exception& e) {
        throw UsageError(std::string("bad dataset config: ") + e.what());
    }
    return c;
}

int cmd_dataset(const DatasetOptions& o, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
    DatasetConfig c;
    if (!o.config.empty()) {
        std::ifstream in(o.config);
        if (!in) throw IoError("cannot open dataset config " + o.config);
        json j;
        try {
            j = json::parse(in);
        } catch (const json::exception& e) {
            throw UsageError(std::string("dataset config is not valid JSON: ") + e.what());
        }
        c = dataset_config_from_json(j);
    } else {
        for (const auto& s : o.sources) c.sources.push_back(parse_source(s));
        c.crop_side = o.side;
        c.bands = o.bands;
        c.shifts = o.shifts;
        c.weight_mode = weight_mode_from_string(o.weight);
        c.input_format = input_format_from_string(o.format);
        c.full = !o.no_full;
        c.sparse = !o.no_sparse;
        if (o.full_stride.size() != 2 || o.sparse_stride.size() != 2 || o.mix.size() != 3) {
            throw UsageError("strides take two values (rows,cols); --mix takes three (full,sparse,blank)");
        }
        c.full_stride_rows = o.full_stride[0];
        c.full_stride_cols = o.full_stride[1];
        c.sparse_stride_rows = o.sparse_stride[0];
        c.sparse_stride_cols = o.sparse_stride[1];
        c.blank_count = o.blanks;
        c.test_blank_count = o.test_blanks;
        c.total_samples = o.total;
        c.mix_full = o.mix[0];
        c.mix_sparse = o.mix[1];
        c.mix_blank = o.mix[2];
        c.seed = o.seed;
        c.train_fraction = o.train_frac;
    }
    echo_config(err, "dataset", {{"dataset", dataset_config_to_json(c)}, {"out", o.out}, {"plan_only", o.plan_only}},
                g);

    DatasetManifest m;
    if (o.plan_only) {
        m = split(plan_dataset(c), c.train_fraction, c.seed);
    } else {
        if (o.out.empty()) throw UsageError("--out is required unless --plan-only is given");
        m = build_dataset(c, fs::path(o.out));
    }
    const json summary = {{"samples", m.samples.size()},
                          {"category", m.category_counts()},
                          {"scene", m.scene_counts()},
                          {"split", m.split_counts()},
                          {"block_side", m.geometry.block_side()},
                          {"canvas_side", m.geometry.canvas_side()}};
    out << summary.dump(2) << '\n';
    return kOk;
}

// ---------------------------------------------------------------------------
// eval

struct EvalOptions {
    std::string manifest;
    std::string predictions;
    std::string split = "all";
    std::string format = "json";
};

class MissingPrediction : public Error {
public:
    using Error::Error;
};

int cmd_eval(const EvalOptions& o, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
    if (o.format != "json" && o.format != "table" && o.format != "both") {
        throw UsageError("--format must be json, table or both");
    }
    std::optional<Split> only;
    if (o.split != "all") only = split_from_string(o.split);
    echo_config(err, "eval",
                {{"manifest", o.manifest}, {"predictions", o.predictions}, {"split", o.split}, {"format", o.format}},
                g);

    DatasetReader reader{fs::path(o.manifest)};
    const auto& m = reader.manifest();
    std::map<std::uint64_t, HyperCube> predictions;
    {
        PredictionReader pr(fs::path(o.predictions), m);
        std::uint64_t id = 0;
        HyperCube cube;
        while (pr.next(id, cube)) {
            if (!predictions.emplace(id, std::move(cube)).second) {
                throw FormatError("duplicate prediction for id " + std::to_string(id), 0);
            }
        }
    }

    // Ascending id order keeps the accumulation order reproducible.
    ScoreAccumulator acc;
    for (const auto& s : m.samples) {
        if (only && s.split != *only) continue;
        const auto it = predictions.find(s.id);
        if (it == predictions.end()) throw MissingPrediction("missing prediction for id " + std::to_string(s.id));
        const auto rec = reader.read(s);
        acc.add(rec.target, it->second, std::string(to_string(s.category)), std::string(to_string(s.scene_kind)));
    }
    const auto report = acc.report();
    if (o.format == "json" || o.format == "both") out << report.to_json() << '\n';
    if (o.format == "table" || o.format == "both") out << report.to_table();
    return kOk;
}

// ---------------------------------------------------------------------------
// bench

struct BenchOptions {
    std::vector<std::size_t> iterations{1, 5, 10, 20, 50, 100, 500, 1000};
    std::size_t repetitions = 20;
    std::size_t side = 32;
    std::size_t bands = 5;
    std::vector<std::uint32_t> shifts;
    std::vector<std::string> kinds{"mosaic", "blobs"};
    std::uint64_t seed = 1;
    std::string init = "backprojection";
    std::string out;
};

int cmd_bench(const BenchOptions& o, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
    IterationStudyConfig cfg;
    cfg.iterations = o.iterations;
    cfg.repetitions = o.repetitions;
    cfg.side = o.side;
    cfg.bands = o.bands;
    cfg.shifts = o.shifts;
    cfg.kinds.clear();
    for (const auto& k : o.kinds) cfg.kinds.push_back(scene_kind_from_string(k));
    cfg.seed = o.seed;
    cfg.init = em_init_from_string(o.init);
    echo_config(err, "bench",
                {{"iterations", cfg.iterations},
                 {"repetitions", cfg.repetitions},
                 {"side", cfg.side},
                 {"bands", cfg.bands},
                 {"shifts", cfg.shifts.empty() ? default_shifts(cfg.bands) : cfg.shifts},
                 {"kinds", o.kinds},
                 {"seed", cfg.seed},
                 {"init", o.init},
                 {"out", o.out}},
                g);
    const auto rows = run_iteration_study(cfg);

    std::ofstream file;
    std::ostream* csv = &out;
    if (!o.out.empty()) {
        file.open(o.out, std::ios::trunc);
        if (!file) throw IoError("cannot open " + o.out + " for writing");
        csv = &file;
    }
    *csv << "iterations,mean_ms,stddev_ms,mse\n";
    csv->precision(10);
    for (const auto& r : rows) *csv << r.iterations << ',' << r.mean_ms << ',' << r.stddev_ms << ',' << r.mse << '\n';
    if (!*csv) throw IoError("write failed: " + o.out);
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"CTIS simulation, system-matrix, EM reconstruction and dataset toolkit", "ctis"};
    app.require_subcommand(1);
    GlobalOptions global;
    app.add_option("--threads", global.threads, "Worker threads (default: CTIS_THREADS or hardware concurrency)");

    GenSceneOptions gen;
    auto* gen_cmd = app.add_subcommand("gen-scene", "Generate a synthetic hyperspectral cube (HSC1)");
    gen_cmd->add_option("--kind", gen.kind, "mosaic | blobs | blank")->capture_default_str();
    gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
    gen_cmd->add_option("--rows", gen.rows)->capture_default_str();
    gen_cmd->add_option("--cols", gen.cols)->capture_default_str();
    gen_cmd->add_option("--bands", gen.bands)->capture_default_str();
    gen_cmd->add_option("--grid-rows", gen.grid_rows)->capture_default_str();
    gen_cmd->add_option("--grid-cols", gen.grid_cols)->capture_default_str();
    gen_cmd->add_option("--min-blobs", gen.min_blobs)->capture_default_str();
    gen_cmd->add_option("--max-blobs", gen.max_blobs)->capture_default_str();
    gen_cmd->add_option("--out", gen.out, "Output cube path")->required();
    gen_cmd->add_option("--pgm", gen.pgm, "Optional 16-bit PGM of one band");
    gen_cmd->add_option("--pgm-band", gen.pgm_band)->capture_default_str();

    SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Project a cube into a CTIS image");
    sim_cmd->add_option("--cube", sim.cube, "Input cube (HSC1)")->required();
    sim_cmd->add_option("--shifts", sim.shifts, "Per-band shifts, comma separated (default by band count)")
        ->delimiter(',');
    sim_cmd->add_option("--weight", sim.weight, "unit | averaged")->capture_default_str();
    sim_cmd->add_option("--out", sim.out, "Output image (HSC1 + .json sidecar)")->required();
    sim_cmd->add_option("--blocks", sim.blocks, "Optional block stack output (HSC1, 5 planes)");
    sim_cmd->add_option("--pgm", sim.pgm, "Optional 16-bit PGM of the frame");

    SysmatOptions sm;
    auto* sm_cmd = app.add_subcommand("sysmat", "Build the sparse system matrix and print its statistics");
    sm_cmd->add_option("--side", sm.side)->capture_default_str();
    sm_cmd->add_option("--bands", sm.bands)->capture_default_str();
    sm_cmd->add_option("--shifts", sm.shifts, "Per-band shifts (default by band count)")->delimiter(',');
    sm_cmd->add_option("--weight", sm.weight)->capture_default_str();
    sm_cmd->add_option("--dump", sm.dump, "Optional binary matrix dump");

    EmOptions em;
    auto* em_cmd = app.add_subcommand("em", "Reconstruct a cube from a CTIS image with EM");
    em_cmd->add_option("--image", em.image, "Input image written by `simulate`")->required();
    em_cmd->add_option("--iterations", em.iterations)->capture_default_str()->check(CLI::PositiveNumber);
    em_cmd->add_option("--init", em.init, "backprojection | ones")->capture_default_str();
    em_cmd->add_option("--epsilon", em.epsilon)->capture_default_str()->check(CLI::PositiveNumber);
    em_cmd->add_option("--trajectory", em.trajectory, "Optional per-iteration CSV (k,loglik,residual_l1,ms)");
    em_cmd->add_option("--out", em.out, "Output cube (HSC1)")->required();
    em_cmd->add_option("--shifts", em.shifts, "Expected shift table; must match the image metadata")
        ->delimiter(',');
    em_cmd->add_option("--side", em.side, "Expected cube side; must match the image metadata");
    em_cmd->add_option("--bands", em.bands, "Expected band count; must match the image metadata");

    EmBatchOptions eb;
    auto* eb_cmd = app.add_subcommand("em-batch", "Reconstruct every sample of a dataset split into a prediction file");
    eb_cmd->add_option("--manifest", eb.manifest)->required();
    eb_cmd->add_option("--split", eb.split, "train | val | test | all")->capture_default_str();
    eb_cmd->add_option("--iterations", eb.iterations)->capture_default_str()->check(CLI::PositiveNumber);
    eb_cmd->add_option("--init", eb.init)->capture_default_str();
    eb_cmd->add_option("--out", eb.out, "Prediction stream path")->required();

    DatasetOptions ds;
    auto* ds_cmd = app.add_subcommand("dataset", "Generate a train/val/test dataset");
    ds_cmd->add_option("--config", ds.config, "Dataset config JSON (overrides the flags below)");
    ds_cmd->add_option("--source", ds.sources, "Source scene kind:seed:rows:cols:bands[:test] (repeatable)");
    ds_cmd->add_option("--side", ds.side, "Crop side")->capture_default_str();
    ds_cmd->add_option("--bands", ds.bands, "Bands per sample")->capture_default_str();
    ds_cmd->add_option("--shifts", ds.shifts)->delimiter(',');
    ds_cmd->add_option("--weight", ds.weight)->capture_default_str();
    ds_cmd->add_option("--format", ds.format, "blocks | canvas")->capture_default_str();
    ds_cmd->add_flag("--no-full", ds.no_full, "Skip full (stride 1) cropping");
    ds_cmd->add_flag("--no-sparse", ds.no_sparse, "Skip sparse cropping");
    ds_cmd->add_option("--full-stride", ds.full_stride, "rows,cols")->delimiter(',')->capture_default_str();
    ds_cmd->add_option("--sparse-stride", ds.sparse_stride, "rows,cols")->delimiter(',')->capture_default_str();
    ds_cmd->add_option("--blanks", ds.blanks, "Blank train/val samples")->capture_default_str();
    ds_cmd->add_option("--test-blanks", ds.test_blanks, "Blank test samples")->capture_default_str();
    ds_cmd->add_option("--total", ds.total, "Train/val sample budget split by --mix (0 = every window)")
        ->capture_default_str();
    ds_cmd->add_option("--mix", ds.mix, "full,sparse,blank proportions")->delimiter(',')->capture_default_str();
    ds_cmd->add_option("--seed", ds.seed)->capture_default_str();
    ds_cmd->add_option("--train-frac", ds.train_frac)->capture_default_str();
    ds_cmd->add_option("--out", ds.out, "Output directory");
    ds_cmd->add_flag("--plan-only", ds.plan_only, "Print counts without writing payloads");

    EvalOptions ev;
    auto* ev_cmd = app.add_subcommand("eval", "Score predictions against dataset targets");
    ev_cmd->add_option("--manifest", ev.manifest)->required();
    ev_cmd->add_option("--predictions", ev.predictions)->required();
    ev_cmd->add_option("--split", ev.split, "train | val | test | all")->capture_default_str();
    ev_cmd->add_option("--format", ev.format, "json | table | both")->capture_default_str();

    BenchOptions bn;
    auto* bn_cmd = app.add_subcommand("bench", "EM error and time versus iteration count (CSV)");
    bn_cmd->add_option("--iterations", bn.iterations)->delimiter(',')->capture_default_str();
    bn_cmd->add_option("--repetitions", bn.repetitions)->capture_default_str()->check(CLI::PositiveNumber);
    bn_cmd->add_option("--side", bn.side)->capture_default_str();
    bn_cmd->add_option("--bands", bn.bands)->capture_default_str();
    bn_cmd->add_option("--shifts", bn.shifts)->delimiter(',');
    bn_cmd->add_option("--kinds", bn.kinds, "Scene kinds to alternate")->delimiter(',')->capture_default_str();
    bn_cmd->add_option("--seed", bn.seed)->capture_default_str();
    bn_cmd->add_option("--init", bn.init)->capture_default_str();
    bn_cmd->add_option("--out", bn.out, "CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << e.what() << '\n';
            return kOk;
        }
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    if (global.threads != 0) set_thread_count(global.threads);
    try {
        if (gen_cmd->parsed()) return cmd_gen_scene(gen, global, out, err);
        if (sim_cmd->parsed()) return cmd_simulate(sim, global, out, err);
        if (sm_cmd->parsed()) return cmd_sysmat(sm, global, out, err);
        if (em_cmd->parsed()) return cmd_em(em, global, out, err);
        if (eb_cmd->parsed()) return cmd_em_batch(eb, global, out, err);
        if (ds_cmd->parsed()) return cmd_dataset(ds, global, out, err);
        if (ev_cmd->parsed()) return cmd_eval(ev, global, out, err);
        if (bn_cmd->parsed()) return cmd_bench(bn, global, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DimensionError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const RangeError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const IndexError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const CapacityError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        // Format, I/O, domain, empty-report and missing-prediction errors.
        err << "error: " << e.what() << '\n';
        return kData;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kData;
    }
    return kUsage;
}

}  // namespace ctis::cli
