#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "ctis/cube_io.hpp"
#include "ctis/dataset.hpp"
#include "ctis/em_solver.hpp"
#include "ctis/iteration_study.hpp"
#include "ctis/metrics.hpp"
#include "ctis/optics.hpp"
#include "support/test_support.hpp"

namespace ctis {
namespace {

struct RunResult {
    int code = 0;
    std::string out;
    std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "ctis");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    RunResult r;
    r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::size_t count_lines(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) ++n;
    return n;
}

class Cli : public ::testing::Test {
protected:
    test::TempDir dir{"cli"};
    std::string path(const std::string& name) const { return (dir / name).string(); }

    void make_scene(const std::string& name, const std::string& kind = "mosaic", int side = 16, int bands = 5) {
        const auto r = run_cli({"gen-scene", "--kind", kind, "--seed", "3", "--rows", std::to_string(side), "--cols",
                                std::to_string(side), "--bands", std::to_string(bands), "--grid-rows", "2",
                                "--grid-cols", "2", "--out", path(name)});
        ASSERT_EQ(r.code, 0) << r.err;
    }
};

TEST_F(Cli, HelpAndUsageErrors) {
    EXPECT_EQ(run_cli({"--help"}).code, 0);
    EXPECT_EQ(run_cli({}).code, 2);
    EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
    EXPECT_EQ(run_cli({"em", "--iterations", "5"}).code, 2);
    EXPECT_EQ(run_cli({"gen-scene", "--kind", "carrot", "--out", path("x.hsc")}).code, 2);
    EXPECT_EQ(run_cli({"gen-scene", "--rows", "4", "--out", path("x.hsc")}).code, 2);
}

TEST_F(Cli, EchoesResolvedConfig) {
    const auto r = run_cli({"sysmat", "--side", "8", "--bands", "5"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto pos = r.err.find("# config ");
    ASSERT_NE(pos, std::string::npos);
    const auto cfg = nlohmann::json::parse(r.err.substr(pos + 9, r.err.find('\n', pos) - pos - 9));
    EXPECT_EQ(cfg.at("command"), "sysmat");
    EXPECT_EQ(cfg.at("shifts"), nlohmann::json::array({1, 3, 5, 7, 9}));
    const auto stats = nlohmann::json::parse(r.out);
    EXPECT_EQ(stats.at("nonzeros_per_column"), 5);
    EXPECT_EQ(stats.at("q"), 8 + 2 * (8 + 18));
}

TEST_F(Cli, SimulateBlankAndMetadata) {
    make_scene("blank.hsc", "blank");
    const auto r = run_cli({"simulate", "--cube", path("blank.hsc"), "--out", path("img.hsc")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto img = read_image(path("img.hsc"));
    for (float v : img.data()) ASSERT_EQ(v, 0.0f);
    std::ifstream meta(sidecar_path(path("img.hsc")));
    const auto j = nlohmann::json::parse(meta);
    EXPECT_EQ(j.dump().find("[1,3,5,7,9]") != std::string::npos, true) << j.dump();
    EXPECT_EQ(img.geometry().shifts().size(), 5u);
}

TEST_F(Cli, SimulateMissingInputIsDataError) {
    const auto r = run_cli({"simulate", "--cube", path("nope.hsc"), "--out", path("img.hsc")});
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("nope.hsc"), std::string::npos);
}

TEST_F(Cli, EmDefaultsTrajectoryAndErrors) {
    make_scene("s.hsc");
    ASSERT_EQ(run_cli({"simulate", "--cube", path("s.hsc"), "--out", path("img.hsc")}).code, 0);

    auto r = run_cli({"em", "--image", path("img.hsc"), "--out", path("r.hsc")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.err.find("\"iterations\":20"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("\"init\":\"backprojection\""), std::string::npos) << r.err;
    // Same result as the library call with default settings.
    const auto img = read_image(path("img.hsc"));
    const auto H = SparseSystemMatrix::build(img.geometry());
    EXPECT_EQ(read_cube(path("r.hsc")), reconstruct(H, img).estimate);

    r = run_cli({"em", "--image", path("img.hsc"), "--iterations", "1000", "--trajectory", path("t.csv"), "--out",
                 path("r2.hsc")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(count_lines(path("t.csv")), 1001u);
    std::ifstream csv(path("t.csv"));
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(header, "k,loglik,residual_l1,ms");

    EXPECT_EQ(run_cli({"em", "--image", path("img.hsc"), "--shifts", "1,2,3,4,5", "--out", path("x.hsc")}).code, 2);
    EXPECT_EQ(run_cli({"em", "--image", path("img.hsc"), "--bands", "4", "--out", path("x.hsc")}).code, 2);
    EXPECT_EQ(run_cli({"em", "--image", path("img.hsc"), "--init", "zeros", "--out", path("x.hsc")}).code, 2);

    std::filesystem::copy_file(path("img.hsc"), path("bad.hsc"));
    std::filesystem::copy_file(path("img.hsc.json"), path("bad.hsc.json"));
    std::filesystem::resize_file(path("bad.hsc"), 100);
    EXPECT_EQ(run_cli({"em", "--image", path("bad.hsc"), "--out", path("x.hsc")}).code, 3);
    {
        std::ofstream(path("junk.hsc"), std::ios::binary) << "XXXXnot a cube at all";
        std::filesystem::copy_file(path("img.hsc.json"), path("junk.hsc.json"));
    }
    EXPECT_EQ(run_cli({"em", "--image", path("junk.hsc"), "--out", path("x.hsc")}).code, 3);
}

TEST_F(Cli, DatasetEmBatchEvalPipeline) {
    auto r = run_cli({"dataset", "--source", "mosaic:1:40:40:5", "--source", "blobs:2:40:40:5:test", "--side", "16",
                      "--no-full", "--sparse-stride", "8,8", "--blanks", "2", "--test-blanks", "1", "--seed", "9",
                      "--out", path("ds")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto summary = nlohmann::json::parse(r.out);
    EXPECT_EQ(summary.at("samples"), 16 + 16 + 3);

    r = run_cli({"em-batch", "--manifest", path("ds/manifest.json"), "--split", "all", "--out", path("em.bin")});
    ASSERT_EQ(r.code, 0) << r.err;
    r = run_cli({"eval", "--manifest", path("ds/manifest.json"), "--predictions", path("em.bin")});
    ASSERT_EQ(r.code, 0) << r.err;

    DatasetReader reader(dir / "ds/manifest.json");
    const auto& m = reader.manifest();
    const auto H = SparseSystemMatrix::build(m.geometry);
    std::vector<std::pair<HyperCube, HyperCube>> pairs;
    std::vector<const SampleRecord*> records;
    for (const auto& s : m.samples) {
        const auto rec = reader.read(s);
        pairs.emplace_back(rec.target,
                           reconstruct(H, input_to_image(rec.input, m.geometry, m.input_format)).estimate);
        records.push_back(&s);
    }
    std::size_t i = 0;
    const auto report = score_batch([&](ScoredPair& p) {
        if (i == pairs.size()) return false;
        p.truth = &pairs[i].first;
        p.pred = &pairs[i].second;
        p.category = std::string(to_string(records[i]->category));
        p.scene = std::string(to_string(records[i]->scene_kind));
        ++i;
        return true;
    });
    EXPECT_EQ(r.out, report.to_json() + "\n");

    // Test split only, table format.
    r = run_cli({"eval", "--manifest", path("ds/manifest.json"), "--predictions", path("em.bin"), "--split", "test",
                 "--format", "table"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("total"), std::string::npos);
    const auto total = r.out.substr(r.out.find("total"));
    EXPECT_EQ(std::stoi(total.substr(total.find_last_of(' ') + 1)), 17) << r.out;
}

TEST_F(Cli, EvalPerfectPredictionsAndMissingIds) {
    ASSERT_EQ(run_cli({"dataset", "--side", "8", "--bands", "2", "--blanks", "0", "--source", "blobs:4:12:12:4",
                       "--sparse-stride", "2,2", "--out", path("ds")})
                  .code,
              0);
    DatasetReader reader(dir / "ds/manifest.json");
    const auto& m = reader.manifest();
    {
        PredictionWriter w(dir / "perfect.bin");
        for (const auto& s : m.samples) w.write(s.id, reader.read(s).target);
        w.close();
    }
    auto r = run_cli({"eval", "--manifest", path("ds/manifest.json"), "--predictions", path("perfect.bin")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("mse"), 0.0);
    EXPECT_EQ(j.at("mae"), 0.0);

    {
        PredictionWriter w(dir / "partial.bin");
        for (const auto& s : m.samples) {
            if (s.id == 2 || s.id == 4) continue;
            w.write(s.id, reader.read(s).target);
        }
        w.close();
    }
    r = run_cli({"eval", "--manifest", path("ds/manifest.json"), "--predictions", path("partial.bin")});
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("id 2"), std::string::npos) << r.err;

    r = run_cli({"eval", "--manifest", path("ds/manifest.json"), "--predictions", path("nothing.bin")});
    EXPECT_EQ(r.code, 3);
    r = run_cli({"eval", "--manifest", path("ds/manifest.json"), "--predictions", path("perfect.bin"), "--split",
                 "holdout"});
    EXPECT_EQ(r.code, 2);
}

TEST_F(Cli, DatasetFromJsonConfigAndPlanOnly) {
    {
        std::ofstream cfg(path("cfg.json"));
        cfg << R"({"sources":[{"kind":"mosaic","seed":5,"rows":200,"cols":400,"bands":5}],
                   "crop_side":100,"bands":5,"sparse":false,"seed":1})";
    }
    auto r = run_cli({"dataset", "--config", path("cfg.json"), "--plan-only"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out).at("category").at("full"), 30401);
    EXPECT_FALSE(std::filesystem::exists(path("ds")));

    {
        std::ofstream cfg(path("bad.json"));
        cfg << R"({"sources":[{"kind":"mosaic"}]})";
    }
    EXPECT_EQ(run_cli({"dataset", "--config", path("bad.json"), "--plan-only"}).code, 2);
    EXPECT_EQ(run_cli({"dataset", "--source", "mosaic:1:40", "--plan-only"}).code, 2);
    EXPECT_EQ(run_cli({"dataset", "--source", "mosaic:1:40:40:5", "--train-frac", "1.0", "--plan-only"}).code, 2);
    EXPECT_EQ(run_cli({"dataset", "--blanks", "3"}).code, 2);
}

TEST_F(Cli, BenchCsv) {
    const auto r = run_cli({"bench", "--iterations", "1,5,20", "--repetitions", "2", "--side", "8", "--bands", "3",
                            "--out", path("b.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream in(path("b.csv"));
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "iterations,mean_ms,stddev_ms,mse");
    std::vector<double> mses;
    for (std::string line; std::getline(in, line);) mses.push_back(std::stod(line.substr(line.rfind(',') + 1)));
    ASSERT_EQ(mses.size(), 3u);
    EXPECT_GT(mses[0], mses[1]);
    EXPECT_GT(mses[1], mses[2]);
    const auto cfg_line = r.err.substr(r.err.find("# config ") + 9);
    const auto cfg = nlohmann::json::parse(cfg_line.substr(0, cfg_line.find('\n')));
    EXPECT_EQ(cfg.at("repetitions"), 2);
}

TEST_F(Cli, BenchDefaults) {
    // Bad scene kinds fail before any work starts.
    const auto r = run_cli({"bench", "--kinds", "carrot"});
    EXPECT_EQ(r.code, 2);
    IterationStudyConfig cfg;
    EXPECT_EQ(cfg.iterations.size(), 8u);
    EXPECT_EQ(cfg.iterations, (std::vector<std::size_t>{1, 5, 10, 20, 50, 100, 500, 1000}));
    EXPECT_EQ(cfg.repetitions, 20u);
}

TEST_F(Cli, Deterministic) {
    ASSERT_EQ(run_cli({"gen-scene", "--kind", "blobs", "--seed", "11", "--rows", "20", "--cols", "30", "--out",
                       path("a.hsc")})
                  .code,
              0);
    ASSERT_EQ(run_cli({"gen-scene", "--kind", "blobs", "--seed", "11", "--rows", "20", "--cols", "30", "--out",
                       path("b.hsc")})
                  .code,
              0);
    EXPECT_EQ(read_cube(path("a.hsc")), read_cube(path("b.hsc")));
}

}  // namespace
}  // namespace ctis
