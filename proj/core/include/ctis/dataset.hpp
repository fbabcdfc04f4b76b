#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctis/hypercube.hpp"
#include "ctis/optics.hpp"
#include "ctis/scene.hpp"

namespace ctis {

enum class SampleCategory : std::uint8_t { full_crop, sparse_crop, blank };
enum class Split : std::uint8_t { unassigned, train, val, test };
enum class InputFormat : std::uint8_t {
    blocks,  ///< (block_side, block_side, 5) block stack
    canvas,  ///< (q, q, 1) full frame
};

[[nodiscard]] std::string_view to_string(SampleCategory c) noexcept;
[[nodiscard]] std::string_view to_string(Split s) noexcept;
[[nodiscard]] std::string_view to_string(InputFormat f) noexcept;
[[nodiscard]] SampleCategory sample_category_from_string(std::string_view s);
[[nodiscard]] Split split_from_string(std::string_view s);
[[nodiscard]] InputFormat input_format_from_string(std::string_view s);

struct SourceConfig {
    SceneSpec scene;
    /// Held-out sources feed only the test split.
    bool held_out = false;
};

struct DatasetConfig {
    std::vector<SourceConfig> sources;
    std::size_t crop_side = 100;
    /// Bands drawn from each source per category.
    std::size_t bands = 5;
    /// Empty means default_shifts(bands).
    std::vector<std::uint32_t> shifts;
    WeightMode weight_mode = WeightMode::unit;
    InputFormat input_format = InputFormat::blocks;

    bool full = true;
    bool sparse = true;
    std::size_t full_stride_rows = 1;
    std::size_t full_stride_cols = 1;
    std::size_t sparse_stride_rows = 10;
    std::size_t sparse_stride_cols = 15;
    /// Blank samples for train/val and for test.
    std::size_t blank_count = 0;
    std::size_t test_blank_count = 0;

    /// When nonzero, the train/val pool is subsampled to this many samples
    /// split full:sparse:blank by `mix` (blank_count is then ignored).
    std::size_t total_samples = 0;
    double mix_full = 0.6;
    double mix_sparse = 0.3;
    double mix_blank = 0.1;

    std::uint64_t seed = 0;
    double train_fraction = 0.9;
};

struct SourceRecord {
    std::uint64_t id = 0;
    SceneSpec scene;
    bool held_out = false;
    /// Disjoint band selections backing the full and sparse categories.
    std::vector<std::size_t> full_bands;
    std::vector<std::size_t> sparse_bands;
};

inline constexpr std::uint64_t kNoSource = ~std::uint64_t{0};

struct SampleRecord {
    std::uint64_t id = 0;
    SampleCategory category = SampleCategory::blank;
    SceneKind scene_kind = SceneKind::blank;
    std::uint64_t source = kNoSource;
    CropWindow window;
    std::vector<std::size_t> bands;
    Split split = Split::unassigned;
    std::uint64_t offset = 0;  ///< record start inside the split file
};

struct DatasetManifest {
    static constexpr int kVersion = 1;

    int version = kVersion;
    ShiftGeometry geometry;
    InputFormat input_format = InputFormat::blocks;
    std::uint64_t seed = 0;
    double train_fraction = 0.9;
    std::vector<SourceRecord> sources;
    std::vector<SampleRecord> samples;  ///< ascending id
    std::map<std::string, std::string> files;  ///< split name -> file name, relative to the manifest

    [[nodiscard]] std::size_t crop_side() const noexcept { return geometry.cube_side(); }
    [[nodiscard]] std::size_t bands() const noexcept { return geometry.bands(); }
    [[nodiscard]] std::map<std::string, std::uint64_t> category_counts() const;
    [[nodiscard]] std::map<std::string, std::uint64_t> scene_counts() const;
    [[nodiscard]] std::map<std::string, std::uint64_t> split_counts() const;
    [[nodiscard]] const SampleRecord* find(std::uint64_t id) const noexcept;

    [[nodiscard]] std::string to_json() const;
    /// Throws FormatError on malformed or inconsistent JSON.
    static DatasetManifest from_json(std::string_view text);

    void save(const std::filesystem::path& path) const;
    static DatasetManifest load(const std::filesystem::path& path);
};

/// Lays out every sample (ids, windows, bands) without generating payloads.
/// Throws DimensionError when a source is smaller than the crop or has too
/// few bands for disjoint full/sparse selections.
[[nodiscard]] DatasetManifest plan_dataset(const DatasetConfig& config);

/// Tags every non-test sample train or val: exactly round(frac * n) train,
/// chosen by a seeded shuffle. Samples from held-out sources (and test
/// blanks) are already tagged test. Throws ConfigError unless 0 < frac < 1
/// or if any non-test sample is already tagged.
[[nodiscard]] DatasetManifest split(DatasetManifest manifest, double train_fraction, std::uint64_t seed);

/// Input/target pair for one sample.
struct SamplePayload {
    HyperCube input;
    HyperCube target;
};

/// Generates every source scene once; make() is then read-only and safe to
/// call from parallel workers.
class SampleFactory {
public:
    explicit SampleFactory(const DatasetManifest& manifest);
    [[nodiscard]] SamplePayload make(const SampleRecord& sample) const;

private:
    const DatasetManifest& manifest_;
    std::map<std::uint64_t, HyperCube> scenes_;
};

/// Input cube for a target under the manifest geometry and format.
[[nodiscard]] HyperCube make_input(const HyperCube& target, const ShiftGeometry& geometry, InputFormat format);

/// CTIS frame recovered from a stored input (reassembles block stacks).
[[nodiscard]] CtisImage input_to_image(const HyperCube& input, const ShiftGeometry& geometry, InputFormat format);

/// Writes `<dir>/<split>.bin` record streams and `<dir>/manifest.json`, filling
/// offsets and file names in `manifest`. Record: uint64 LE id, HSC1 input, HSC1 target.
void export_for_training(DatasetManifest& manifest, const std::filesystem::path& dir);

/// plan_dataset + split + export_for_training.
DatasetManifest build_dataset(const DatasetConfig& config, const std::filesystem::path& dir);

struct DatasetRecord {
    std::uint64_t id = 0;
    HyperCube input;
    HyperCube target;
};

/// Random access into the split files of an exported dataset.
class DatasetReader {
public:
    explicit DatasetReader(const std::filesystem::path& manifest_path);

    [[nodiscard]] const DatasetManifest& manifest() const noexcept { return manifest_; }
    [[nodiscard]] DatasetRecord read(const SampleRecord& sample);
    [[nodiscard]] DatasetRecord read(std::uint64_t id);

private:
    std::filesystem::path dir_;
    DatasetManifest manifest_;
    std::map<std::string, std::ifstream> streams_;
};

/// Prediction exchange stream: repeated (uint64 LE id, HSC1 cube).
class PredictionWriter {
public:
    explicit PredictionWriter(const std::filesystem::path& path);
    void write(std::uint64_t id, const HyperCube& cube);
    void close();

private:
    std::ofstream out_;
    std::filesystem::path path_;
};

/// Reads a prediction stream, validating every id against the manifest and
/// every cube against its geometry. Throws FormatError naming the record.
class PredictionReader {
public:
    PredictionReader(const std::filesystem::path& path, const DatasetManifest& manifest);

    /// False at clean end of stream.
    bool next(std::uint64_t& id, HyperCube& cube);

private:
    std::ifstream in_;
    const DatasetManifest& manifest_;
    std::uint64_t offset_ = 0;
    std::uint64_t record_ = 0;
};

[[nodiscard]] std::vector<std::pair<std::uint64_t, HyperCube>> import_predictions(const std::filesystem::path& path,
                                                                                  const DatasetManifest& manifest);

}  // namespace ctis
