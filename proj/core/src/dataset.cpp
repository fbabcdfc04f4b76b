#include "ctis/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include <json.hpp>

#include "ctis/cube_io.hpp"
#include "ctis/detail/binary.hpp"
#include "ctis/detail/rng.hpp"
#include "ctis/error.hpp"
#include "ctis/parallel.hpp"
#include "json_util.hpp"

namespace ctis {

using nlohmann::json;

std::string_view to_string(SampleCategory c) noexcept {
    switch (c) {
        case SampleCategory::full_crop: return "full";
        case SampleCategory::sparse_crop: return "sparse";
        case SampleCategory::blank: return "blank";
    }
    return "?";
}

std::string_view to_string(Split s) noexcept {
    switch (s) {
        case Split::unassigned: return "unassigned";
        case Split::train: return "train";
        case Split::val: return "val";
        case Split::test: return "test";
    }
    return "?";
}

std::string_view to_string(InputFormat f) noexcept { return f == InputFormat::blocks ? "blocks" : "canvas"; }

SampleCategory sample_category_from_string(std::string_view s) {
    if (s == "full") return SampleCategory::full_crop;
    if (s == "sparse") return SampleCategory::sparse_crop;
    if (s == "blank") return SampleCategory::blank;
    throw ConfigError("unknown sample category '" + std::string(s) + "'");
}

Split split_from_string(std::string_view s) {
    if (s == "unassigned") return Split::unassigned;
    if (s == "train") return Split::train;
    if (s == "val") return Split::val;
    if (s == "test") return Split::test;
    throw ConfigError("unknown split '" + std::string(s) + "'");
}

InputFormat input_format_from_string(std::string_view s) {
    if (s == "blocks") return InputFormat::blocks;
    if (s == "canvas") return InputFormat::canvas;
    throw ConfigError("unknown input format '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Manifest

std::map<std::string, std::uint64_t> DatasetManifest::category_counts() const {
    std::map<std::string, std::uint64_t> out;
    for (const auto& s : samples) ++out[std::string(to_string(s.category))];
    return out;
}

std::map<std::string, std::uint64_t> DatasetManifest::scene_counts() const {
    std::map<std::string, std::uint64_t> out;
    for (const auto& s : samples) ++out[std::string(to_string(s.scene_kind))];
    return out;
}

std::map<std::string, std::uint64_t> DatasetManifest::split_counts() const {
    std::map<std::string, std::uint64_t> out;
    for (const auto& s : samples) ++out[std::string(to_string(s.split))];
    return out;
}

const SampleRecord* DatasetManifest::find(std::uint64_t id) const noexcept {
    const auto it = std::lower_bound(samples.begin(), samples.end(), id,
                                     [](const SampleRecord& s, std::uint64_t v) { return s.id < v; });
    return it != samples.end() && it->id == id ? &*it : nullptr;
}

namespace {

json scene_to_json(const SceneSpec& s) {
    return {{"kind", std::string(to_string(s.kind))},
            {"seed", s.seed},
            {"rows", s.rows},
            {"cols", s.cols},
            {"bands", s.bands},
            {"value_scale", s.value_scale},
            {"grid_rows", s.grid_rows},
            {"grid_cols", s.grid_cols},
            {"min_blobs", s.min_blobs},
            {"max_blobs", s.max_blobs},
            {"min_peak_width", s.min_peak_width},
            {"max_peak_width", s.max_peak_width},
            {"background_level", s.background_level}};
}

SceneSpec scene_from_json(const json& j) {
    SceneSpec s;
    s.kind = scene_kind_from_string(j.at("kind").get<std::string>());
    s.seed = j.at("seed").get<std::uint64_t>();
    s.rows = j.at("rows").get<std::size_t>();
    s.cols = j.at("cols").get<std::size_t>();
    s.bands = j.at("bands").get<std::size_t>();
    s.value_scale = j.value("value_scale", s.value_scale);
    s.grid_rows = j.value("grid_rows", s.grid_rows);
    s.grid_cols = j.value("grid_cols", s.grid_cols);
    s.min_blobs = j.value("min_blobs", s.min_blobs);
    s.max_blobs = j.value("max_blobs", s.max_blobs);
    s.min_peak_width = j.value("min_peak_width", s.min_peak_width);
    s.max_peak_width = j.value("max_peak_width", s.max_peak_width);
    s.background_level = j.value("background_level", s.background_level);
    return s;
}

void validate_manifest(const DatasetManifest& m) {
    std::set<std::uint64_t> source_ids;
    for (const auto& src : m.sources) {
        if (!source_ids.insert(src.id).second) throw FormatError("duplicate source id " + std::to_string(src.id), 0);
    }
    for (std::size_t i = 0; i < m.samples.size(); ++i) {
        const auto& s = m.samples[i];
        if (i > 0 && s.id <= m.samples[i - 1].id) {
            throw FormatError("sample ids must be strictly ascending (id " + std::to_string(s.id) + ")", 0);
        }
        if (s.category == SampleCategory::blank) continue;
        const auto it = std::find_if(m.sources.begin(), m.sources.end(),
                                     [&](const SourceRecord& r) { return r.id == s.source; });
        if (it == m.sources.end()) {
            throw FormatError("sample " + std::to_string(s.id) + " references unknown source", 0);
        }
        if (s.window.side != m.crop_side() || s.window.origin_row + s.window.side > it->scene.rows ||
            s.window.origin_col + s.window.side > it->scene.cols) {
            throw FormatError("sample " + std::to_string(s.id) + " window does not fit its source", 0);
        }
        if (s.bands.size() != m.bands() ||
            std::any_of(s.bands.begin(), s.bands.end(), [&](std::size_t b) { return b >= it->scene.bands; })) {
            throw FormatError("sample " + std::to_string(s.id) + " band list is inconsistent with the geometry", 0);
        }
    }
}

}  // namespace

std::string DatasetManifest::to_json() const {
    json j;
    j["version"] = version;
    j["geometry"] = detail::geometry_to_json(geometry);
    j["input_format"] = std::string(ctis::to_string(input_format));
    j["seed"] = seed;
    j["train_fraction"] = train_fraction;
    j["counts"] = {{"category", category_counts()}, {"scene", scene_counts()}, {"split", split_counts()}};
    j["files"] = files;
    j["sources"] = json::array();
    for (const auto& s : sources) {
        j["sources"].push_back({{"id", s.id},
                                {"scene", scene_to_json(s.scene)},
                                {"held_out", s.held_out},
                                {"full_bands", s.full_bands},
                                {"sparse_bands", s.sparse_bands}});
    }
    auto& arr = j["samples"] = json::array();
    for (const auto& s : samples) {
        arr.push_back({{"id", s.id},
                       {"category", std::string(ctis::to_string(s.category))},
                       {"scene", std::string(ctis::to_string(s.scene_kind))},
                       {"source", s.source == kNoSource ? json(nullptr) : json(s.source)},
                       {"row", s.window.origin_row},
                       {"col", s.window.origin_col},
                       {"side", s.window.side},
                       {"bands", s.bands},
                       {"split", std::string(ctis::to_string(s.split))},
                       {"offset", s.offset}});
    }
    return j.dump(1);
}

DatasetManifest DatasetManifest::from_json(std::string_view text) {
    DatasetManifest m;
    try {
        const json j = json::parse(text);
        m.version = j.at("version").get<int>();
        if (m.version != kVersion) throw FormatError("unsupported manifest version " + std::to_string(m.version), 0);
        m.geometry = detail::geometry_from_json(j.at("geometry"));
        m.input_format = input_format_from_string(j.at("input_format").get<std::string>());
        m.seed = j.at("seed").get<std::uint64_t>();
        m.train_fraction = j.at("train_fraction").get<double>();
        m.files = j.value("files", std::map<std::string, std::string>{});
        for (const auto& s : j.at("sources")) {
            SourceRecord r;
            r.id = s.at("id").get<std::uint64_t>();
            r.scene = scene_from_json(s.at("scene"));
            r.held_out = s.at("held_out").get<bool>();
            r.full_bands = s.at("full_bands").get<std::vector<std::size_t>>();
            r.sparse_bands = s.at("sparse_bands").get<std::vector<std::size_t>>();
            m.sources.push_back(std::move(r));
        }
        for (const auto& s : j.at("samples")) {
            SampleRecord r;
            r.id = s.at("id").get<std::uint64_t>();
            r.category = sample_category_from_string(s.at("category").get<std::string>());
            r.scene_kind = scene_kind_from_string(s.at("scene").get<std::string>());
            r.source = s.at("source").is_null() ? kNoSource : s.at("source").get<std::uint64_t>();
            r.window = {s.at("row").get<std::size_t>(), s.at("col").get<std::size_t>(), s.at("side").get<std::size_t>()};
            r.bands = s.at("bands").get<std::vector<std::size_t>>();
            r.split = split_from_string(s.at("split").get<std::string>());
            r.offset = s.at("offset").get<std::uint64_t>();
            m.samples.push_back(std::move(r));
        }
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad manifest: ") + e.what(), 0);
    } catch (const ConfigError& e) {
        throw FormatError(std::string("bad manifest: ") + e.what(), 0);
    }
    validate_manifest(m);
    return m;
}

void DatasetManifest::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << to_json() << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

DatasetManifest DatasetManifest::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest " + path.string());
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json(text);
}

// ---------------------------------------------------------------------------
// Planning

namespace {

struct Candidate {
    std::uint64_t source;
    CropWindow window;
};

/// Keeps `n` of `pool` chosen uniformly, preserving the original order.
std::vector<Candidate> subsample(const std::vector<Candidate>& pool, std::size_t n, detail::Engine& rng) {
    if (n >= pool.size()) return pool;
    std::vector<std::size_t> idx(pool.size());
    std::iota(idx.begin(), idx.end(), 0);
    detail::shuffle(idx, rng);
    idx.resize(n);
    std::sort(idx.begin(), idx.end());
    std::vector<Candidate> out;
    out.reserve(n);
    for (auto i : idx) out.push_back(pool[i]);
    return out;
}

}  // namespace

DatasetManifest plan_dataset(const DatasetConfig& config) {
    if (config.crop_side == 0 || config.bands == 0) throw DimensionError("crop side and band count must be >= 1");
    if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) {
        throw ConfigError("train fraction must lie in (0, 1)");
    }
    const double mix_sum = config.mix_full + config.mix_sparse + config.mix_blank;
    if (config.total_samples > 0 &&
        (config.mix_full < 0 || config.mix_sparse < 0 || config.mix_blank < 0 || !(mix_sum > 0))) {
        throw ConfigError("category mix must be nonnegative with a positive sum");
    }

    DatasetManifest m;
    m.geometry = ShiftGeometry(config.crop_side, config.shifts.empty() ? default_shifts(config.bands) : config.shifts,
                               config.weight_mode);
    if (m.geometry.bands() != config.bands) {
        throw ConfigError("shift table has " + std::to_string(m.geometry.bands()) + " entries for " +
                          std::to_string(config.bands) + " bands");
    }
    m.input_format = config.input_format;
    m.seed = config.seed;
    m.train_fraction = config.train_fraction;

    const std::size_t per_source = config.bands * ((config.full ? 1 : 0) + (config.sparse ? 1 : 0));
    std::vector<Candidate> full_pool, sparse_pool, test_full, test_sparse;
    for (std::size_t i = 0; i < config.sources.size(); ++i) {
        const auto& src = config.sources[i];
        if (src.scene.rows < config.crop_side || src.scene.cols < config.crop_side) {
            throw DimensionError("source " + std::to_string(i) + " (" + std::to_string(src.scene.rows) + "x" +
                                 std::to_string(src.scene.cols) + ") is smaller than the crop side " +
                                 std::to_string(config.crop_side));
        }
        if (src.scene.bands < per_source) {
            throw DimensionError("source " + std::to_string(i) + " has " + std::to_string(src.scene.bands) +
                                 " bands; disjoint full/sparse selections need " + std::to_string(per_source));
        }
        SourceRecord rec;
        rec.id = i;
        rec.scene = src.scene;
        rec.held_out = src.held_out;

        detail::Engine rng(detail::mix_seed(config.seed, 1000 + i));
        std::vector<std::size_t> order(src.scene.bands);
        std::iota(order.begin(), order.end(), 0);
        detail::shuffle(order, rng);
        auto take = [&](std::size_t from) {
            std::vector<std::size_t> sel(order.begin() + static_cast<std::ptrdiff_t>(from),
                                         order.begin() + static_cast<std::ptrdiff_t>(from + config.bands));
            std::sort(sel.begin(), sel.end());
            return sel;
        };
        std::size_t next = 0;
        if (config.full) {
            rec.full_bands = take(next);
            next += config.bands;
        }
        if (config.sparse) rec.sparse_bands = take(next);

        if (config.full) {
            auto& pool = src.held_out ? test_full : full_pool;
            for (const auto& w : enumerate_crops(src.scene.rows, src.scene.cols, config.crop_side,
                                                 config.full_stride_rows, config.full_stride_cols)) {
                pool.push_back({i, w});
            }
        }
        if (config.sparse) {
            auto& pool = src.held_out ? test_sparse : sparse_pool;
            for (const auto& w : enumerate_crops(src.scene.rows, src.scene.cols, config.crop_side,
                                                 config.sparse_stride_rows, config.sparse_stride_cols)) {
                pool.push_back({i, w});
            }
        }
        m.sources.push_back(std::move(rec));
    }

    std::size_t blanks = config.blank_count;
    if (config.total_samples > 0) {
        const auto n = static_cast<double>(config.total_samples);
        const auto n_full = static_cast<std::size_t>(std::llround(n * config.mix_full / mix_sum));
        const auto n_sparse = static_cast<std::size_t>(std::llround(n * config.mix_sparse / mix_sum));
        detail::Engine rng(detail::mix_seed(config.seed, 2));
        full_pool = subsample(full_pool, n_full, rng);
        sparse_pool = subsample(sparse_pool, n_sparse, rng);
        blanks = config.total_samples - std::min(config.total_samples, full_pool.size() + sparse_pool.size());
    }

    std::uint64_t next_id = 0;
    auto emit = [&](const std::vector<Candidate>& pool, SampleCategory cat, Split split) {
        for (const auto& c : pool) {
            const auto& src = m.sources[c.source];
            SampleRecord s;
            s.id = next_id++;
            s.category = cat;
            s.scene_kind = src.scene.kind;
            s.source = src.id;
            s.window = c.window;
            s.bands = cat == SampleCategory::full_crop ? src.full_bands : src.sparse_bands;
            s.split = split;
            m.samples.push_back(std::move(s));
        }
    };
    auto emit_blanks = [&](std::size_t n, Split split) {
        for (std::size_t k = 0; k < n; ++k) {
            SampleRecord s;
            s.id = next_id++;
            s.window = {0, 0, config.crop_side};
            s.split = split;
            m.samples.push_back(std::move(s));
        }
    };
    emit(full_pool, SampleCategory::full_crop, Split::unassigned);
    emit(sparse_pool, SampleCategory::sparse_crop, Split::unassigned);
    emit_blanks(blanks, Split::unassigned);
    emit(test_full, SampleCategory::full_crop, Split::test);
    emit(test_sparse, SampleCategory::sparse_crop, Split::test);
    emit_blanks(config.test_blank_count, Split::test);
    return m;
}

DatasetManifest split(DatasetManifest manifest, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ConfigError("train fraction must lie in (0, 1), got " + std::to_string(train_fraction));
    }
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < manifest.samples.size(); ++i) {
        const auto s = manifest.samples[i].split;
        if (s == Split::test) continue;
        if (s != Split::unassigned) throw ConfigError("manifest is already split");
        pool.push_back(i);
    }
    detail::Engine rng(detail::mix_seed(seed, 7));
    detail::shuffle(pool, rng);
    const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(pool.size())));
    for (std::size_t k = 0; k < pool.size(); ++k) {
        manifest.samples[pool[k]].split = k < n_train ? Split::train : Split::val;
    }
    manifest.train_fraction = train_fraction;
    return manifest;
}

// ---------------------------------------------------------------------------
// Payloads

HyperCube make_input(const HyperCube& target, const ShiftGeometry& geometry, InputFormat format) {
    auto image = simulate(target, geometry);
    if (format == InputFormat::blocks) return extract_blocks(image).blocks;
    return image.as_cube();
}

CtisImage input_to_image(const HyperCube& input, const ShiftGeometry& geometry, InputFormat format) {
    if (format == InputFormat::blocks) return reassemble(BlockSet{geometry, input});
    const auto q = geometry.canvas_side();
    if (input.rows() != q || input.cols() != q || input.bands() != 1) {
        throw DimensionError("canvas input must be " + std::to_string(q) + "x" + std::to_string(q) + "x1");
    }
    return {geometry, std::vector<float>(input.data().begin(), input.data().end())};
}

SampleFactory::SampleFactory(const DatasetManifest& manifest) : manifest_(manifest) {
    for (const auto& src : manifest.sources) scenes_.emplace(src.id, generate_scene(src.scene));
}

SamplePayload SampleFactory::make(const SampleRecord& sample) const {
    const auto& g = manifest_.geometry;
    HyperCube target;
    if (sample.category == SampleCategory::blank) {
        target = HyperCube(g.cube_side(), g.cube_side(), g.bands());
    } else {
        const auto it = scenes_.find(sample.source);
        if (it == scenes_.end()) {
            throw FormatError("sample " + std::to_string(sample.id) + " references unknown source", 0);
        }
        target = select_bands(crop(it->second, sample.window), sample.bands);
    }
    auto input = make_input(target, g, manifest_.input_format);
    return {std::move(input), std::move(target)};
}

// ---------------------------------------------------------------------------
// Export / import

namespace {

constexpr std::size_t kExportBatch = 64;

std::string split_file_name(Split s) { return std::string(to_string(s)) + ".bin"; }

}  // namespace

void export_for_training(DatasetManifest& manifest, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& s : manifest.samples) {
        if (s.split == Split::unassigned) {
            throw ConfigError("sample " + std::to_string(s.id) + " has no split; run split() before export");
        }
    }

    const SampleFactory factory(manifest);

    manifest.files.clear();
    std::map<Split, std::ofstream> streams;
    std::map<Split, std::uint64_t> positions;
    for (const auto& s : manifest.samples) {
        if (streams.contains(s.split)) continue;
        const auto name = split_file_name(s.split);
        manifest.files[std::string(to_string(s.split))] = name;
        auto& out = streams[s.split];
        out.open(dir / name, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + (dir / name).string() + " for writing");
        positions[s.split] = 0;
    }

    std::vector<SamplePayload> batch;
    for (std::size_t first = 0; first < manifest.samples.size(); first += kExportBatch) {
        const std::size_t n = std::min(kExportBatch, manifest.samples.size() - first);
        batch.assign(n, {});
        parallel_for(
            n,
            [&](std::size_t begin, std::size_t end) {
                for (std::size_t k = begin; k < end; ++k) batch[k] = factory.make(manifest.samples[first + k]);
            },
            1);
        for (std::size_t k = 0; k < n; ++k) {
            auto& sample = manifest.samples[first + k];
            auto& out = streams[sample.split];
            auto& pos = positions[sample.split];
            sample.offset = pos;
            detail::put_le(out, sample.id);
            write_cube(batch[k].input, out);
            write_cube(batch[k].target, out);
            pos += 8 + frame_bytes(batch[k].input) + frame_bytes(batch[k].target);
        }
    }
    for (auto& [split, out] : streams) {
        out.flush();
        if (!out) throw IoError("write failed for split " + std::string(to_string(split)));
    }
    manifest.save(dir / "manifest.json");
}

DatasetManifest build_dataset(const DatasetConfig& config, const std::filesystem::path& dir) {
    auto manifest = split(plan_dataset(config), config.train_fraction, config.seed);
    export_for_training(manifest, dir);
    return manifest;
}

DatasetReader::DatasetReader(const std::filesystem::path& manifest_path)
    : dir_(manifest_path.parent_path()), manifest_(DatasetManifest::load(manifest_path)) {}

DatasetRecord DatasetReader::read(const SampleRecord& sample) {
    const auto split_name = std::string(to_string(sample.split));
    auto it = streams_.find(split_name);
    if (it == streams_.end()) {
        const auto file = manifest_.files.find(split_name);
        if (file == manifest_.files.end()) throw FormatError("manifest lists no file for split " + split_name, 0);
        std::ifstream in(dir_ / file->second, std::ios::binary);
        if (!in) throw IoError("cannot open " + (dir_ / file->second).string());
        it = streams_.emplace(split_name, std::move(in)).first;
    }
    auto& in = it->second;
    in.clear();
    in.seekg(static_cast<std::streamoff>(sample.offset));
    DatasetRecord rec;
    if (!detail::get_le(in, rec.id)) throw FormatError("truncated record id", sample.offset);
    if (rec.id != sample.id) {
        throw FormatError("record id " + std::to_string(rec.id) + " found where manifest expects " +
                              std::to_string(sample.id),
                          sample.offset);
    }
    rec.input = read_cube(in, sample.offset + 8);
    rec.target = read_cube(in, sample.offset + 8 + frame_bytes(rec.input));
    const auto& g = manifest_.geometry;
    if (rec.target.rows() != g.cube_side() || rec.target.cols() != g.cube_side() || rec.target.bands() != g.bands()) {
        throw FormatError("record " + std::to_string(rec.id) + " target dims disagree with the manifest geometry",
                          sample.offset);
    }
    return rec;
}

DatasetRecord DatasetReader::read(std::uint64_t id) {
    const auto* s = manifest_.find(id);
    if (s == nullptr) throw FormatError("id " + std::to_string(id) + " is not in the manifest", 0);
    return read(*s);
}

PredictionWriter::PredictionWriter(const std::filesystem::path& path)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path) {
    if (!out_) throw IoError("cannot open " + path.string() + " for writing");
}

void PredictionWriter::write(std::uint64_t id, const HyperCube& cube) {
    detail::put_le(out_, id);
    write_cube(cube, out_);
    if (!out_) throw IoError("write failed: " + path_.string());
}

void PredictionWriter::close() {
    out_.flush();
    if (!out_) throw IoError("write failed: " + path_.string());
    out_.close();
}

PredictionReader::PredictionReader(const std::filesystem::path& path, const DatasetManifest& manifest)
    : in_(path, std::ios::binary), manifest_(manifest) {
    if (!in_) throw IoError("cannot open predictions " + path.string());
}

bool PredictionReader::next(std::uint64_t& id, HyperCube& cube) {
    if (in_.peek() == std::char_traits<char>::eof()) return false;
    const auto record = record_++;
    const auto where = "prediction record " + std::to_string(record);
    if (!detail::get_le(in_, id)) throw FormatError(where + ": truncated id", offset_);
    const auto* sample = manifest_.find(id);
    if (sample == nullptr) {
        throw FormatError(where + ": id " + std::to_string(id) + " is not in the manifest", offset_);
    }
    try {
        cube = read_cube(in_, offset_ + 8);
    } catch (const FormatError& e) {
        throw FormatError(where + " (id " + std::to_string(id) + "): " + e.reason(), e.offset());
    }
    const auto& g = manifest_.geometry;
    if (cube.rows() != g.cube_side() || cube.cols() != g.cube_side() || cube.bands() != g.bands()) {
        throw FormatError(where + " (id " + std::to_string(id) + "): cube is " + std::to_string(cube.rows()) + "x" +
                              std::to_string(cube.cols()) + "x" + std::to_string(cube.bands()) + ", expected " +
                              std::to_string(g.cube_side()) + "x" + std::to_string(g.cube_side()) + "x" +
                              std::to_string(g.bands()),
                          offset_ + 8);
    }
    offset_ += 8 + frame_bytes(cube);
    return true;
}

std::vector<std::pair<std::uint64_t, HyperCube>> import_predictions(const std::filesystem::path& path,
                                                                    const DatasetManifest& manifest) {
    PredictionReader reader(path, manifest);
    std::vector<std::pair<std::uint64_t, HyperCube>> out;
    std::uint64_t id = 0;
    HyperCube cube;
    while (reader.next(id, cube)) out.emplace_back(id, std::move(cube));
    return out;
}

}  // namespace ctis
