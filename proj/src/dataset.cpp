#include "ksal/dataset.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ksal/errors.hpp"
#include "ksal/image_io.hpp"
#include "ksal/parallel.hpp"

namespace fs = std::filesystem;

namespace ksal {

namespace {

bool is_image_file(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".ppm" ||
           ext == ".pgm";
}

void require_exists(const std::string& path, const std::string& id) {
    if (!fs::exists(path))
        throw IndexError("dataset entry '" + id + "': missing file " + path);
}

DatasetIndex index_from_manifest(const std::string& root, const std::string& manifest) {
    std::ifstream in(manifest);
    if (!in) throw IoError("cannot read manifest " + manifest);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("manifest " + manifest + ": " + e.what());
    }
    if (!doc.is_array()) throw ParseError("manifest " + manifest + ": expected an array");

    auto resolve = [&](const std::string& rel) {
        fs::path p(rel);
        return p.is_absolute() ? p.string() : (fs::path(root) / p).string();
    };

    DatasetIndex index;
    index.root = root;
    for (const auto& item : doc) {
        if (!item.is_object() || !item.contains("id") || !item.contains("image") ||
            !item.contains("fixations"))
            throw ParseError("manifest " + manifest +
                             ": entries need id, image and fixations");
        DatasetEntry entry;
        try {
            entry.id = item.at("id").get<std::string>();
            entry.image_path = resolve(item.at("image").get<std::string>());
            entry.fixation_path = resolve(item.at("fixations").get<std::string>());
            if (item.contains("density"))
                entry.density_path = resolve(item.at("density").get<std::string>());
        } catch (const nlohmann::json::exception&) {
            throw ParseError("manifest " + manifest + ": entry fields must be strings");
        }
        require_exists(entry.image_path, entry.id);
        require_exists(entry.fixation_path, entry.id);
        if (!entry.density_path.empty()) require_exists(entry.density_path, entry.id);
        index.entries.push_back(std::move(entry));
    }
    return index;
}

DatasetIndex index_from_convention(const std::string& root) {
    fs::path images = fs::path(root) / "images";
    fs::path fixations = fs::path(root) / "fixations";
    fs::path density = fs::path(root) / "density";
    if (!fs::is_directory(images))
        throw IoError("dataset root has no images/ directory: " + root);
    if (!fs::is_directory(fixations))
        throw IoError("dataset root has no fixations/ directory: " + root);

    DatasetIndex index;
    index.root = root;
    std::vector<std::string> missing;
    for (const auto& entry : fs::directory_iterator(images)) {
        if (!entry.is_regular_file() || !is_image_file(entry.path())) continue;
        std::string id = entry.path().stem().string();
        fs::path fix = fixations / (id + ".csv");
        if (!fs::exists(fix)) {
            missing.push_back(id);
            continue;
        }
        DatasetEntry e;
        e.id = id;
        e.image_path = entry.path().string();
        e.fixation_path = fix.string();
        if (fs::is_directory(density)) {
            for (const auto& d : fs::directory_iterator(density)) {
                if (d.is_regular_file() && d.path().stem().string() == id) {
                    e.density_path = d.path().string();
                    break;
                }
            }
        }
        index.entries.push_back(std::move(e));
    }
    if (!missing.empty()) {
        std::sort(missing.begin(), missing.end());
        std::string msg = "images without fixation files:";
        for (const auto& id : missing) msg += " " + id;
        throw IndexError(msg);
    }
    return index;
}

}  // namespace

DatasetIndex build_index(const std::string& root, const std::string& manifest_path) {
    if (!fs::is_directory(root)) throw IoError("dataset root not found: " + root);
    DatasetIndex index = manifest_path.empty() ? index_from_convention(root)
                                               : index_from_manifest(root, manifest_path);
    std::sort(index.entries.begin(), index.entries.end(),
              [](const DatasetEntry& a, const DatasetEntry& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < index.entries.size(); ++i)
        if (index.entries[i].id == index.entries[i - 1].id)
            throw IndexError("duplicate dataset id: " + index.entries[i].id);
    return index;
}

FixationRecord load_fixations(const std::string& path, int width, int height) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);

    FixationRecord record;
    record.id = fs::path(path).stem().string();
    record.width = width;
    record.height = height;

    std::string line;
    int row = 0;
    while (std::getline(in, line)) {
        ++row;
        std::string trimmed;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
        if (trimmed.empty()) continue;
        if (trimmed == "x,y") continue;  // optional header

        std::size_t comma = trimmed.find(',');
        if (comma == std::string::npos || trimmed.find(',', comma + 1) != std::string::npos)
            throw ParseError(path + ": row " + std::to_string(row) +
                             ": expected 'x,y'");
        try {
            std::size_t used = 0;
            double x = std::stod(trimmed.substr(0, comma), &used);
            if (used != comma) throw std::invalid_argument("trailing junk");
            std::string ys = trimmed.substr(comma + 1);
            double y = std::stod(ys, &used);
            if (used != ys.size()) throw std::invalid_argument("trailing junk");
            if (x < 0 || x >= width || y < 0 || y >= height)
                throw ParseError(path + ": row " + std::to_string(row) +
                                 ": point outside " + std::to_string(width) + "x" +
                                 std::to_string(height));
            record.points.push_back({x, y});
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError(path + ": row " + std::to_string(row) +
                             ": expected 'x,y'");
        }
    }
    if (record.points.empty()) throw ParseError(path + ": no fixations");
    return record;
}

namespace {

// Ground-truth density supplied by the dataset, resampled to the image dims.
ScalarField load_density_field(const std::string& path, int width, int height) {
    ScalarField field;
    if (fs::path(path).extension() == ".raw") {
        field = load_raw_float(path);
    } else {
        RgbImage img = load_image(path);
        field = ScalarField(img.width(), img.height());
        for (int y = 0; y < img.height(); ++y)
            for (int x = 0; x < img.width(); ++x) {
                Rgb px = img.at(x, y);
                field.at(x, y) = (px.r + px.g + px.b) / 3.0;
            }
    }
    return normalize_minmax(resize_bilinear(field, width, height));
}

MetricScores score_entry(const DatasetEntry& entry, const BenchmarkConfig& config) {
    RgbImage img = load_image(entry.image_path);
    FixationRecord record =
        load_fixations(entry.fixation_path, img.width(), img.height());

    SaliencyConfig cfg = config.saliency;
    cfg.seed = fnv1a64(entry.id) ^ config.saliency.seed;
    cfg.max_threads = 1;  // the benchmark already parallelizes across images
    SaliencyResult result = compute_saliency(img, cfg);

    BorjiConfig borji = config.borji;
    borji.seed = fnv1a64(entry.id) ^ config.borji.seed;

    if (entry.density_path.empty())
        return score_map(result.map, record.points, record.width, record.height, borji,
                         config.density);

    ScalarField sal = resize_bilinear(result.map, record.width, record.height);
    ScalarField dens = load_density_field(entry.density_path, record.width, record.height);
    MetricScores scores;
    scores.auc_judd = auc_judd(sal, record.points);
    scores.auc_borji = auc_borji(sal, record.points, borji);
    scores.cc = pearson_cc(sal, dens);
    scores.sim = similarity(sal, dens);
    scores.nss = nss(sal, record.points);
    return scores;
}

}  // namespace

BenchmarkResult run_benchmark(const DatasetIndex& index, const BenchmarkConfig& config) {
    BenchmarkResult result;
    result.images.resize(index.entries.size());

    int threads = resolve_threads(config.saliency.max_threads);
    parallel_for(static_cast<int>(index.entries.size()), threads, [&](int i) {
        const DatasetEntry& entry = index.entries[static_cast<std::size_t>(i)];
        ImageResult& out = result.images[static_cast<std::size_t>(i)];
        out.id = entry.id;
        try {
            out.scores = score_entry(entry, config);
            out.ok = true;
        } catch (const std::exception& e) {
            out.ok = false;
            out.error = e.what();
        }
    });

    for (const auto& r : result.images) {
        if (!r.ok) {
            ++result.failed;
            continue;
        }
        ++result.evaluated;
        result.mean.auc_judd += r.scores.auc_judd;
        result.mean.auc_borji += r.scores.auc_borji;
        result.mean.cc += r.scores.cc;
        result.mean.sim += r.scores.sim;
        result.mean.nss += r.scores.nss;
    }
    if (result.evaluated > 0) {
        double n = static_cast<double>(result.evaluated);
        result.mean.auc_judd /= n;
        result.mean.auc_borji /= n;
        result.mean.cc /= n;
        result.mean.sim /= n;
        result.mean.nss /= n;
    }
    return result;
}

}  // namespace ksal
