#pragma once

#include <string>
#include <vector>

#include "ksal/metrics.hpp"
#include "ksal/saliency.hpp"

namespace ksal {

// One image/fixation pair; density_path is optional (empty = derive the
// density from the fixations). The id is the shared file stem.
struct DatasetEntry {
    std::string id;
    std::string image_path;
    std::string fixation_path;
    std::string density_path;
};

struct DatasetIndex {
    std::string root;
    std::vector<DatasetEntry> entries;  // sorted by id, ids unique
    int declared_width = 0;             // 0 = take dims from each image
    int declared_height = 0;
};

// Indexes root/images/<id>.{png,jpg,jpeg,ppm,pgm} against
// root/fixations/<id>.csv (and root/density/<id>.* when present). A manifest
// file — JSON array of {id, image, fixations, density?} with paths relative
// to root — overrides the stem convention entirely. IndexError names the stem
// of any image lacking a fixation file and rejects duplicate ids; every
// referenced file must exist at build time.
DatasetIndex build_index(const std::string& root, const std::string& manifest_path = "");

// CSV of one "x,y" integer pixel row per fixation; an optional "x,y" header
// and blank lines are skipped. Points are validated against the given dims
// (ParseError with the row number on out-of-range or malformed rows; empty
// record → ParseError). Duplicates are retained.
FixationRecord load_fixations(const std::string& path, int width, int height);

struct ImageResult {
    std::string id;
    MetricScores scores;
    bool ok = false;
    std::string error;
};

struct BenchmarkResult {
    std::vector<ImageResult> images;  // index order
    MetricScores mean;                // over successful images only
    int evaluated = 0;
    int failed = 0;
};

struct BenchmarkConfig {
    SaliencyConfig saliency;
    BorjiConfig borji;
    DensityConfig density;
};

// Scores every index entry: saliency map at working dims, upsampled to the
// image's own dims, all five metrics. Per-image failures are isolated — a bad
// file marks that entry failed and the run continues. Images run in parallel;
// per-image seeds derive from the entry id, and the reduction follows index
// order, so results do not depend on scheduling.
BenchmarkResult run_benchmark(const DatasetIndex& index, const BenchmarkConfig& config);

}  // namespace ksal
