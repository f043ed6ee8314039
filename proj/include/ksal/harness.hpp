#pragma once

#include <cstdint>
#include <string>

#include "ksal/dataset.hpp"
#include "ksal/metrics.hpp"
#include "ksal/saliency.hpp"

namespace ksal {

// Everything a run needs, shared by the CLI subcommands.
struct RunConfig {
    SaliencyConfig saliency;
    BorjiConfig borji;
    DensityConfig density;
};

// Parses a JSON config. Every key is optional and falls back to the default;
// unknown keys are rejected by name (ParseError), so typos cannot silently
// revert a setting to its default.
RunConfig config_from_json(const std::string& text);

// Reads and parses a config file. IoError if unreadable.
RunConfig load_config(const std::string& path);

// Canonical JSON rendering: fixed key order, round-trip float formatting.
// Two configs render identically iff they are equal.
std::string config_to_json(const RunConfig& config);

// FNV-1a 64 over the canonical rendering; the CLI prints it so a run's exact
// configuration can be checked at a glance.
std::uint64_t config_hash(const RunConfig& config);

// Benchmark report as deterministic JSON: config hash + seed, one record per
// image (scores or error), dataset means over the successful images.
std::string report_json(const BenchmarkResult& result, const RunConfig& config);

// Dataset-pooled ROC: per image, fixated and non-fixated pixels are counted
// against `steps` uniform thresholds j/(steps-1); counts pool across images
// and the rates come out in ascending-threshold order (row 0 is threshold 0,
// FPR=TPR=1). Per-image failures are skipped; IoError if nothing evaluates.
std::vector<RocPoint> pooled_roc(const DatasetIndex& index, const BenchmarkConfig& config,
                                 int steps);

// "threshold,fpr,tpr" header plus one row per point.
void write_roc_csv(const std::vector<RocPoint>& curve, const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace ksal
