#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ksal/channels.hpp"
#include "ksal/kalman.hpp"
#include "ksal/localstats.hpp"
#include "ksal/scalar_field.hpp"

namespace ksal {

struct SaliencyConfig {
    ChannelVariant variant = ChannelVariant::KS7;
    ChannelConfig channels;

    int working_width = 400;
    int working_height = 300;
    int block_size = 25;
    std::vector<int> scales = {1, 2, 4};  // divisors of the working dims

    FilterParams kalman;

    double stretch_low = 1.0;    // percentile
    double stretch_high = 99.0;  // percentile

    bool center_bias = true;
    bool center_bias_after_fusion = false;
    double center_bias_sigma_factor = 0.35;  // of the image diagonal

    int entropy_bins = 64;
    std::uint64_t seed = 0;
    int max_threads = 0;  // 0 = hardware concurrency
};

// Block-constant image the filter expects for one channel: each block is
// filled with the pre-update prediction h_k . x_prior, clamped to [0,1].
ScalarField expected_image(const ScalarField& channel, const BlockGrid& grid,
                           const std::vector<int>& order,
                           const FilterParams& params, int entropy_bins = 64);

// |channel - expected|, the per-channel surprise.
ScalarField surprise_map(const ScalarField& channel, const ScalarField& expected);

// Linear stretch mapping the low/high percentiles to 0/1 with clamping.
// Percentiles are linearly interpolated order statistics. When the two
// percentiles coincide on a non-constant field (heavily skewed data) the
// stretch falls back to the full min-max range; a constant field maps to
// all zeros.
ScalarField contrast_stretch(const ScalarField& field, double low_pct, double high_pct);

// Linearly interpolated order statistic at pct in [0,100].
double percentile(const ScalarField& field, double pct);

// Mean across per-channel maps followed by min-max normalization.
ScalarField fuse_channels(const std::vector<ScalarField>& maps);

// Multiplicative centered Gaussian, sigma = factor * image diagonal.
ScalarField apply_center_bias(const ScalarField& field, double sigma_factor);

// Full pipeline for a single scale: channels -> stats -> filter traversal ->
// surprise -> stretch -> fusion (+ center bias unless deferred).
ScalarField saliency_at_scale(const RgbImage& working, const SaliencyConfig& config,
                              int scale_divisor);

struct SaliencyResult {
    ScalarField map;                      // working dims, [0,1]
    std::vector<ScalarField> scale_maps;  // per scale (ascending divisor), at working dims
    std::uint64_t seed = 0;
};

// Multi-scale saliency of an input image. The image is resized to the working
// dims, each scale runs at working/scale, the maps are upsampled, averaged and
// min-max normalized. The result stays at working resolution; use
// resize_bilinear to match the source if needed.
SaliencyResult compute_saliency(const RgbImage& image, const SaliencyConfig& config);

// splitmix64-derived sub-seed for one (scale, channel) traversal, keyed on the
// scale's divisor value so reordering the scale list cannot change a
// traversal's seed.
std::uint64_t traversal_seed(std::uint64_t base, int scale_divisor, int channel_index);

// FNV-1a over text; derives stable per-image seeds from dataset ids.
std::uint64_t fnv1a64(std::string_view text);

}  // namespace ksal
