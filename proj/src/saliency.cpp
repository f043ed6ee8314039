#include "ksal/saliency.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ksal/parallel.hpp"

namespace ksal {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t traversal_seed(std::uint64_t base, int scale_divisor, int channel_index) {
    // Keyed on the divisor's value, not its position in the scale list, so a
    // reordered list cannot change any traversal.
    std::uint64_t s = splitmix64(base ^ (0x9e3779b97f4a7c15ull *
                                         static_cast<std::uint64_t>(scale_divisor)));
    return splitmix64(s ^ static_cast<std::uint64_t>(channel_index + 1));
}

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

ScalarField expected_image(const ScalarField& channel, const BlockGrid& grid,
                           const std::vector<int>& order, const FilterParams& params,
                           int entropy_bins) {
    StatStack stack = make_stat_stack(channel, entropy_bins);
    KalmanFilter filter(StateVector::Constant(params.x0),
                        params.p0 * StateMatrix::Identity());
    TraversalResult t = run_traversal(filter, stack, channel, grid, order, params);

    ScalarField out(channel.width(), channel.height());
    for (int k = 0; k < grid.count(); ++k) {
        double v = std::clamp(t.predicted[static_cast<std::size_t>(k)], 0.0, 1.0);
        BlockRect r = grid.rect(k);
        for (int y = r.y0; y < r.y1; ++y)
            for (int x = r.x0; x < r.x1; ++x) out.at(x, y) = v;
    }
    return out;
}

ScalarField surprise_map(const ScalarField& channel, const ScalarField& expected) {
    if (!channel.same_dims(expected))
        throw std::invalid_argument("surprise_map: dimension mismatch");
    ScalarField out(channel.width(), channel.height());
    for (std::size_t i = 0; i < channel.size(); ++i)
        out[i] = std::abs(channel[i] - expected[i]);
    return out;
}

double percentile(const ScalarField& field, double pct) {
    if (field.empty()) throw std::invalid_argument("percentile: empty field");
    if (pct < 0.0 || pct > 100.0)
        throw std::invalid_argument("percentile: pct must lie in [0,100]");
    std::vector<double> v(field.data());
    std::sort(v.begin(), v.end());
    double pos = pct / 100.0 * static_cast<double>(v.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    std::size_t hi = std::min(lo + 1, v.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return v[lo] + frac * (v[hi] - v[lo]);
}

ScalarField contrast_stretch(const ScalarField& field, double low_pct, double high_pct) {
    if (!(low_pct >= 0.0 && low_pct < high_pct && high_pct <= 100.0))
        throw std::invalid_argument("contrast_stretch: need 0 <= low < high <= 100");
    double lo = percentile(field, low_pct);
    double hi = percentile(field, high_pct);
    // Sparse maps can collapse both percentiles onto one value; the full range
    // still carries the signal, so fall back to it rather than flattening.
    if (!(hi > lo)) return normalize_minmax(field);

    ScalarField out(field.width(), field.height());
    double scale = 1.0 / (hi - lo);
    for (std::size_t i = 0; i < field.size(); ++i)
        out[i] = std::clamp((field[i] - lo) * scale, 0.0, 1.0);
    return out;
}

ScalarField fuse_channels(const std::vector<ScalarField>& maps) {
    if (maps.empty()) throw std::invalid_argument("fuse_channels: no maps");
    for (const auto& m : maps)
        if (!m.same_dims(maps.front()))
            throw std::invalid_argument("fuse_channels: dimension mismatch");

    ScalarField mean(maps.front().width(), maps.front().height());
    for (const auto& m : maps)
        for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += m[i];
    double inv = 1.0 / static_cast<double>(maps.size());
    for (auto& v : mean.data()) v *= inv;
    return normalize_minmax(mean);
}

ScalarField apply_center_bias(const ScalarField& field, double sigma_factor) {
    if (!(sigma_factor > 0.0))
        throw std::invalid_argument("apply_center_bias: sigma_factor must be > 0");
    int w = field.width(), h = field.height();
    double cx = (w - 1) / 2.0, cy = (h - 1) / 2.0;
    double diag = std::hypot(static_cast<double>(w - 1), static_cast<double>(h - 1));
    double sigma = sigma_factor * diag;
    double inv2s2 = sigma > 0.0 ? 1.0 / (2.0 * sigma * sigma) : 0.0;

    ScalarField out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double dx = x - cx, dy = y - cy;
            out.at(x, y) = field.at(x, y) * std::exp(-(dx * dx + dy * dy) * inv2s2);
        }
    return normalize_minmax(out);
}

namespace {

void validate(const SaliencyConfig& cfg) {
    if (cfg.working_width < 1 || cfg.working_height < 1)
        throw std::invalid_argument("saliency: working dims must be >= 1");
    if (cfg.block_size < 1)
        throw std::invalid_argument("saliency: block size must be >= 1");
    if (cfg.scales.empty()) throw std::invalid_argument("saliency: no scales");
    for (int d : cfg.scales)
        if (d < 1) throw std::invalid_argument("saliency: scale divisors must be >= 1");
    if (!(cfg.stretch_low >= 0.0 && cfg.stretch_low < cfg.stretch_high &&
          cfg.stretch_high <= 100.0))
        throw std::invalid_argument("saliency: bad stretch percentiles");
    if (cfg.entropy_bins < 2)
        throw std::invalid_argument("saliency: entropy bins must be >= 2");
}

ScalarField fuse_scale(const std::vector<ScalarField>& channel_maps,
                       const SaliencyConfig& cfg) {
    ScalarField fused = fuse_channels(channel_maps);
    if (cfg.center_bias && !cfg.center_bias_after_fusion)
        fused = apply_center_bias(fused, cfg.center_bias_sigma_factor);
    return fused;
}

ScalarField channel_surprise(const ScalarField& channel, const BlockGrid& grid,
                             std::uint64_t seed, const SaliencyConfig& cfg) {
    std::vector<int> order = random_block_order(grid.count(), seed);
    ScalarField expected =
        expected_image(channel, grid, order, cfg.kalman, cfg.entropy_bins);
    return contrast_stretch(surprise_map(channel, expected), cfg.stretch_low,
                            cfg.stretch_high);
}

}  // namespace

ScalarField saliency_at_scale(const RgbImage& working, const SaliencyConfig& config,
                              int scale_divisor) {
    validate(config);
    int sw = std::max(1, config.working_width / scale_divisor);
    int sh = std::max(1, config.working_height / scale_divisor);
    RgbImage scaled = resize_bilinear(working, sw, sh);
    ChannelSet channels = extract_channels(scaled, config.variant, config.channels);
    BlockGrid grid = partition_blocks(sw, sh, config.block_size, config.block_size);

    std::vector<ScalarField> maps(channels.channels.size());
    int threads = resolve_threads(config.max_threads);
    parallel_for(static_cast<int>(channels.channels.size()), threads, [&](int c) {
        maps[static_cast<std::size_t>(c)] =
            channel_surprise(channels.channels[static_cast<std::size_t>(c)].field, grid,
                             traversal_seed(config.seed, scale_divisor, c), config);
    });
    return fuse_scale(maps, config);
}

SaliencyResult compute_saliency(const RgbImage& image, const SaliencyConfig& config) {
    validate(config);
    if (image.empty()) throw std::invalid_argument("compute_saliency: empty image");

    RgbImage working =
        resize_bilinear(image, config.working_width, config.working_height);

    std::vector<int> scales = config.scales;
    std::sort(scales.begin(), scales.end());

    struct ScaleJob {
        RgbImage scaled;
        ChannelSet channels;
        BlockGrid grid;
    };
    std::vector<ScaleJob> jobs(scales.size());
    int threads = resolve_threads(config.max_threads);

    parallel_for(static_cast<int>(scales.size()), threads, [&](int si) {
        int d = scales[static_cast<std::size_t>(si)];
        auto& job = jobs[static_cast<std::size_t>(si)];
        int sw = std::max(1, config.working_width / d);
        int sh = std::max(1, config.working_height / d);
        job.scaled = resize_bilinear(working, sw, sh);
        job.channels = extract_channels(job.scaled, config.variant, config.channels);
        job.grid = partition_blocks(sw, sh, config.block_size, config.block_size);
    });

    // One task per (scale, channel): the stat stacks and traversals dominate
    // the cost and are fully independent.
    int per_scale = static_cast<int>(jobs.front().channels.channels.size());
    int total = static_cast<int>(scales.size()) * per_scale;
    std::vector<ScalarField> surprise(static_cast<std::size_t>(total));
    parallel_for(total, threads, [&](int t) {
        int si = t / per_scale, c = t % per_scale;
        const auto& job = jobs[static_cast<std::size_t>(si)];
        surprise[static_cast<std::size_t>(t)] = channel_surprise(
            job.channels.channels[static_cast<std::size_t>(c)].field, job.grid,
            traversal_seed(config.seed, scales[static_cast<std::size_t>(si)], c),
            config);
    });

    SaliencyResult result;
    result.seed = config.seed;
    result.scale_maps.reserve(scales.size());
    for (std::size_t si = 0; si < scales.size(); ++si) {
        std::vector<ScalarField> channel_maps(
            surprise.begin() + static_cast<std::ptrdiff_t>(si * per_scale),
            surprise.begin() + static_cast<std::ptrdiff_t>((si + 1) * per_scale));
        ScalarField fused = fuse_scale(channel_maps, config);
        result.scale_maps.push_back(resize_bilinear(fused, config.working_width,
                                                    config.working_height));
    }

    ScalarField mean(config.working_width, config.working_height);
    for (const auto& m : result.scale_maps)
        for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += m[i];
    double inv = 1.0 / static_cast<double>(result.scale_maps.size());
    for (auto& v : mean.data()) v *= inv;
    result.map = normalize_minmax(mean);

    if (config.center_bias && config.center_bias_after_fusion)
        result.map = apply_center_bias(result.map, config.center_bias_sigma_factor);
    return result;
}

}  // namespace ksal
