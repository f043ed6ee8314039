#include "ksal/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "ksal/errors.hpp"

namespace ksal {

namespace {

void check_dims(const ScalarField& a, const ScalarField& b, const char* who) {
    if (!a.same_dims(b)) throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

std::pair<int, int> fixation_pixel(const Fixation& f, const ScalarField& s) {
    int x = static_cast<int>(std::lround(f.x));
    int y = static_cast<int>(std::lround(f.y));
    if (x < 0 || x >= s.width() || y < 0 || y >= s.height())
        throw std::invalid_argument("fixation outside the map");
    return {x, y};
}

// Mask of the fixated pixels (duplicates collapse onto one pixel).
std::vector<char> fixation_mask(const ScalarField& s,
                                const std::vector<Fixation>& fixations) {
    if (fixations.empty()) throw std::invalid_argument("empty fixation list");
    std::vector<char> mask(s.size(), 0);
    for (const auto& f : fixations) {
        auto [x, y] = fixation_pixel(f, s);
        mask[s.index(x, y)] = 1;
    }
    return mask;
}

double count_ge(const std::vector<double>& sorted, double t) {
    return static_cast<double>(sorted.end() -
                               std::lower_bound(sorted.begin(), sorted.end(), t));
}

double trapezoid(const std::vector<std::pair<double, double>>& pts) {
    double area = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        area += 0.5 * (pts[i].first - pts[i - 1].first) *
                (pts[i].second + pts[i - 1].second);
    return area;
}

}  // namespace

double pearson_cc(const ScalarField& saliency, const ScalarField& density) {
    check_dims(saliency, density, "pearson_cc");
    // Constancy is decided on the values, not the accumulated variance:
    // summing a non-dyadic constant leaves the variance a hair above zero.
    if (auto [lo, hi] = saliency.minmax(); lo == hi)
        throw MetricError("pearson_cc: constant input");
    if (auto [lo, hi] = density.minmax(); lo == hi)
        throw MetricError("pearson_cc: constant input");
    double n = static_cast<double>(saliency.size());
    double ms = saliency.sum() / n;
    double md = density.sum() / n;
    double cov = 0.0, vs = 0.0, vd = 0.0;
    for (std::size_t i = 0; i < saliency.size(); ++i) {
        double a = saliency[i] - ms;
        double b = density[i] - md;
        cov += a * b;
        vs += a * a;
        vd += b * b;
    }
    if (vs == 0.0 || vd == 0.0) throw MetricError("pearson_cc: constant input");
    return cov / std::sqrt(vs * vd);
}

double similarity(const ScalarField& saliency, const ScalarField& density) {
    check_dims(saliency, density, "similarity");
    double ss = saliency.sum();
    double sd = density.sum();
    if (!(ss > 0.0) || !(sd > 0.0)) throw MetricError("similarity: zero-sum input");
    double sim = 0.0;
    for (std::size_t i = 0; i < saliency.size(); ++i)
        sim += std::min(saliency[i] / ss, density[i] / sd);
    return sim;
}

double nss(const ScalarField& saliency, const std::vector<Fixation>& fixations) {
    if (fixations.empty()) throw std::invalid_argument("nss: empty fixation list");
    if (auto [lo, hi] = saliency.minmax(); lo == hi)
        throw MetricError("nss: constant map");
    double n = static_cast<double>(saliency.size());
    double mean = saliency.sum() / n;
    double var = 0.0;
    for (std::size_t i = 0; i < saliency.size(); ++i) {
        double d = saliency[i] - mean;
        var += d * d;
    }
    double sd = std::sqrt(var / n);
    if (sd == 0.0) throw MetricError("nss: constant map");

    double acc = 0.0;
    for (const auto& f : fixations) {
        auto [x, y] = fixation_pixel(f, saliency);
        acc += (saliency.at(x, y) - mean) / sd;
    }
    return acc / static_cast<double>(fixations.size());
}

double auc_judd(const ScalarField& saliency, const std::vector<Fixation>& fixations) {
    std::vector<char> mask = fixation_mask(saliency, fixations);

    std::vector<double> pos, neg;
    for (std::size_t i = 0; i < saliency.size(); ++i)
        (mask[i] ? pos : neg).push_back(saliency[i]);
    std::sort(pos.begin(), pos.end());
    std::sort(neg.begin(), neg.end());

    std::vector<double> thresholds(pos);
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                     thresholds.end());

    double npos = static_cast<double>(pos.size());
    double nneg = static_cast<double>(neg.size());
    if (nneg == 0.0) throw MetricError("auc_judd: every pixel is fixated");

    std::vector<std::pair<double, double>> pts;
    pts.reserve(thresholds.size() + 2);
    pts.emplace_back(0.0, 0.0);
    for (auto it = thresholds.rbegin(); it != thresholds.rend(); ++it)
        pts.emplace_back(count_ge(neg, *it) / nneg, count_ge(pos, *it) / npos);
    pts.emplace_back(1.0, 1.0);
    return trapezoid(pts);
}

double mann_whitney_auc(const std::vector<double>& positives,
                        const std::vector<double>& negatives) {
    if (positives.empty() || negatives.empty())
        throw std::invalid_argument("mann_whitney_auc: empty sample");

    // Average ranks; rank sums stay exact in doubles (integers and halves).
    struct Tagged {
        double v;
        bool pos;
    };
    std::vector<Tagged> all;
    all.reserve(positives.size() + negatives.size());
    for (double v : positives) all.push_back({v, true});
    for (double v : negatives) all.push_back({v, false});
    std::sort(all.begin(), all.end(),
              [](const Tagged& a, const Tagged& b) { return a.v < b.v; });

    double rank_sum = 0.0;
    std::size_t i = 0;
    while (i < all.size()) {
        std::size_t j = i;
        while (j < all.size() && all[j].v == all[i].v) ++j;
        double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
        for (std::size_t k = i; k < j; ++k)
            if (all[k].pos) rank_sum += avg_rank;
        i = j;
    }

    double p = static_cast<double>(positives.size());
    double m = static_cast<double>(negatives.size());
    return (rank_sum - p * (p + 1.0) / 2.0) / (p * m);
}

double auc_borji(const ScalarField& saliency, const std::vector<Fixation>& fixations,
                 const BorjiConfig& config) {
    if (config.splits < 1) throw std::invalid_argument("auc_borji: splits must be >= 1");
    std::vector<char> mask = fixation_mask(saliency, fixations);

    std::vector<double> pos;
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < saliency.size(); ++i) {
        if (mask[i])
            pos.push_back(saliency[i]);
        else
            pool.push_back(i);
    }
    if (pool.empty()) throw MetricError("auc_borji: every pixel is fixated");

    std::size_t samples = config.samples > 0
                              ? static_cast<std::size_t>(config.samples)
                              : fixations.size();
    samples = std::min(samples, pool.size());

    std::mt19937_64 rng(config.seed);
    std::vector<double> neg(samples);
    double acc = 0.0;
    for (int split = 0; split < config.splits; ++split) {
        // Partial Fisher-Yates: uniform sample without replacement.
        for (std::size_t i = 0; i < samples; ++i) {
            std::size_t j = i + static_cast<std::size_t>(
                                    rng() % static_cast<std::uint64_t>(pool.size() - i));
            std::swap(pool[i], pool[j]);
            neg[i] = saliency[pool[i]];
        }
        acc += mann_whitney_auc(pos, neg);
    }
    return acc / static_cast<double>(config.splits);
}

std::vector<RocPoint> roc_curve(const ScalarField& saliency,
                                const std::vector<Fixation>& fixations, int steps) {
    if (steps < 2) throw std::invalid_argument("roc_curve: steps must be >= 2");
    std::vector<char> mask = fixation_mask(saliency, fixations);

    std::vector<double> pos, neg;
    for (std::size_t i = 0; i < saliency.size(); ++i)
        (mask[i] ? pos : neg).push_back(saliency[i]);
    std::sort(pos.begin(), pos.end());
    std::sort(neg.begin(), neg.end());
    double npos = static_cast<double>(pos.size());
    double nneg = static_cast<double>(neg.size());
    if (nneg == 0.0) throw MetricError("roc_curve: every pixel is fixated");

    std::vector<RocPoint> curve;
    curve.reserve(static_cast<std::size_t>(steps) + 1);
    curve.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
    for (int j = steps - 1; j >= 0; --j) {
        double t = static_cast<double>(j) / (steps - 1);
        curve.push_back({t, count_ge(neg, t) / nneg, count_ge(pos, t) / npos});
    }
    return curve;
}

std::pair<int, int> map_fixation(const Fixation& f, int source_width, int source_height,
                                 int target_width, int target_height) {
    int x = static_cast<int>(
        std::lround((f.x + 0.5) * target_width / source_width - 0.5));
    int y = static_cast<int>(
        std::lround((f.y + 0.5) * target_height / source_height - 0.5));
    if (x < 0 || x >= target_width || y < 0 || y >= target_height) return {-1, -1};
    return {x, y};
}

ScalarField fixation_density(const std::vector<Fixation>& fixations, int source_width,
                             int source_height, int target_width, int target_height,
                             const DensityConfig& config) {
    if (fixations.empty())
        throw std::invalid_argument("fixation_density: empty fixation list");
    if (!(config.sigma > 0.0))
        throw std::invalid_argument("fixation_density: sigma must be > 0");

    double ref_diag = std::hypot(config.reference_width, config.reference_height);
    double diag = std::hypot(static_cast<double>(target_width),
                             static_cast<double>(target_height));
    double sigma = config.sigma * diag / ref_diag;

    ScalarField splat(target_width, target_height);
    for (const auto& f : fixations) {
        auto [x, y] = map_fixation(f, source_width, source_height, target_width,
                                   target_height);
        if (x >= 0) splat.at(x, y) += 1.0;
    }

    // Separable zero-padded blur; the kernel is truncated far out enough that
    // the tail is below double noise.
    int radius = static_cast<int>(std::ceil(8.0 * sigma));
    radius = std::min(radius, std::max(target_width, target_height));
    std::vector<double> kernel(static_cast<std::size_t>(radius) + 1);
    for (int i = 0; i <= radius; ++i)
        kernel[static_cast<std::size_t>(i)] =
            std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));

    ScalarField horiz(target_width, target_height);
    for (int y = 0; y < target_height; ++y)
        for (int x = 0; x < target_width; ++x) {
            double s = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                int sx = x + i;
                if (sx < 0 || sx >= target_width) continue;
                s += splat.at(sx, y) * kernel[static_cast<std::size_t>(std::abs(i))];
            }
            horiz.at(x, y) = s;
        }
    ScalarField dens(target_width, target_height);
    for (int y = 0; y < target_height; ++y)
        for (int x = 0; x < target_width; ++x) {
            double s = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                int sy = y + i;
                if (sy < 0 || sy >= target_height) continue;
                s += horiz.at(x, sy) * kernel[static_cast<std::size_t>(std::abs(i))];
            }
            dens.at(x, y) = s;
        }
    return normalize_minmax(dens);
}

MetricScores score_map(const ScalarField& saliency, const std::vector<Fixation>& fixations,
                       int source_width, int source_height, const BorjiConfig& borji,
                       const DensityConfig& density) {
    // Evaluation happens in ground-truth coordinates.
    ScalarField sal = resize_bilinear(saliency, source_width, source_height);
    ScalarField dens = fixation_density(fixations, source_width, source_height,
                                        source_width, source_height, density);
    MetricScores scores;
    scores.auc_judd = auc_judd(sal, fixations);
    scores.auc_borji = auc_borji(sal, fixations, borji);
    scores.cc = pearson_cc(sal, dens);
    scores.sim = similarity(sal, dens);
    scores.nss = nss(sal, fixations);
    return scores;
}

}  // namespace ksal
