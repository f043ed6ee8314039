#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ksal/scalar_field.hpp"

namespace ksal {

struct Fixation {
    double x = 0.0;
    double y = 0.0;
};

// Pooled fixations of all observers for one image, in source-image pixel
// coordinates. Duplicates are kept (several observers may hit one pixel).
struct FixationRecord {
    std::string id;
    std::vector<Fixation> points;
    int width = 0;   // source dims the coordinates live in
    int height = 0;
};

// Pearson correlation between two maps of equal dims. MetricError if either
// side is constant.
double pearson_cc(const ScalarField& saliency, const ScalarField& density);

// Histogram intersection of the two maps after each is normalized to sum 1.
// MetricError if either sums to zero.
double similarity(const ScalarField& saliency, const ScalarField& density);

// Mean saliency z-score (population std) at the fixated pixels; fixations are
// rounded to the nearest pixel and duplicates count every time they appear.
// MetricError on a constant map or empty fixation list.
double nss(const ScalarField& saliency, const std::vector<Fixation>& fixations);

struct RocPoint {
    double threshold = 0.0;
    double fpr = 0.0;
    double tpr = 0.0;
};

// ROC sweep over `steps` uniform thresholds t_j = j/(steps-1) in descending
// order, with a (0,0) sentinel at threshold +inf first. Classification rule is
// value >= threshold.
std::vector<RocPoint> roc_curve(const ScalarField& saliency,
                                const std::vector<Fixation>& fixations, int steps);

// AUC with thresholds taken from the saliency values at the (unique) fixated
// pixels, trapezoid rule with (0,0) and (1,1) endpoints. A constant map gives
// exactly 0.5.
double auc_judd(const ScalarField& saliency, const std::vector<Fixation>& fixations);

// Exact Mann-Whitney AUC of positives vs negatives with 0.5 credit for ties
// (computed via average ranks).
double mann_whitney_auc(const std::vector<double>& positives,
                        const std::vector<double>& negatives);

struct BorjiConfig {
    int splits = 100;
    int samples = 0;  // 0 = one per fixation
    std::uint64_t seed = 0;
};

// Shuffled AUC variant: positives are the fixated-pixel values; each split
// samples `samples` negative pixels uniformly without replacement, scores a
// Mann-Whitney AUC, and the splits are averaged.
double auc_borji(const ScalarField& saliency, const std::vector<Fixation>& fixations,
                 const BorjiConfig& config = {});

struct DensityConfig {
    double sigma = 25.0;            // at the reference dims below
    double reference_width = 681.0;
    double reference_height = 511.0;
};

// Continuous fixation density: integer-pixel splat of each fixation followed
// by a separable Gaussian blur (radius ceil(8*sigma), capped at the larger map
// dim) and min-max normalization. Sigma rescales with the ratio of the target
// diagonal to the reference diagonal.
ScalarField fixation_density(const std::vector<Fixation>& fixations, int source_width,
                             int source_height, int target_width, int target_height,
                             const DensityConfig& config = {});

// Maps a fixation given in source-image coordinates onto a target grid,
// returning integer pixel coordinates (or -1,-1 if it lands outside).
std::pair<int, int> map_fixation(const Fixation& f, int source_width, int source_height,
                                 int target_width, int target_height);

struct MetricScores {
    double auc_judd = 0.0;
    double auc_borji = 0.0;
    double cc = 0.0;
    double sim = 0.0;
    double nss = 0.0;
};

// All five metrics for one saliency map against one fixation record.
MetricScores score_map(const ScalarField& saliency, const std::vector<Fixation>& fixations,
                       int source_width, int source_height, const BorjiConfig& borji = {},
                       const DensityConfig& density = {});

}  // namespace ksal
