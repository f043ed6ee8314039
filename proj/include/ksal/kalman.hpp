#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "ksal/localstats.hpp"

namespace ksal {

inline constexpr int kStateDim = 7;

using StateVector = Eigen::Matrix<double, kStateDim, 1>;
using StateMatrix = Eigen::Matrix<double, kStateDim, kStateDim>;

// Two fixed noise regimes. Set I trusts the measurement (tiny R), Set II
// trusts the model (tiny Q).
enum class NoiseSet { SetI, SetII };

struct NoiseParams {
    double q = 0.0;  // process noise, Q = q * I
    double r = 0.0;  // measurement noise (scalar variance)
};

inline constexpr NoiseParams kSetI{0.1, 1e-10};
inline constexpr NoiseParams kSetII{1e-10, 0.1};

// Filter initialization and regime parameters, all configurable per run.
struct FilterParams {
    NoiseParams set1 = kSetI;
    NoiseParams set2 = kSetII;
    double p0 = 1.0;  // P0 = p0 * I
    double x0 = 0.0;  // initial coefficient fill
    double error_threshold = 0.1;
};

// Why a given block was assigned its noise set. HighError is checked first,
// then adjacency; Default means neither trigger fired (Set II).
enum class SwitchCause { Default, HighError, NonAdjacentJump };

struct BlockUpdate {
    int block = 0;
    NoiseSet set = NoiseSet::SetII;
    SwitchCause cause = SwitchCause::Default;
    double predicted = 0.0;   // h . x_prior, before the update
    double error = 0.0;       // |predicted - z_mean|
    double gain_norm = 0.0;   // |K|_2
};

// Seven-state Kalman filter with identity dynamics and a scalar measurement
// z = h . x + v, where h is a block's statistic vector.
class KalmanFilter {
public:
    KalmanFilter() : KalmanFilter(StateVector::Zero(), StateMatrix::Identity()) {}
    KalmanFilter(const StateVector& x0, const StateMatrix& p0) : x_(x0), p_(p0) {}

    const StateVector& state() const { return x_; }
    const StateMatrix& covariance() const { return p_; }

    // x <- x (F = I), P <- P + Q.
    void predict(double q);

    // Scalar update with gain K = P h / (h' P h + r); P is re-symmetrized
    // afterwards so round-off cannot accumulate into asymmetry. Returns |K|_2.
    // NumericError if the innovation variance h' P h + r is not positive.
    double update(const std::array<double, kStateDim>& h, double z, double r);

    // Measurement the current state predicts for statistics h.
    double predict_measurement(const std::array<double, kStateDim>& h) const;

private:
    StateVector x_;
    StateMatrix p_;
};

// Decides the noise set for the block about to be processed: Set I on high
// prediction error or when the block is not 4-adjacent to the previous one
// (which covers the first block of a traversal, prev_block < 0).
std::pair<NoiseSet, SwitchCause> select_regime(double error, double threshold,
                                               int prev_block, int block,
                                               const BlockGrid& grid);

// Runs the filter over the blocks in `order`, one update per block, switching
// noise sets per the regime rule. `predicted` holds each block's pre-update
// prediction, indexed by block id.
struct TraversalResult {
    std::vector<BlockUpdate> updates;  // in traversal order
    std::vector<double> predicted;     // indexed by block id
};

TraversalResult run_traversal(KalmanFilter& filter, const StatStack& stack,
                              const ScalarField& channel, const BlockGrid& grid,
                              const std::vector<int>& order,
                              const FilterParams& params = {});

// Fisher-Yates permutation of 0..count-1 driven by a seeded mt19937_64 with
// modulo index reduction; pinned to an exact sequence so runs reproduce across
// platforms and standard libraries.
std::vector<int> random_block_order(int count, std::uint64_t seed);

}  // namespace ksal
