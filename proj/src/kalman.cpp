#include "ksal/kalman.hpp"

#include <cmath>
#include <random>

#include "ksal/errors.hpp"

namespace ksal {

void KalmanFilter::predict(double q) {
    for (int i = 0; i < kStateDim; ++i) p_(i, i) += q;
}

double KalmanFilter::update(const std::array<double, kStateDim>& h, double z,
                            double r) {
    StateVector hv;
    for (int i = 0; i < kStateDim; ++i) hv(i) = h[i];

    StateVector ph = p_ * hv;
    double innovation_var = hv.dot(ph) + r;
    if (!(innovation_var > 0.0))
        throw NumericError("kalman update: nonpositive innovation variance");

    StateVector k = ph / innovation_var;
    double innovation = z - hv.dot(x_);
    x_ += k * innovation;
    Eigen::Matrix<double, 1, kStateDim> hp = hv.transpose() * p_;
    p_ -= k * hp;
    StateMatrix sym = 0.5 * (p_ + p_.transpose());
    p_ = sym;
    return k.norm();
}

double KalmanFilter::predict_measurement(const std::array<double, kStateDim>& h) const {
    double s = 0.0;
    for (int i = 0; i < kStateDim; ++i) s += h[i] * x_(i);
    return s;
}

std::pair<NoiseSet, SwitchCause> select_regime(double error, double threshold,
                                               int prev_block, int block,
                                               const BlockGrid& grid) {
    if (error > threshold) return {NoiseSet::SetI, SwitchCause::HighError};
    if (prev_block < 0 || !grid.adjacent(prev_block, block))
        return {NoiseSet::SetI, SwitchCause::NonAdjacentJump};
    return {NoiseSet::SetII, SwitchCause::Default};
}

TraversalResult run_traversal(KalmanFilter& filter, const StatStack& stack,
                              const ScalarField& channel, const BlockGrid& grid,
                              const std::vector<int>& order,
                              const FilterParams& params) {
    TraversalResult result;
    result.updates.reserve(order.size());
    result.predicted.assign(static_cast<std::size_t>(grid.count()), 0.0);

    int prev = -1;
    for (int k : order) {
        Measurement m = block_measurement(stack, channel, grid, k);

        BlockUpdate u;
        u.block = k;
        u.predicted = filter.predict_measurement(m.h);
        u.error = std::abs(u.predicted - m.z_mean);
        auto [set, cause] = select_regime(u.error, params.error_threshold, prev, k, grid);
        u.set = set;
        u.cause = cause;

        const NoiseParams& noise = (set == NoiseSet::SetI) ? params.set1 : params.set2;
        filter.predict(noise.q);
        u.gain_norm = filter.update(m.h, m.z_mean, noise.r);

        result.predicted[static_cast<std::size_t>(k)] = u.predicted;
        result.updates.push_back(u);
        prev = k;
    }
    return result;
}

std::vector<int> random_block_order(int count, std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("random_block_order: empty grid");
    std::vector<int> order(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) order[static_cast<std::size_t>(i)] = i;

    // Fisher-Yates with modulo reduction off mt19937_64: fully pinned, unlike
    // std::shuffle / uniform_int_distribution which vary across libraries.
    std::mt19937_64 rng(seed);
    for (int i = count - 1; i > 0; --i) {
        auto j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
        std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }
    return order;
}

}  // namespace ksal
