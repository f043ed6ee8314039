#pragma once

#include <array>
#include <vector>

#include "ksal/scalar_field.hpp"

namespace ksal {

// Windowed mean over window*window neighborhoods, replicate-padded at borders.
// Window must be odd and >= 1.
ScalarField local_mean(const ScalarField& field, int window);

// Windowed population standard deviation (divide by count), replicate-padded.
ScalarField local_std(const ScalarField& field, int window);

// Shannon entropy in bits of the window's histogram over `bins` uniform bins
// on [0,1]. Field values must lie in [0,1].
ScalarField local_entropy(const ScalarField& field, int window, int bins);

// The seven statistic maps in fixed order: entropy@5x5, entropy@7x7,
// entropy@9x9, mean@3x3, mean@5x5, std@3x3, std@5x5.
struct StatStack {
    static constexpr int kCount = 7;
    std::array<ScalarField, kCount> maps;
    int width = 0;
    int height = 0;
};

inline constexpr std::array<const char*, StatStack::kCount> kStatLabels = {
    "entropy5", "entropy7", "entropy9", "mean3", "mean5", "std3", "std5"};

StatStack make_stat_stack(const ScalarField& channel, int entropy_bins = 64);

struct BlockRect {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;  // half-open
    int y1 = 0;
};

// Tiling of a width*height field into m*n blocks; trailing blocks at the
// right/bottom edges are truncated to fit. Adjacency is 4-connectivity on
// grid coordinates.
class BlockGrid {
public:
    BlockGrid() = default;
    BlockGrid(int field_width, int field_height, int block_width, int block_height);

    int field_width() const { return field_width_; }
    int field_height() const { return field_height_; }
    int block_width() const { return block_width_; }
    int block_height() const { return block_height_; }
    int cols() const { return cols_; }
    int rows() const { return rows_; }
    int count() const { return cols_ * rows_; }

    int col(int k) const { return k % cols_; }
    int row(int k) const { return k / cols_; }
    BlockRect rect(int k) const;
    int pixel_count(int k) const;

    bool valid_index(int k) const { return k >= 0 && k < count(); }
    bool adjacent(int a, int b) const;
    std::vector<int> neighbors(int k) const;

private:
    int field_width_ = 0;
    int field_height_ = 0;
    int block_width_ = 0;
    int block_height_ = 0;
    int cols_ = 0;
    int rows_ = 0;
};

BlockGrid partition_blocks(int width, int height, int m, int n);

// Per-block reduction: h holds the block-means of the seven statistic maps
// (StatStack order), z_mean the block-mean of the channel itself.
struct Measurement {
    std::array<double, StatStack::kCount> h{};
    double z_mean = 0.0;
    int block = 0;
};

Measurement block_measurement(const StatStack& stack, const ScalarField& channel,
                              const BlockGrid& grid, int k);

}  // namespace ksal
