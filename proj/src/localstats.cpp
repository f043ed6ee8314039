#include "ksal/localstats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace ksal {

namespace {

void check_window(int window) {
    if (window < 1 || window % 2 == 0)
        throw std::invalid_argument("window must be odd and >= 1");
}

// Separable clamped-index box sum == 2-D window sum with replicate padding.
ScalarField box_sum(const ScalarField& field, int window) {
    int r = window / 2;
    int w = field.width(), h = field.height();

    ScalarField horiz(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double s = 0.0;
            for (int dx = -r; dx <= r; ++dx)
                s += field.at(std::clamp(x + dx, 0, w - 1), y);
            horiz.at(x, y) = s;
        }

    ScalarField out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double s = 0.0;
            for (int dy = -r; dy <= r; ++dy)
                s += horiz.at(x, std::clamp(y + dy, 0, h - 1));
            out.at(x, y) = s;
        }
    return out;
}

}  // namespace

ScalarField local_mean(const ScalarField& field, int window) {
    check_window(window);
    if (field.empty()) throw std::invalid_argument("local_mean: empty field");
    ScalarField out = box_sum(field, window);
    double inv = 1.0 / (static_cast<double>(window) * window);
    for (auto& v : out.data()) v *= inv;
    return out;
}

ScalarField local_std(const ScalarField& field, int window) {
    check_window(window);
    if (field.empty()) throw std::invalid_argument("local_std: empty field");

    // Work on a globally centered copy: E[g^2] - E[g]^2 is then free of the
    // catastrophic cancellation that makes constant regions go nonzero.
    double shift = field.sum() / static_cast<double>(field.size());
    ScalarField g(field.width(), field.height());
    ScalarField g2(field.width(), field.height());
    for (std::size_t i = 0; i < field.size(); ++i) {
        double v = field[i] - shift;
        g[i] = v;
        g2[i] = v * v;
    }

    ScalarField s1 = box_sum(g, window);
    ScalarField s2 = box_sum(g2, window);
    double n = static_cast<double>(window) * window;
    ScalarField out(field.width(), field.height());
    for (std::size_t i = 0; i < field.size(); ++i) {
        double mean = s1[i] / n;
        double var = s2[i] / n - mean * mean;
        out[i] = std::sqrt(std::max(var, 0.0));
    }
    return out;
}

ScalarField local_entropy(const ScalarField& field, int window, int bins) {
    check_window(window);
    if (bins < 2) throw std::invalid_argument("local_entropy: bins must be >= 2");
    if (field.empty()) throw std::invalid_argument("local_entropy: empty field");

    int w = field.width(), h = field.height();
    std::vector<int> binned(field.size());
    for (std::size_t i = 0; i < field.size(); ++i) {
        double v = field[i];
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("local_entropy: values must lie in [0,1]");
        binned[i] = std::min(static_cast<int>(v * bins), bins - 1);
    }

    // H = log2(n) - sum(c*log2 c)/n with exact integer counts; the c*log2(c)
    // table keeps every window's entropy a short, reproducible sum.
    int r = window / 2;
    int n = window * window;
    std::vector<double> clog(n + 1, 0.0);
    for (int c = 2; c <= n; ++c) clog[c] = c * std::log2(static_cast<double>(c));
    double log_n = std::log2(static_cast<double>(n));

    ScalarField out(w, h);
    std::vector<int> hist(bins, 0);
    std::vector<int> touched;
    touched.reserve(n);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            touched.clear();
            for (int dy = -r; dy <= r; ++dy) {
                int sy = std::clamp(y + dy, 0, h - 1);
                for (int dx = -r; dx <= r; ++dx) {
                    int sx = std::clamp(x + dx, 0, w - 1);
                    int b = binned[field.index(sx, sy)];
                    if (hist[b]++ == 0) touched.push_back(b);
                }
            }
            double s = 0.0;
            for (int b : touched) {
                s += clog[hist[b]];
                hist[b] = 0;
            }
            out.at(x, y) = std::max(log_n - s / n, 0.0);
        }
    }
    return out;
}

StatStack make_stat_stack(const ScalarField& channel, int entropy_bins) {
    StatStack stack;
    stack.width = channel.width();
    stack.height = channel.height();
    stack.maps[0] = local_entropy(channel, 5, entropy_bins);
    stack.maps[1] = local_entropy(channel, 7, entropy_bins);
    stack.maps[2] = local_entropy(channel, 9, entropy_bins);
    stack.maps[3] = local_mean(channel, 3);
    stack.maps[4] = local_mean(channel, 5);
    stack.maps[5] = local_std(channel, 3);
    stack.maps[6] = local_std(channel, 5);
    return stack;
}

BlockGrid::BlockGrid(int field_width, int field_height, int block_width,
                     int block_height)
    : field_width_(field_width),
      field_height_(field_height),
      block_width_(block_width),
      block_height_(block_height) {
    if (block_width < 1 || block_height < 1)
        throw std::invalid_argument("BlockGrid: block dims must be >= 1");
    if (field_width < 1 || field_height < 1)
        throw std::invalid_argument("BlockGrid: field dims must be >= 1");
    cols_ = (field_width + block_width - 1) / block_width;
    rows_ = (field_height + block_height - 1) / block_height;
}

BlockRect BlockGrid::rect(int k) const {
    if (!valid_index(k)) throw std::invalid_argument("BlockGrid: block index out of range");
    int c = col(k), r = row(k);
    BlockRect rect;
    rect.x0 = c * block_width_;
    rect.y0 = r * block_height_;
    rect.x1 = std::min(rect.x0 + block_width_, field_width_);
    rect.y1 = std::min(rect.y0 + block_height_, field_height_);
    return rect;
}

int BlockGrid::pixel_count(int k) const {
    BlockRect r = rect(k);
    return (r.x1 - r.x0) * (r.y1 - r.y0);
}

bool BlockGrid::adjacent(int a, int b) const {
    if (!valid_index(a) || !valid_index(b))
        throw std::invalid_argument("BlockGrid: block index out of range");
    int dc = std::abs(col(a) - col(b));
    int dr = std::abs(row(a) - row(b));
    return dc + dr == 1;
}

std::vector<int> BlockGrid::neighbors(int k) const {
    if (!valid_index(k)) throw std::invalid_argument("BlockGrid: block index out of range");
    std::vector<int> out;
    int c = col(k), r = row(k);
    if (r > 0) out.push_back(k - cols_);
    if (c > 0) out.push_back(k - 1);
    if (c + 1 < cols_) out.push_back(k + 1);
    if (r + 1 < rows_) out.push_back(k + cols_);
    return out;
}

BlockGrid partition_blocks(int width, int height, int m, int n) {
    return BlockGrid(width, height, m, n);
}

Measurement block_measurement(const StatStack& stack, const ScalarField& channel,
                              const BlockGrid& grid, int k) {
    if (stack.width != channel.width() || stack.height != channel.height())
        throw std::invalid_argument("block_measurement: stack/channel dims differ");
    if (grid.field_width() != channel.width() || grid.field_height() != channel.height())
        throw std::invalid_argument("block_measurement: grid/channel dims differ");
    BlockRect r = grid.rect(k);  // validates k
    double n = static_cast<double>(grid.pixel_count(k));

    Measurement m;
    m.block = k;
    for (int i = 0; i < StatStack::kCount; ++i) {
        double s = 0.0;
        for (int y = r.y0; y < r.y1; ++y)
            for (int x = r.x0; x < r.x1; ++x) s += stack.maps[i].at(x, y);
        m.h[i] = s / n;
    }
    double s = 0.0;
    for (int y = r.y0; y < r.y1; ++y)
        for (int x = r.x0; x < r.x1; ++x) s += channel.at(x, y);
    m.z_mean = s / n;
    return m;
}

}  // namespace ksal
