#include "ksal/image_io.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "ksal/errors.hpp"

namespace ksal {

RgbImage load_image(const std::string& path) {
    if (!std::filesystem::exists(path)) throw IoError("cannot read " + path);
    // IMREAD_COLOR yields 8-bit BGR for every supported format (grayscale
    // replicated, alpha dropped), so decoding stays inside imgcodecs.
    cv::Mat bgr = cv::imread(path, cv::IMREAD_COLOR);
    if (bgr.empty()) throw FormatError("cannot decode " + path);

    RgbImage img(bgr.cols, bgr.rows);
    for (int y = 0; y < bgr.rows; ++y) {
        for (int x = 0; x < bgr.cols; ++x) {
            auto px = bgr.at<cv::Vec3b>(y, x);
            img.set(x, y, {px[2] / 255.0, px[1] / 255.0, px[0] / 255.0});
        }
    }
    return img;
}

void save_png_gray(const ScalarField& field, const std::string& path) {
    cv::Mat mat(field.height(), field.width(), CV_8UC1);
    for (int y = 0; y < field.height(); ++y)
        for (int x = 0; x < field.width(); ++x) {
            double v = std::clamp(field.at(x, y), 0.0, 1.0);
            mat.at<std::uint8_t>(y, x) =
                static_cast<std::uint8_t>(std::lround(v * 255.0));
        }
    bool ok = false;
    try {
        ok = cv::imwrite(path, mat);
    } catch (const cv::Exception&) {
        ok = false;
    }
    if (!ok) throw IoError("cannot write " + path);
}

namespace {

void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

std::uint32_t get_u32le(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) |
           (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

std::vector<std::uint8_t> raw_float_bytes(const ScalarField& field) {
    std::vector<std::uint8_t> out;
    out.reserve(8 + 4 * field.size());
    put_u32le(out, static_cast<std::uint32_t>(field.width()));
    put_u32le(out, static_cast<std::uint32_t>(field.height()));
    for (double d : field.data()) {
        float f = static_cast<float>(d);
        std::uint32_t bits;
        std::memcpy(&bits, &f, 4);
        put_u32le(out, bits);
    }
    return out;
}

void save_raw_float(const ScalarField& field, const std::string& path) {
    auto bytes = raw_float_bytes(field);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to " + path);
}

ScalarField load_raw_float(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (bytes.size() < 8) throw FormatError("raw float file too short: " + path);
    std::uint32_t w = get_u32le(bytes.data());
    std::uint32_t h = get_u32le(bytes.data() + 4);
    std::size_t expected = 8 + 4ull * w * h;
    if (w == 0 || h == 0 || bytes.size() != expected)
        throw FormatError("raw float header mismatch in " + path);

    ScalarField field(static_cast<int>(w), static_cast<int>(h));
    for (std::size_t i = 0; i < field.size(); ++i) {
        std::uint32_t bits = get_u32le(bytes.data() + 8 + 4 * i);
        float f;
        std::memcpy(&f, &bits, 4);
        field[i] = f;
    }
    return field;
}

}  // namespace ksal
