#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ksal/scalar_field.hpp"

namespace ksal {

// Decodes PNG, JPEG or PGM/PPM into [0,1] components. Grayscale inputs are
// replicated to r=g=b. Throws IoError if the file cannot be read, FormatError
// if it cannot be decoded.
RgbImage load_image(const std::string& path);

// 8-bit grayscale PNG, value = round(v*255) with v clamped to [0,1].
void save_png_gray(const ScalarField& field, const std::string& path);

// Raw export: two little-endian u32 (width, height) followed by row-major
// little-endian f32 values.
void save_raw_float(const ScalarField& field, const std::string& path);
ScalarField load_raw_float(const std::string& path);

// The save_raw_float payload, in memory.
std::vector<std::uint8_t> raw_float_bytes(const ScalarField& field);

}  // namespace ksal
