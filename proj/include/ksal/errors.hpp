#pragma once

#include <stdexcept>

namespace ksal {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filter arithmetic that cannot proceed, e.g. nonpositive innovation variance.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Metric undefined for its inputs (constant map, zero-sum map, ...).
struct MetricError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dataset indexing failure: missing counterpart files, duplicate ids.
struct IndexError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace ksal
