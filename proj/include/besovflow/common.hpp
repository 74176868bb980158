#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace besovflow {

// Violation of a theorem hypothesis (e.g. theta <= 1/2 where theta > 1/2 is
// required). The CLI maps this to exit code 2.
struct HypothesisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File-format and I/O failures. The CLI maps these to exit code 3.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BadMagicError : IoError {
    using IoError::IoError;
};
struct DimensionMismatchError : IoError {
    using IoError::IoError;
};
struct TruncatedPayloadError : IoError {
    using IoError::IoError;
};

// Thread cap from BESOVFLOW_THREADS (>=1); defaults to hardware concurrency.
int max_threads();

// Runs fn(i) for i in [0, count). Results must be written to per-index slots;
// the loop never shares mutable state between iterations.
void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& fn);

inline bool is_pow2(std::int64_t v) { return v > 0 && (v & (v - 1)) == 0; }

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace besovflow
