#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace spmrf {

inline constexpr const char* version = "0.1.0";

inline constexpr double log_2pi = 1.8378770664093454836;
inline constexpr double half_log_2pi = 0.9189385332046727418;

/// Raised when a run fails inside the sampler (initialization, degenerate
/// output) as opposed to a bad argument.
struct SamplerError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised on file-system problems in the I/O layer.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace spmrf
