#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "fibersampler/errors.hpp"

namespace fibersampler {

// log(n!) for n in [0, max_n], built by summing logs so every platform gets
// the same bits.
class LogFactorial {
 public:
  explicit LogFactorial(std::size_t max_n) : table_(max_n + 1, 0.0) {
    for (std::size_t n = 2; n <= max_n; ++n) {
      table_[n] = table_[n - 1] + std::log(static_cast<double>(n));
    }
  }

  double operator()(long long n) const {
    if (n < 0 || static_cast<std::size_t>(n) >= table_.size()) {
      throw Error(ErrorCode::kInvalidArgument, "log-factorial argument out of range");
    }
    return table_[static_cast<std::size_t>(n)];
  }

  std::size_t max_n() const { return table_.size() - 1; }

 private:
  std::vector<double> table_;
};

}  // namespace fibersampler
