#pragma once

#include <span>
#include <vector>

#include "fibersampler/table.hpp"

namespace fibersampler {

// Real-valued fitted cell means under the no-three-way interaction model.
class FittedTable {
 public:
  FittedTable() = default;
  FittedTable(Dims dims, std::vector<double> cells);

  const Dims& dims() const { return dims_; }
  std::span<const double> cells() const { return cells_; }
  double at(std::size_t i, std::size_t j, std::size_t k) const {
    return cells_[dims_.index(i, j, k)];
  }
  double operator[](std::size_t flat) const { return cells_[flat]; }

 private:
  Dims dims_{};
  std::vector<double> cells_;
};

}  // namespace fibersampler
