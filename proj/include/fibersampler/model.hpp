#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fibersampler/fitted.hpp"
#include "fibersampler/table.hpp"

namespace fibersampler {

// 0/1 design matrix of the no-three-way interaction model.
//
// Rows come in three blocks: jk margins (J*K rows), ik margins (I*K rows),
// ij margins (I*J rows), each row-major. Columns are cells in flat (i,j,k)
// order. So A * flatten(u) == compute_margins(u).flattened().
class DesignMatrix {
 public:
  explicit DesignMatrix(Dims dims);

  const Dims& dims() const { return dims_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  int at(std::size_t row, std::size_t col) const { return entries_[row * cols_ + col]; }

  std::vector<Count> multiply(std::span<const Count> cells) const;

 private:
  Dims dims_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::uint8_t> entries_;
};

inline DesignMatrix build_design_matrix(Dims dims) { return DesignMatrix(dims); }

struct IpfpOptions {
  double tol = 1e-8;        // on the max absolute margin discrepancy
  int max_iter = 10000;     // full jk -> ik -> ij cycles
  // Cells allowed to be positive; empty means all. Passing the union of the
  // supports of the fiber's tables makes sampling zeros converge geometrically
  // instead of creeping toward the boundary.
  std::vector<bool> support;
};

// Maximum likelihood fitted means by iterative proportional fitting, started
// from all ones with every cell on a zero line forced to zero. Throws
// kNoConvergence after max_iter cycles and kNegativeCount for negative input.
FittedTable ipfp_fit(const Table3D& observed, IpfpOptions options = {});

// The fit only sees margins, so callers holding just a MarginSet can fit.
FittedTable ipfp_fit(const MarginSet& margins, IpfpOptions options = {});

// Largest absolute difference between the fit's margins and the targets.
double max_margin_discrepancy(const FittedTable& fitted, const MarginSet& target);

// (I-1)(J-1)(K-1)
std::int64_t degrees_of_freedom(Dims dims);

// x >= reference, treating values within 1e-9 relative as ties. Used for
// every p-value count so tables with equal statistics are never split by
// rounding.
inline bool chi_square_at_least(double x, double reference) {
  const double scale = reference > 1.0 ? reference : 1.0;
  return x >= reference - 1e-9 * scale;
}

// P(X > x) for X ~ chi-square(df).
double chi_square_survival(double x, std::int64_t df);
double chi_square_density(double x, std::int64_t df);
double chi_square_quantile(double p, std::int64_t df);

}  // namespace fibersampler
