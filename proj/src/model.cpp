#include "fibersampler/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace fibersampler {

DesignMatrix::DesignMatrix(Dims dims)
    : dims_(dims),
      rows_(dims.J * dims.K + dims.I * dims.K + dims.I * dims.J),
      cols_(dims.cells()),
      entries_(rows_ * cols_, 0) {
  if (!dims.valid()) {
    throw Error(ErrorCode::kDimensionTooSmall, "design matrix needs positive dims");
  }
  const std::size_t ik_base = dims.J * dims.K;
  const std::size_t ij_base = ik_base + dims.I * dims.K;
  for (std::size_t i = 0; i < dims.I; ++i) {
    for (std::size_t j = 0; j < dims.J; ++j) {
      for (std::size_t k = 0; k < dims.K; ++k) {
        const std::size_t col = dims.index(i, j, k);
        entries_[(j * dims.K + k) * cols_ + col] = 1;
        entries_[(ik_base + i * dims.K + k) * cols_ + col] = 1;
        entries_[(ij_base + i * dims.J + j) * cols_ + col] = 1;
      }
    }
  }
}

std::vector<Count> DesignMatrix::multiply(std::span<const Count> cells) const {
  if (cells.size() != cols_) {
    throw Error(ErrorCode::kDimensionMismatch, "vector length does not match columns");
  }
  std::vector<Count> out(rows_, 0);
  for (std::size_t r = 0; r < rows_; ++r) {
    const std::uint8_t* row = &entries_[r * cols_];
    Count sum = 0;
    for (std::size_t c = 0; c < cols_; ++c) sum += row[c] * cells[c];
    out[r] = sum;
  }
  return out;
}

namespace {

struct RealMargins {
  std::vector<double> jk, ik, ij;
};

RealMargins real_margins(const Dims& d, std::span<const double> cells) {
  RealMargins m{std::vector<double>(d.J * d.K, 0.0), std::vector<double>(d.I * d.K, 0.0),
                std::vector<double>(d.I * d.J, 0.0)};
  std::size_t flat = 0;
  for (std::size_t i = 0; i < d.I; ++i)
    for (std::size_t j = 0; j < d.J; ++j)
      for (std::size_t k = 0; k < d.K; ++k, ++flat) {
        m.jk[j * d.K + k] += cells[flat];
        m.ik[i * d.K + k] += cells[flat];
        m.ij[i * d.J + j] += cells[flat];
      }
  return m;
}

double max_gap(const std::vector<double>& got, const std::vector<Count>& want) {
  double worst = 0.0;
  for (std::size_t x = 0; x < got.size(); ++x) {
    worst = std::max(worst, std::abs(got[x] - static_cast<double>(want[x])));
  }
  return worst;
}

double discrepancy(const Dims& d, std::span<const double> cells, const MarginSet& target) {
  const RealMargins m = real_margins(d, cells);
  return std::max({max_gap(m.jk, target.jk), max_gap(m.ik, target.ik),
                   max_gap(m.ij, target.ij)});
}

}  // namespace

double max_margin_discrepancy(const FittedTable& fitted, const MarginSet& target) {
  return discrepancy(fitted.dims(), fitted.cells(), target);
}

FittedTable ipfp_fit(const MarginSet& margins, IpfpOptions options) {
  if (!(options.tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "IPFP tolerance must be positive");
  }
  if (!margins.consistent()) {
    throw Error(ErrorCode::kInfeasibleMargins, "margin blocks disagree");
  }
  if (!margins.nonnegative()) {
    throw Error(ErrorCode::kNegativeCount, "IPFP needs non-negative margins");
  }
  const Dims d = margins.dims;
  if (!options.support.empty() && options.support.size() != d.cells()) {
    throw Error(ErrorCode::kDimensionMismatch, "IPFP support mask has the wrong length");
  }
  std::vector<double> mu(d.cells(), 1.0);
  for (std::size_t c = 0; c < options.support.size(); ++c) {
    if (!options.support[c]) mu[c] = 0.0;
  }
  for (std::size_t i = 0; i < d.I; ++i)
    for (std::size_t j = 0; j < d.J; ++j)
      for (std::size_t k = 0; k < d.K; ++k) {
        if (margins.jk_at(j, k) == 0 || margins.ik_at(i, k) == 0 || margins.ij_at(i, j) == 0) {
          mu[d.index(i, j, k)] = 0.0;
        }
      }

  // Scale each line so its sum hits the target; lines with a zero target are
  // already zero.
  auto scale = [&](auto&& target_of, auto&& line_of_cell, std::size_t lines) {
    std::vector<double> sums(lines, 0.0);
    for (std::size_t c = 0; c < mu.size(); ++c) sums[line_of_cell(c)] += mu[c];
    for (std::size_t c = 0; c < mu.size(); ++c) {
      const std::size_t line = line_of_cell(c);
      if (sums[line] > 0.0) mu[c] *= static_cast<double>(target_of(line)) / sums[line];
    }
  };
  const std::size_t JK = d.J * d.K;
  auto jk_line = [&](std::size_t c) { return c % JK; };
  auto ik_line = [&](std::size_t c) { return (c / JK) * d.K + c % d.K; };
  auto ij_line = [&](std::size_t c) { return c / d.K; };

  for (int iter = 0; iter < options.max_iter; ++iter) {
    scale([&](std::size_t l) { return margins.jk[l]; }, jk_line, JK);
    scale([&](std::size_t l) { return margins.ik[l]; }, ik_line, d.I * d.K);
    scale([&](std::size_t l) { return margins.ij[l]; }, ij_line, d.I * d.J);
    if (discrepancy(d, mu, margins) < options.tol) return FittedTable(d, std::move(mu));
  }
  std::ostringstream msg;
  msg << "IPFP did not reach tolerance " << options.tol << " in " << options.max_iter
      << " cycles";
  throw Error(ErrorCode::kNoConvergence, msg.str());
}

FittedTable ipfp_fit(const Table3D& observed, IpfpOptions options) {
  if (!observed.is_nonnegative()) {
    throw Error(ErrorCode::kNegativeCount, "IPFP needs a non-negative table");
  }
  return ipfp_fit(compute_margins(observed), options);
}

std::int64_t degrees_of_freedom(Dims dims) {
  if (!dims.valid()) throw Error(ErrorCode::kInvalidArgument, "dims must be positive");
  return static_cast<std::int64_t>((dims.I - 1) * (dims.J - 1) * (dims.K - 1));
}

double chi_square_survival(double x, std::int64_t df) {
  if (df < 1) throw Error(ErrorCode::kInvalidArgument, "df must be >= 1");
  if (!(x >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "x must be >= 0");
  if (x == 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * static_cast<double>(df), 0.5 * x);
}

double chi_square_density(double x, std::int64_t df) {
  if (df < 1) throw Error(ErrorCode::kInvalidArgument, "df must be >= 1");
  if (x < 0.0) return 0.0;
  if (x == 0.0) return df == 2 ? 0.5 : (df == 1 ? INFINITY : 0.0);
  return boost::math::pdf(boost::math::chi_squared_distribution<double>(
                              static_cast<double>(df)),
                          x);
}

double chi_square_quantile(double p, std::int64_t df) {
  if (df < 1) throw Error(ErrorCode::kInvalidArgument, "df must be >= 1");
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::kInvalidArgument, "p must be in (0,1)");
  return boost::math::quantile(
      boost::math::chi_squared_distribution<double>(static_cast<double>(df)), p);
}

}  // namespace fibersampler
