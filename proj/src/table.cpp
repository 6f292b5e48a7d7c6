#include "fibersampler/table.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "fibersampler/fitted.hpp"

namespace fibersampler {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNegativeCount: return "NegativeCount";
    case ErrorCode::kDimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::kFloorViolation: return "FloorViolation";
    case ErrorCode::kEndMismatch: return "EndMismatch";
    case ErrorCode::kZeroFittedCell: return "ZeroFittedCell";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kInfeasibleMargins: return "InfeasibleMargins";
    case ErrorCode::kFiberTooLarge: return "FiberTooLarge";
    case ErrorCode::kNoSamplesRecorded: return "NoSamplesRecorded";
    case ErrorCode::kEmptyResult: return "EmptyResult";
  }
  return "Unknown";
}

Table3D::Table3D(Dims dims, std::vector<Count> cells, RelaxDepth floor)
    : dims_(dims), floor_(floor), cells_(std::move(cells)) {
  if (!dims_.valid()) {
    throw Error(ErrorCode::kDimensionMismatch, "table dimensions must be positive");
  }
  if (floor_.t < 0) {
    throw Error(ErrorCode::kInvalidArgument, "relaxation depth must be >= 0");
  }
  if (cells_.size() != dims_.cells()) {
    std::ostringstream msg;
    msg << "expected " << dims_.cells() << " cells for " << dims_.I << "x" << dims_.J
        << "x" << dims_.K << ", got " << cells_.size();
    throw Error(ErrorCode::kDimensionMismatch, msg.str());
  }
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    if (cells_[c] < floor_.floor_value()) {
      std::ostringstream msg;
      msg << "cell " << c << " has count " << cells_[c] << " below floor "
          << floor_.floor_value();
      throw Error(ErrorCode::kNegativeCount, msg.str());
    }
  }
}

Table3D Table3D::zeros(Dims dims, RelaxDepth floor) {
  return Table3D(dims, std::vector<Count>(dims.cells(), 0), floor);
}

Table3D Table3D::filled(Dims dims, Count value, RelaxDepth floor) {
  return Table3D(dims, std::vector<Count>(dims.cells(), value), floor);
}

Count Table3D::total() const {
  return std::accumulate(cells_.begin(), cells_.end(), Count{0});
}

Count Table3D::min_cell() const {
  return cells_.empty() ? 0 : *std::min_element(cells_.begin(), cells_.end());
}

bool Table3D::is_nonnegative() const {
  return std::all_of(cells_.begin(), cells_.end(), [](Count c) { return c >= 0; });
}

Table3D Table3D::with_floor(RelaxDepth floor) const {
  return Table3D(dims_, cells_, floor);
}

Table3D Table3D::minus(const Table3D& other) const {
  if (!(dims_ == other.dims_)) {
    throw Error(ErrorCode::kDimensionMismatch, "table difference needs equal dims");
  }
  std::vector<Count> out(cells_.size());
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = cells_[c] - other.cells_[c];
  Count lowest = out.empty() ? 0 : *std::min_element(out.begin(), out.end());
  return Table3D(dims_, std::move(out), RelaxDepth{std::max<Count>(0, -lowest)});
}

bool MarginSet::consistent() const {
  if (!dims.valid()) return false;
  if (jk.size() != dims.J * dims.K || ik.size() != dims.I * dims.K ||
      ij.size() != dims.I * dims.J) {
    return false;
  }
  Count a = std::accumulate(jk.begin(), jk.end(), Count{0});
  Count b = std::accumulate(ik.begin(), ik.end(), Count{0});
  Count c = std::accumulate(ij.begin(), ij.end(), Count{0});
  return a == b && b == c;
}

bool MarginSet::nonnegative() const {
  auto nonneg = [](const std::vector<Count>& v) {
    return std::all_of(v.begin(), v.end(), [](Count x) { return x >= 0; });
  };
  return nonneg(jk) && nonneg(ik) && nonneg(ij);
}

bool MarginSet::all_zero() const {
  auto zero = [](const std::vector<Count>& v) {
    return std::all_of(v.begin(), v.end(), [](Count x) { return x == 0; });
  };
  return zero(jk) && zero(ik) && zero(ij);
}

std::vector<Count> MarginSet::flattened() const {
  std::vector<Count> b;
  b.reserve(jk.size() + ik.size() + ij.size());
  b.insert(b.end(), jk.begin(), jk.end());
  b.insert(b.end(), ik.begin(), ik.end());
  b.insert(b.end(), ij.begin(), ij.end());
  return b;
}

MarginSet MarginSet::shifted(Count t) const {
  MarginSet out = *this;
  for (auto& x : out.jk) x += t * static_cast<Count>(dims.I);
  for (auto& x : out.ik) x += t * static_cast<Count>(dims.J);
  for (auto& x : out.ij) x += t * static_cast<Count>(dims.K);
  return out;
}

MarginSet compute_margins(Dims dims, std::span<const Count> cells) {
  MarginSet m;
  m.dims = dims;
  m.jk.assign(dims.J * dims.K, 0);
  m.ik.assign(dims.I * dims.K, 0);
  m.ij.assign(dims.I * dims.J, 0);
  std::size_t flat = 0;
  for (std::size_t i = 0; i < dims.I; ++i) {
    for (std::size_t j = 0; j < dims.J; ++j) {
      for (std::size_t k = 0; k < dims.K; ++k, ++flat) {
        const Count v = cells[flat];
        m.jk[j * dims.K + k] += v;
        m.ik[i * dims.K + k] += v;
        m.ij[i * dims.J + j] += v;
      }
    }
  }
  return m;
}

MarginSet compute_margins(const Table3D& table) {
  return compute_margins(table.dims(), table.cells());
}

double chi_square(std::span<const Count> observed, std::span<const double> fitted) {
  if (observed.size() != fitted.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "observed and fitted sizes differ");
  }
  double sum = 0.0;
  for (std::size_t c = 0; c < observed.size(); ++c) {
    const double e = fitted[c];
    const double o = static_cast<double>(observed[c]);
    if (e < kZeroFittedThreshold) {
      if (observed[c] != 0) {
        std::ostringstream msg;
        msg << "fitted cell " << c << " is " << e << " but observed count is "
            << observed[c];
        throw Error(ErrorCode::kZeroFittedCell, msg.str());
      }
      continue;
    }
    const double d = o - e;
    sum += d * d / e;
  }
  return sum;
}

double chi_square(const Table3D& observed, const FittedTable& fitted) {
  if (!(observed.dims() == fitted.dims())) {
    throw Error(ErrorCode::kDimensionMismatch, "observed and fitted dims differ");
  }
  return chi_square(observed.cells(), fitted.cells());
}

FittedTable::FittedTable(Dims dims, std::vector<double> cells)
    : dims_(dims), cells_(std::move(cells)) {
  if (cells_.size() != dims_.cells()) {
    throw Error(ErrorCode::kDimensionMismatch, "fitted table length mismatch");
  }
}

}  // namespace fibersampler
