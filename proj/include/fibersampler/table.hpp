#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fibersampler/errors.hpp"

namespace fibersampler {

using Count = std::int64_t;

struct Dims {
  std::size_t I = 0;
  std::size_t J = 0;
  std::size_t K = 0;

  std::size_t cells() const { return I * J * K; }
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return (i * J + j) * K + k;
  }
  bool valid() const { return I > 0 && J > 0 && K > 0; }

  friend bool operator==(const Dims&, const Dims&) = default;
};

// How far below zero a cell may go. depth 0 is the classical fiber.
struct RelaxDepth {
  Count t = 1;

  constexpr RelaxDepth() = default;
  constexpr explicit RelaxDepth(Count depth) : t(depth) {}

  constexpr Count floor_value() const { return -t; }

  friend bool operator==(const RelaxDepth&, const RelaxDepth&) = default;
};

// Dense I x J x K integer table, flat row-major in (i, j, k).
//
// Immutable once built. Every cell is >= floor().floor_value(); the
// constructor enforces it and move application never produces a table that
// violates it.
class Table3D {
 public:
  Table3D() = default;

  // Throws kDimensionMismatch on a length mismatch and kNegativeCount when a
  // cell is below the floor.
  Table3D(Dims dims, std::vector<Count> cells, RelaxDepth floor = RelaxDepth{0});

  static Table3D zeros(Dims dims, RelaxDepth floor = RelaxDepth{0});
  static Table3D filled(Dims dims, Count value, RelaxDepth floor = RelaxDepth{0});

  const Dims& dims() const { return dims_; }
  RelaxDepth floor() const { return floor_; }
  std::span<const Count> cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }

  Count at(std::size_t i, std::size_t j, std::size_t k) const {
    return cells_[dims_.index(i, j, k)];
  }
  Count operator[](std::size_t flat) const { return cells_[flat]; }

  Count total() const;
  Count min_cell() const;
  bool is_nonnegative() const;

  // Same cells, different floor. Throws if the cells violate the new floor.
  Table3D with_floor(RelaxDepth floor) const;

  // Cell-wise difference, kept at a floor deep enough to hold the result.
  Table3D minus(const Table3D& other) const;

  // Equality compares dims and cells only; the floor is a constraint on the
  // container, not part of the value.
  friend bool operator==(const Table3D& a, const Table3D& b) {
    return a.dims_ == b.dims_ && a.cells_ == b.cells_;
  }

 private:
  Dims dims_{};
  RelaxDepth floor_{0};
  std::vector<Count> cells_;
};

// The three two-way margins: jk sums over i, ik over j, ij over k. Each is
// stored row-major.
struct MarginSet {
  Dims dims{};
  std::vector<Count> jk;  // J x K
  std::vector<Count> ik;  // I x K
  std::vector<Count> ij;  // I x J

  Count jk_at(std::size_t j, std::size_t k) const { return jk[j * dims.K + k]; }
  Count ik_at(std::size_t i, std::size_t k) const { return ik[i * dims.K + k]; }
  Count ij_at(std::size_t i, std::size_t j) const { return ij[i * dims.J + j]; }

  // Grand totals of the three blocks agree and the block sizes match dims.
  bool consistent() const;
  bool nonnegative() const;
  bool all_zero() const;

  // jk, ik, ij concatenated: the vector b = A u.
  std::vector<Count> flattened() const;

  // b + t * A * 1: every jk entry grows by t*I, ik by t*J, ij by t*K.
  MarginSet shifted(Count t) const;

  friend bool operator==(const MarginSet&, const MarginSet&) = default;
};

MarginSet compute_margins(const Table3D& table);
MarginSet compute_margins(Dims dims, std::span<const Count> cells);

class FittedTable;

// Pearson statistic sum (o - e)^2 / e. A fitted cell below 1e-12 contributes
// nothing when the observed cell is zero and raises kZeroFittedCell otherwise.
double chi_square(const Table3D& observed, const FittedTable& fitted);
double chi_square(std::span<const Count> observed, std::span<const double> fitted);

inline constexpr double kZeroFittedThreshold = 1e-12;

}  // namespace fibersampler
