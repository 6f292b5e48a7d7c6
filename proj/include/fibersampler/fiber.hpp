#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fibersampler/moves.hpp"
#include "fibersampler/table.hpp"

namespace fibersampler {

inline constexpr std::size_t kDefaultFiberCap = 5'000'000;

// Every integer table with the given margins and all cells >= -floor.t,
// stored as one flat arena in lexicographic order of the cell arrays.
class Fiber {
 public:
  Fiber(MarginSet margins, RelaxDepth floor, std::vector<std::int32_t> arena);

  const MarginSet& margins() const { return margins_; }
  const Dims& dims() const { return margins_.dims; }
  RelaxDepth floor() const { return floor_; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  std::span<const std::int32_t> cells(std::size_t index) const {
    return {arena_.data() + index * stride_, stride_};
  }
  Table3D table(std::size_t index) const;
  bool is_nonnegative(std::size_t index) const;

  // Position of a table in the fiber, by binary search.
  std::optional<std::size_t> find(std::span<const std::int32_t> cells) const;
  std::optional<std::size_t> find(const Table3D& table) const;

 private:
  MarginSet margins_;
  RelaxDepth floor_;
  std::size_t stride_;
  std::size_t size_;
  std::vector<std::int32_t> arena_;
};

struct EnumerateOptions {
  std::size_t cap = kDefaultFiberCap;
};

// Depth-first cell assignment, i outermost and k innermost, pruned by the
// remaining line sums. Throws kInfeasibleMargins when no table exists and
// FiberTooLarge (with the partial count) when the cap is hit.
Fiber enumerate_fiber(const MarginSet& margins, RelaxDepth floor,
                      EnumerateOptions options = {});

struct FiberEdge {
  std::size_t from;
  std::size_t to;          // cells(to) == cells(from) + dense(move)
  std::size_t move_index;  // into the MoveSet
};

struct FiberGraph {
  std::size_t vertices = 0;
  std::vector<FiberEdge> edges;  // one entry per undirected edge
};

FiberGraph build_fiber_graph(const Fiber& fiber, const MoveSet& moves);

// Components of the fiber graph under +-moves, largest first; ties are
// ordered by smallest member. Members are sorted fiber indices.
std::vector<std::vector<std::size_t>> connected_components(const Fiber& fiber,
                                                           const MoveSet& moves);

struct ConnectivityReport {
  std::size_t fiber_size = 0;          // non-negative tables
  std::size_t relaxed_fiber_size = 0;  // tables with cells >= -t
  std::size_t components = 0;          // of the relaxed fiber graph
  std::size_t nonneg_components = 0;   // components holding a non-negative table
  bool nonneg_connected = false;
  std::optional<std::pair<Table3D, Table3D>> witness;
};

ConnectivityReport verify_relaxed_connectivity(const MarginSet& margins,
                                               const MoveSet& moves, RelaxDepth t,
                                               EnumerateOptions options = {});

struct ExactDistribution {
  std::vector<std::size_t> members;   // fiber indices of non-negative tables
  std::vector<double> chi_square;     // per member
  std::vector<double> probability;    // per member, sums to 1
  double observed_chi_square = 0.0;
  double p_value = 0.0;               // P(chi2 >= observed)
};

// Conditional law prod 1/u! over the non-negative members of the fiber, with
// chi-square against the IPFP fit of the fiber's margins. Cells that are zero
// in every member are held at zero in the fit. The observed table
// must share the fiber's margins.
ExactDistribution exact_conditional_distribution(const Fiber& fiber,
                                                 const Table3D& observed);

}  // namespace fibersampler
