#include "fibersampler/fiber.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "fibersampler/fitted.hpp"
#include "fibersampler/log_factorial.hpp"
#include "fibersampler/model.hpp"

namespace fibersampler {

Fiber::Fiber(MarginSet margins, RelaxDepth floor, std::vector<std::int32_t> arena)
    : margins_(std::move(margins)),
      floor_(floor),
      stride_(margins_.dims.cells()),
      size_(stride_ == 0 ? 0 : arena.size() / stride_),
      arena_(std::move(arena)) {}

Table3D Fiber::table(std::size_t index) const {
  const auto c = cells(index);
  return Table3D(dims(), std::vector<Count>(c.begin(), c.end()), floor_);
}

bool Fiber::is_nonnegative(std::size_t index) const {
  const auto c = cells(index);
  return std::all_of(c.begin(), c.end(), [](std::int32_t v) { return v >= 0; });
}

std::optional<std::size_t> Fiber::find(std::span<const std::int32_t> key) const {
  std::size_t lo = 0, hi = size_;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    const auto row = cells(mid);
    const auto cmp = std::lexicographical_compare_three_way(row.begin(), row.end(),
                                                            key.begin(), key.end());
    if (cmp < 0) {
      lo = mid + 1;
    } else if (cmp > 0) {
      hi = mid;
    } else {
      return mid;
    }
  }
  return std::nullopt;
}

std::optional<std::size_t> Fiber::find(const Table3D& table) const {
  if (!(table.dims() == dims())) return std::nullopt;
  std::vector<std::int32_t> key(table.size());
  for (std::size_t c = 0; c < key.size(); ++c) {
    if (table[c] < std::numeric_limits<std::int32_t>::min() ||
        table[c] > std::numeric_limits<std::int32_t>::max()) {
      return std::nullopt;
    }
    key[c] = static_cast<std::int32_t>(table[c]);
  }
  return find(key);
}

namespace {

// Non-negative tables with fixed margins, written out shifted by `offset`.
class Enumerator {
 public:
  Enumerator(const MarginSet& target, std::int32_t offset, std::size_t cap)
      : d_(target.dims),
        rem_jk_(target.jk),
        rem_ik_(target.ik),
        rem_ij_(target.ij),
        cells_(d_.cells(), 0),
        offset_(offset),
        cap_(cap) {}

  std::vector<std::int32_t> run() {
    descend(0);
    return std::move(arena_);
  }

  std::size_t count() const { return count_; }

 private:
  void descend(std::size_t flat) {
    if (flat == cells_.size()) {
      if (count_ == cap_) {
        std::ostringstream msg;
        msg << "fiber exceeds the cap of " << cap_ << " tables";
        throw FiberTooLarge(msg.str(), count_);
      }
      for (Count v : cells_) arena_.push_back(static_cast<std::int32_t>(v) - offset_);
      ++count_;
      return;
    }
    const std::size_t k = flat % d_.K;
    const std::size_t j = (flat / d_.K) % d_.J;
    const std::size_t i = flat / (d_.J * d_.K);
    Count& jk = rem_jk_[j * d_.K + k];
    Count& ik = rem_ik_[i * d_.K + k];
    Count& ij = rem_ij_[i * d_.J + j];

    const Count hi = std::min({jk, ik, ij});
    // What the rest of each line through this cell can still absorb.
    Count along_k = 0;
    for (std::size_t k2 = k + 1; k2 < d_.K; ++k2) {
      along_k += std::min(rem_jk_[j * d_.K + k2], rem_ik_[i * d_.K + k2]);
    }
    Count along_j = 0;
    for (std::size_t j2 = j + 1; j2 < d_.J; ++j2) {
      along_j += std::min(rem_jk_[j2 * d_.K + k], rem_ij_[i * d_.J + j2]);
    }
    Count along_i = 0;
    for (std::size_t i2 = i + 1; i2 < d_.I; ++i2) {
      along_i += std::min(rem_ik_[i2 * d_.K + k], rem_ij_[i2 * d_.J + j]);
    }
    const Count lo = std::max({Count{0}, ij - along_k, ik - along_j, jk - along_i});

    for (Count v = lo; v <= hi; ++v) {
      cells_[flat] = v;
      jk -= v;
      ik -= v;
      ij -= v;
      descend(flat + 1);
      jk += v;
      ik += v;
      ij += v;
    }
    cells_[flat] = 0;
  }

  Dims d_;
  std::vector<Count> rem_jk_, rem_ik_, rem_ij_;
  std::vector<Count> cells_;
  std::int32_t offset_;
  std::size_t cap_;
  std::size_t count_ = 0;
  std::vector<std::int32_t> arena_;
};

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::uint8_t> rank_;
};

// Calls visit(from, to, move_index) for every u -> u + move inside the fiber.
template <typename Visit>
void for_each_edge(const Fiber& fiber, const MoveSet& moves, Visit&& visit) {
  if (!(moves.dims == fiber.dims())) {
    throw Error(ErrorCode::kDimensionMismatch, "move set dims differ from fiber dims");
  }
  const std::int32_t lowest = static_cast<std::int32_t>(fiber.floor().floor_value());
  std::vector<std::array<std::size_t, 8>> touched;
  touched.reserve(moves.size());
  for (const auto& m : moves.moves) touched.push_back(m.flat_indices(fiber.dims()));

  std::vector<std::int32_t> scratch(fiber.dims().cells());
  for (std::size_t u = 0; u < fiber.size(); ++u) {
    const auto row = fiber.cells(u);
    std::copy(row.begin(), row.end(), scratch.begin());
    for (std::size_t m = 0; m < touched.size(); ++m) {
      const auto& idx = touched[m];
      bool inside = true;
      for (std::size_t c = 0; c < 8; ++c) {
        if (scratch[idx[c]] + BasicMove::kSigns[c] < lowest) {
          inside = false;
          break;
        }
      }
      if (!inside) continue;
      for (std::size_t c = 0; c < 8; ++c) scratch[idx[c]] += BasicMove::kSigns[c];
      const auto v = fiber.find(scratch);
      for (std::size_t c = 0; c < 8; ++c) scratch[idx[c]] -= BasicMove::kSigns[c];
      // Margins are preserved, so a floor-respecting neighbour is always a
      // member; a miss means the fiber is incomplete.
      if (!v) throw Error(ErrorCode::kInvalidArgument, "fiber is missing a neighbour");
      visit(u, *v, m);
    }
  }
}

}  // namespace

Fiber enumerate_fiber(const MarginSet& margins, RelaxDepth floor, EnumerateOptions options) {
  if (floor.t < 0) throw Error(ErrorCode::kInvalidArgument, "relaxation depth must be >= 0");
  if (!margins.consistent()) {
    throw Error(ErrorCode::kInfeasibleMargins, "margin grand totals disagree");
  }
  const MarginSet shifted = margins.shifted(floor.t);
  if (!shifted.nonnegative()) {
    throw Error(ErrorCode::kInfeasibleMargins, "margins are below the relaxed minimum");
  }
  const Count biggest = std::max(
      {*std::max_element(shifted.jk.begin(), shifted.jk.end()),
       *std::max_element(shifted.ik.begin(), shifted.ik.end()),
       *std::max_element(shifted.ij.begin(), shifted.ij.end())});
  if (biggest > std::numeric_limits<std::int32_t>::max()) {
    throw Error(ErrorCode::kInvalidArgument, "margins too large for fiber enumeration");
  }
  Enumerator e(shifted, static_cast<std::int32_t>(floor.t), options.cap);
  auto arena = e.run();
  if (e.count() == 0) {
    throw Error(ErrorCode::kInfeasibleMargins, "no table has these margins");
  }
  return Fiber(margins, floor, std::move(arena));
}

FiberGraph build_fiber_graph(const Fiber& fiber, const MoveSet& moves) {
  FiberGraph g;
  g.vertices = fiber.size();
  for_each_edge(fiber, moves, [&](std::size_t u, std::size_t v, std::size_t m) {
    g.edges.push_back(FiberEdge{u, v, m});
  });
  return g;
}

std::vector<std::vector<std::size_t>> connected_components(const Fiber& fiber,
                                                           const MoveSet& moves) {
  DisjointSets sets(fiber.size());
  for_each_edge(fiber, moves,
                [&](std::size_t u, std::size_t v, std::size_t) { sets.unite(u, v); });

  std::vector<std::size_t> slot(fiber.size(), std::numeric_limits<std::size_t>::max());
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t u = 0; u < fiber.size(); ++u) {
    const std::size_t root = sets.find(u);
    if (slot[root] == std::numeric_limits<std::size_t>::max()) {
      slot[root] = out.size();
      out.emplace_back();
    }
    out[slot[root]].push_back(u);
  }
  // Members are pushed in increasing order, so front() is the smallest.
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });
  return out;
}

ConnectivityReport verify_relaxed_connectivity(const MarginSet& margins,
                                               const MoveSet& moves, RelaxDepth t,
                                               EnumerateOptions options) {
  const Fiber fiber = enumerate_fiber(margins, t, options);
  const auto components = connected_components(fiber, moves);

  ConnectivityReport report;
  report.relaxed_fiber_size = fiber.size();
  report.components = components.size();
  std::optional<std::size_t> first_nonneg;
  for (const auto& comp : components) {
    const auto hit = std::find_if(comp.begin(), comp.end(),
                                  [&](std::size_t u) { return fiber.is_nonnegative(u); });
    if (hit == comp.end()) continue;
    ++report.nonneg_components;
    report.fiber_size += static_cast<std::size_t>(std::count_if(
        comp.begin(), comp.end(), [&](std::size_t u) { return fiber.is_nonnegative(u); }));
    if (!first_nonneg) {
      first_nonneg = *hit;
    } else if (!report.witness) {
      report.witness = std::make_pair(fiber.table(*first_nonneg).with_floor(RelaxDepth{0}),
                                      fiber.table(*hit).with_floor(RelaxDepth{0}));
    }
  }
  report.nonneg_connected = report.nonneg_components <= 1;
  return report;
}

ExactDistribution exact_conditional_distribution(const Fiber& fiber,
                                                 const Table3D& observed) {
  if (!(compute_margins(observed) == fiber.margins())) {
    throw Error(ErrorCode::kInvalidArgument, "observed table is not in this fiber");
  }
  ExactDistribution out;
  const Count grand = observed.total();
  const LogFactorial log_fact(static_cast<std::size_t>(std::max<Count>(grand, 1)));
  std::vector<double> log_w;
  IpfpOptions fit_options;
  fit_options.support.assign(fiber.dims().cells(), false);
  for (std::size_t u = 0; u < fiber.size(); ++u) {
    if (!fiber.is_nonnegative(u)) continue;
    const auto row = fiber.cells(u);
    double lw = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c) {
      lw -= log_fact(row[c]);
      if (row[c] > 0) fit_options.support[c] = true;
    }
    out.members.push_back(u);
    log_w.push_back(lw);
  }
  if (out.members.empty()) {
    throw Error(ErrorCode::kInfeasibleMargins, "fiber has no non-negative table");
  }

  const FittedTable fitted = ipfp_fit(fiber.margins(), fit_options);
  out.observed_chi_square = chi_square(observed, fitted);
  std::vector<Count> buffer(fiber.dims().cells());
  for (std::size_t u : out.members) {
    const auto row = fiber.cells(u);
    std::copy(row.begin(), row.end(), buffer.begin());
    out.chi_square.push_back(chi_square(buffer, fitted.cells()));
  }
  const double top = *std::max_element(log_w.begin(), log_w.end());
  double norm = 0.0;
  out.probability.resize(log_w.size());
  for (std::size_t x = 0; x < log_w.size(); ++x) {
    out.probability[x] = std::exp(log_w[x] - top);
    norm += out.probability[x];
  }
  double tail = 0.0;
  for (std::size_t x = 0; x < log_w.size(); ++x) {
    out.probability[x] /= norm;
    if (chi_square_at_least(out.chi_square[x], out.observed_chi_square)) {
      tail += out.probability[x];
    }
  }
  out.p_value = std::min(1.0, tail);
  return out;
}

}  // namespace fibersampler
