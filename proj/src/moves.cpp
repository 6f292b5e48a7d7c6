#include "fibersampler/moves.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace fibersampler {

namespace {

std::size_t choose2(std::size_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

void require_fit(const BasicMove& m, const Dims& dims) {
  if (!m.fits(dims)) {
    throw Error(ErrorCode::kInvalidArgument,
                "move " + m.to_string() + " does not fit the table dimensions");
  }
}

}  // namespace

BasicMove BasicMove::canonical(std::size_t i, std::size_t i2, std::size_t j,
                               std::size_t j2, std::size_t k, std::size_t k2) {
  if (!(i < i2 && j < j2 && k < k2)) {
    throw Error(ErrorCode::kInvalidArgument,
                "basic move indices must be strictly increasing per axis");
  }
  return BasicMove{i, i2, j, j2, k, k2};
}

std::array<std::size_t, 8> BasicMove::flat_indices(const Dims& dims) const {
  return {dims.index(i, j, k),   dims.index(i, j, k2),  dims.index(i, j2, k),
          dims.index(i, j2, k2), dims.index(i2, j, k),  dims.index(i2, j, k2),
          dims.index(i2, j2, k), dims.index(i2, j2, k2)};
}

Table3D BasicMove::dense(const Dims& dims) const {
  require_fit(*this, dims);
  std::vector<Count> cells(dims.cells(), 0);
  const auto idx = flat_indices(dims);
  for (std::size_t c = 0; c < 8; ++c) cells[idx[c]] = kSigns[c];
  return Table3D(dims, std::move(cells), RelaxDepth{1});
}

std::string BasicMove::to_string() const {
  std::ostringstream out;
  out << '(' << i + 1 << ',' << i2 + 1 << ';' << j + 1 << ',' << j2 + 1 << ';'
      << k + 1 << ',' << k2 + 1 << ')';
  return out.str();
}

SignedMove::SignedMove(BasicMove m, int s) : move(m), sign(s) {
  if (s != 1 && s != -1) throw Error(ErrorCode::kInvalidArgument, "sign must be +1 or -1");
}

SignedMove::SignedMove(GeneralMove m, int s) : move(std::move(m)), sign(s) {
  if (s != 1 && s != -1) throw Error(ErrorCode::kInvalidArgument, "sign must be +1 or -1");
}

SignedMove SignedMove::from_one_based(std::size_t i, std::size_t i2, std::size_t j,
                                      std::size_t j2, std::size_t k, std::size_t k2,
                                      int sign) {
  if (i == 0 || i2 == 0 || j == 0 || j2 == 0 || k == 0 || k2 == 0) {
    throw Error(ErrorCode::kInvalidArgument, "move indices are 1-based");
  }
  if (i == i2 || j == j2 || k == k2) {
    throw Error(ErrorCode::kInvalidArgument, "move indices must differ per axis");
  }
  if (i > i2) { std::swap(i, i2); sign = -sign; }
  if (j > j2) { std::swap(j, j2); sign = -sign; }
  if (k > k2) { std::swap(k, k2); sign = -sign; }
  return SignedMove(BasicMove::canonical(i - 1, i2 - 1, j - 1, j2 - 1, k - 1, k2 - 1),
                    sign);
}

SignedMove SignedMove::negated() const {
  SignedMove out = *this;
  out.sign = -sign;
  return out;
}

Table3D SignedMove::dense(const Dims& dims) const {
  Table3D base = std::visit(
      [&](const auto& m) -> Table3D {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, BasicMove>) {
          return m.dense(dims);
        } else {
          if (!(m.dims() == dims)) {
            throw Error(ErrorCode::kDimensionMismatch, "general move dims differ");
          }
          return m.delta();
        }
      },
      move);
  if (sign == 1) return base;
  return Table3D::zeros(dims).minus(base);
}

std::size_t basic_move_count(const Dims& dims) {
  return choose2(dims.I) * choose2(dims.J) * choose2(dims.K);
}

MoveSet enumerate_basic_moves(const Dims& dims) {
  if (dims.I < 2 || dims.J < 2 || dims.K < 2) {
    std::ostringstream msg;
    msg << "basic moves need every axis >= 2, got " << dims.I << "x" << dims.J << "x"
        << dims.K;
    throw Error(ErrorCode::kDimensionTooSmall, msg.str());
  }
  MoveSet set;
  set.dims = dims;
  set.moves.reserve(basic_move_count(dims));
  for (std::size_t i = 0; i < dims.I; ++i)
    for (std::size_t i2 = i + 1; i2 < dims.I; ++i2)
      for (std::size_t j = 0; j < dims.J; ++j)
        for (std::size_t j2 = j + 1; j2 < dims.J; ++j2)
          for (std::size_t k = 0; k < dims.K; ++k)
            for (std::size_t k2 = k + 1; k2 < dims.K; ++k2)
              set.moves.push_back(BasicMove{i, i2, j, j2, k, k2});
  return set;
}

std::optional<Table3D> try_apply_move(const Table3D& table, const SignedMove& move,
                                      RelaxDepth floor) {
  const Dims& dims = table.dims();
  std::vector<Count> cells(table.cells().begin(), table.cells().end());
  const Count lowest = floor.floor_value();
  if (const auto* basic = std::get_if<BasicMove>(&move.move)) {
    require_fit(*basic, dims);
    const auto idx = basic->flat_indices(dims);
    for (std::size_t c = 0; c < 8; ++c) {
      cells[idx[c]] += move.sign * BasicMove::kSigns[c];
      if (cells[idx[c]] < lowest) return std::nullopt;
    }
  } else {
    const auto& general = std::get<GeneralMove>(move.move);
    if (!(general.dims() == dims)) {
      throw Error(ErrorCode::kDimensionMismatch, "general move dims differ");
    }
    const auto delta = general.delta().cells();
    for (std::size_t c = 0; c < cells.size(); ++c) {
      cells[c] += move.sign * delta[c];
      if (cells[c] < lowest) return std::nullopt;
    }
  }
  return Table3D(dims, std::move(cells), floor);
}

Table3D apply_move(const Table3D& table, const SignedMove& move, RelaxDepth floor) {
  auto out = try_apply_move(table, move, floor);
  if (!out) {
    std::ostringstream msg;
    msg << "move takes a cell below " << floor.floor_value();
    throw FloorViolation(msg.str(), FloorViolation::npos);
  }
  return std::move(*out);
}

bool kernel_check(const GeneralMove& move) {
  return compute_margins(move.delta()).all_zero();
}

ReplayReport replay_decomposition(const Decomposition& d) {
  if (!(d.start.dims() == d.expected_end.dims())) {
    throw Error(ErrorCode::kDimensionMismatch, "decomposition endpoints differ in dims");
  }
  if (!(compute_margins(d.start) == compute_margins(d.expected_end))) {
    throw Error(ErrorCode::kInvalidArgument, "decomposition endpoints differ in margins");
  }
  if (d.start.min_cell() < d.floor.floor_value()) {
    throw FloorViolation("start table is below the floor", 0);
  }

  ReplayReport report;
  std::set<std::size_t> went_negative;
  auto note = [&](const Table3D& t) {
    for (std::size_t c = 0; c < t.size(); ++c) {
      if (t[c] < 0) went_negative.insert(c);
    }
  };

  Table3D current = d.start.with_floor(d.floor);
  report.min_cell = current.min_cell();
  note(current);
  for (std::size_t s = 0; s < d.steps.size(); ++s) {
    auto next = try_apply_move(current, d.steps[s], d.floor);
    if (!next) {
      std::ostringstream msg;
      msg << "step " << s << " takes a cell below " << d.floor.floor_value();
      throw FloorViolation(msg.str(), s);
    }
    current = std::move(*next);
    report.step_minima.push_back(current.min_cell());
    report.min_cell = std::min(report.min_cell, current.min_cell());
    note(current);
  }
  report.negative_cells = went_negative.size();
  if (!(current == d.expected_end)) {
    std::ostringstream msg;
    msg << "replay ends off target; diff (end - expected) at cells:";
    for (std::size_t c = 0; c < current.size(); ++c) {
      if (current[c] != d.expected_end[c]) msg << ' ' << c << ':' << current[c] - d.expected_end[c];
    }
    throw Error(ErrorCode::kEndMismatch, msg.str());
  }
  report.end = std::move(current);
  report.success = true;
  return report;
}

namespace fixtures {

namespace {

constexpr Dims k346{3, 4, 6};

Table3D make346(std::vector<Count> cells) { return Table3D(k346, std::move(cells)); }

SignedMove step(int sign, std::size_t i, std::size_t i2, std::size_t j, std::size_t j2,
                std::size_t k, std::size_t k2) {
  return SignedMove::from_one_based(i, i2, j, j2, k, k2, sign);
}

}  // namespace

// Each block is one level of the first axis; rows run over the second axis
// and columns over the third.
Table3D b1_plus() {
  return make346({
      1, 0, 0, 0, 0, 0,  0, 1, 0, 0, 0, 0,  0, 0, 1, 0, 0, 0,  0, 0, 0, 0, 0, 1,
      0, 1, 0, 0, 0, 0,  0, 0, 0, 0, 1, 0,  0, 0, 0, 1, 0, 0,  0, 0, 0, 0, 0, 1,
      0, 0, 0, 1, 0, 0,  0, 0, 1, 0, 0, 0,  0, 0, 0, 0, 0, 2,  1, 0, 0, 0, 1, 0,
  });
}

Table3D b1_minus() {
  return make346({
      0, 1, 0, 0, 0, 0,  0, 0, 1, 0, 0, 0,  0, 0, 0, 0, 0, 1,  1, 0, 0, 0, 0, 0,
      0, 0, 0, 1, 0, 0,  0, 1, 0, 0, 0, 0,  0, 0, 0, 0, 0, 1,  0, 0, 0, 0, 1, 0,
      1, 0, 0, 0, 0, 0,  0, 0, 0, 0, 1, 0,  0, 0, 1, 1, 0, 0,  0, 0, 0, 0, 0, 2,
  });
}

Table3D b2_plus() {
  return make346({
      1, 0, 0, 0, 0, 0,  0, 1, 0, 0, 0, 0,  0, 0, 1, 0, 0, 0,  0, 0, 0, 1, 0, 0,
      0, 0, 0, 0, 0, 1,  0, 0, 1, 0, 0, 0,  0, 0, 0, 0, 0, 1,  1, 0, 0, 0, 1, 0,
      0, 1, 0, 0, 0, 0,  0, 0, 0, 0, 1, 0,  0, 0, 0, 1, 0, 0,  0, 0, 0, 0, 0, 2,
  });
}

Table3D b2_minus() {
  return make346({
      0, 1, 0, 0, 0, 0,  0, 0, 1, 0, 0, 0,  0, 0, 0, 1, 0, 0,  1, 0, 0, 0, 0, 0,
      1, 0, 0, 0, 0, 0,  0, 0, 0, 0, 1, 0,  0, 0, 1, 0, 0, 0,  0, 0, 0, 0, 0, 2,
      0, 0, 0, 0, 0, 1,  0, 1, 0, 0, 0, 0,  0, 0, 0, 0, 0, 1,  0, 0, 0, 1, 1, 0,
  });
}

Decomposition b1_decomposition(RelaxDepth floor) {
  return Decomposition{
      b1_plus(),
      {step(-1, 2, 3, 3, 4, 5, 6), step(-1, 1, 3, 3, 4, 1, 6), step(+1, 2, 3, 2, 3, 3, 5),
       step(-1, 2, 3, 1, 3, 1, 4), step(-1, 1, 2, 2, 3, 2, 3), step(-1, 1, 2, 1, 3, 1, 2)},
      b1_minus(),
      floor};
}

Decomposition b2_decomposition(RelaxDepth floor) {
  return Decomposition{
      b2_plus(),
      {step(+1, 2, 3, 2, 4, 5, 6), step(+1, 2, 3, 3, 4, 4, 6), step(+1, 2, 3, 1, 2, 2, 6),
       step(-1, 1, 2, 3, 4, 1, 4), step(-1, 1, 2, 1, 3, 1, 3), step(+1, 1, 2, 1, 2, 2, 3)},
      b2_minus(),
      floor};
}

Table3D isolated_3x3x3() {
  return Table3D(Dims{3, 3, 3}, {
                                    3, 0, 0,  0, 3, 0,  0, 0, 3,
                                    0, 3, 0,  0, 0, 3,  3, 0, 0,
                                    0, 0, 3,  3, 0, 0,  0, 3, 0,
                                });
}

}  // namespace fixtures

}  // namespace fibersampler
