#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fibersampler/table.hpp"

namespace fibersampler {

// The +-1 pattern on a 2x2x2 minor, written (i,i'; j,j'; k,k').
//
// Indices are 0-based and canonical (i < i2, j < j2, k < k2). The cell
// (a, b, c) of the minor carries s(a) * s(b) * s(c), where s is +1 on the
// first index of each axis and -1 on the second, so (i, j, k) holds +1.
struct BasicMove {
  std::size_t i = 0, i2 = 1;
  std::size_t j = 0, j2 = 1;
  std::size_t k = 0, k2 = 1;

  // Throws kInvalidArgument unless each pair is strictly increasing.
  static BasicMove canonical(std::size_t i, std::size_t i2, std::size_t j,
                             std::size_t j2, std::size_t k, std::size_t k2);

  bool fits(const Dims& dims) const {
    return i2 < dims.I && j2 < dims.J && k2 < dims.K;
  }

  // The eight touched flat indices and their signs, in (a, b, c) order with
  // a over {i, i2}, b over {j, j2}, c over {k, k2}.
  std::array<std::size_t, 8> flat_indices(const Dims& dims) const;
  static constexpr std::array<int, 8> kSigns = {1, -1, -1, 1, -1, 1, 1, -1};

  Table3D dense(const Dims& dims) const;

  // 1-based "(i,i';j,j';k,k')" notation.
  std::string to_string() const;

  friend bool operator==(const BasicMove&, const BasicMove&) = default;
  friend auto operator<=>(const BasicMove&, const BasicMove&) = default;
};

// An arbitrary integer table with all two-way margins zero.
class GeneralMove {
 public:
  // Stores delta as given; use kernel_check to test membership.
  explicit GeneralMove(Table3D delta) : delta_(std::move(delta)) {}

  static GeneralMove from(const BasicMove& move, const Dims& dims) {
    return GeneralMove(move.dense(dims));
  }

  const Table3D& delta() const { return delta_; }
  const Dims& dims() const { return delta_.dims(); }

 private:
  Table3D delta_;
};

struct SignedMove {
  std::variant<BasicMove, GeneralMove> move;
  int sign = 1;

  SignedMove(BasicMove m, int s);
  SignedMove(GeneralMove m, int s);

  // Accepts any index order; a swapped pair flips the sign so the dense
  // expansion is unchanged. Indices are 1-based as printed.
  static SignedMove from_one_based(std::size_t i, std::size_t i2, std::size_t j,
                                   std::size_t j2, std::size_t k, std::size_t k2,
                                   int sign);

  SignedMove negated() const;
  Table3D dense(const Dims& dims) const;
};

struct MoveSet {
  Dims dims{};
  std::vector<BasicMove> moves;

  std::size_t size() const { return moves.size(); }
};

// All C(I,2) C(J,2) C(K,2) basic moves, lexicographic in (i,i2,j,j2,k,k2).
// Throws kDimensionTooSmall if an axis has fewer than two levels.
MoveSet enumerate_basic_moves(const Dims& dims);

std::size_t basic_move_count(const Dims& dims);

// table + sign * move, or nullopt if some cell falls below -floor.t. Throws
// kInvalidArgument if the move does not fit the table.
std::optional<Table3D> try_apply_move(const Table3D& table, const SignedMove& move,
                                      RelaxDepth floor);

// As try_apply_move, throwing FloorViolation instead of returning nullopt.
Table3D apply_move(const Table3D& table, const SignedMove& move, RelaxDepth floor);

// True iff every two-way margin of the delta vanishes.
bool kernel_check(const GeneralMove& move);

struct Decomposition {
  Table3D start;
  std::vector<SignedMove> steps;
  Table3D expected_end;
  RelaxDepth floor{1};
};

struct ReplayReport {
  bool success = false;
  Count min_cell = 0;                  // over start and every intermediate
  std::size_t negative_cells = 0;      // distinct cells that were ever < 0
  std::vector<Count> step_minima;      // min cell after each step
  Table3D end;
};

// Applies the steps in order under the floor. Throws FloorViolation (with
// the step index) or kEndMismatch.
ReplayReport replay_decomposition(const Decomposition& d);

// The two indispensable 3x4x6 moves b1 = b1+ - b1-, b2 = b2+ - b2- and the
// basic-move paths that connect their positive and negative parts when
// cells may reach -1.
namespace fixtures {

Table3D b1_plus();
Table3D b1_minus();
Table3D b2_plus();
Table3D b2_minus();

Decomposition b1_decomposition(RelaxDepth floor = RelaxDepth{1});
Decomposition b2_decomposition(RelaxDepth floor = RelaxDepth{1});

// The 3x3x3 table whose fiber component under basic moves is a single point.
Table3D isolated_3x3x3();

}  // namespace fixtures

}  // namespace fibersampler
