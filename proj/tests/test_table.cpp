#include "catch_amalgamated.hpp"

#include "fibersampler/datasets.hpp"
#include "fibersampler/fitted.hpp"
#include "fibersampler/model.hpp"
#include "fibersampler/moves.hpp"
#include "fibersampler/rng.hpp"
#include "fibersampler/table.hpp"

using namespace fibersampler;

namespace {

Table3D one_to_eight() { return Table3D({2, 2, 2}, {1, 2, 3, 4, 5, 6, 7, 8}); }

Table3D random_table(Rng& rng, Dims dims, Count max_cell) {
  std::vector<Count> cells(dims.cells());
  for (auto& c : cells) c = static_cast<Count>(rng.bounded(static_cast<std::uint64_t>(max_cell) + 1));
  return Table3D(dims, std::move(cells));
}

}  // namespace

TEST_CASE("table construction validates length and floor") {
  REQUIRE_THROWS_MATCHES(Table3D({2, 2, 2}, {1, 2, 3}), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == ErrorCode::kDimensionMismatch; }));
  REQUIRE_THROWS_MATCHES(Table3D({1, 1, 2}, {0, -1}), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == ErrorCode::kNegativeCount; }));
  REQUIRE_NOTHROW(Table3D({1, 1, 2}, {0, -1}, RelaxDepth{1}));
  REQUIRE_THROWS_AS(Table3D({1, 1, 2}, {0, -2}, RelaxDepth{1}), Error);

  const Table3D t = one_to_eight();
  CHECK(t.at(1, 0, 1) == 6);
  CHECK(t.total() == 36);
  CHECK(t.min_cell() == 1);
  CHECK(t.is_nonnegative());
}

TEST_CASE("margins of a hand-worked 2x2x2 table") {
  const MarginSet m = compute_margins(one_to_eight());
  CHECK(m.jk == std::vector<Count>{6, 8, 10, 12});
  CHECK(m.ik == std::vector<Count>{4, 6, 12, 14});
  CHECK(m.ij == std::vector<Count>{3, 7, 11, 15});
  CHECK(m.consistent());
  CHECK(m.flattened() == std::vector<Count>{6, 8, 10, 12, 4, 6, 12, 14, 3, 7, 11, 15});

  const MarginSet s = m.shifted(1);
  CHECK(s.jk == std::vector<Count>{8, 10, 12, 14});
  CHECK(s.ij == std::vector<Count>{5, 9, 13, 17});
}

TEST_CASE("navy rank-by-race margin sums over gender") {
  const auto navy = datasets::navy_officer();
  const MarginSet m = compute_margins(navy.table);
  // Adm., White: 192 men + 13 women.
  CHECK(m.ij_at(0, 5) == 205);
  // O-3, Asian: 832 + 323.
  CHECK(m.ij_at(4, 1) == 1155);
  CHECK(navy.table.total() == 54993);
}

TEST_CASE("applying a basic move") {
  const Table3D ones = Table3D::filled({2, 2, 2}, 1);
  const SignedMove up(BasicMove{}, +1);
  const Table3D plus = apply_move(ones, up, RelaxDepth{0});
  CHECK(std::vector<Count>(plus.cells().begin(), plus.cells().end()) ==
        std::vector<Count>{2, 0, 0, 2, 0, 2, 2, 0});
  const Table3D minus = apply_move(ones, up.negated(), RelaxDepth{0});
  CHECK(std::vector<Count>(minus.cells().begin(), minus.cells().end()) ==
        std::vector<Count>{0, 2, 2, 0, 2, 0, 0, 2});

  const Table3D zeros = Table3D::zeros({2, 2, 2});
  CHECK_FALSE(try_apply_move(zeros, up, RelaxDepth{0}).has_value());
  const auto relaxed = try_apply_move(zeros, up, RelaxDepth{1});
  REQUIRE(relaxed.has_value());
  CHECK(relaxed->min_cell() == -1);
  CHECK_THROWS_AS(apply_move(zeros, up, RelaxDepth{0}), FloorViolation);
}

TEST_CASE("moves preserve margins and are invertible") {
  Rng rng(7);
  const std::vector<Dims> shapes = {{2, 2, 2}, {2, 3, 4}, {3, 3, 3}, {4, 2, 3}};
  for (const Dims& dims : shapes) {
    const MoveSet moves = enumerate_basic_moves(dims);
    for (int trial = 0; trial < 200; ++trial) {
      const Table3D u = random_table(rng, dims, 3);
      const BasicMove& m = moves.moves[rng.bounded(moves.size())];
      const int sign = rng.bounded(2) == 0 ? 1 : -1;
      const SignedMove sm(m, sign);
      const auto v = try_apply_move(u, sm, RelaxDepth{1});
      REQUIRE(v.has_value());  // cells start >= 0 and move by 1
      CHECK(compute_margins(*v) == compute_margins(u));
      const auto back = try_apply_move(*v, sm.negated(), RelaxDepth{1});
      REQUIRE(back.has_value());
      CHECK(*back == u);
    }
  }
}

TEST_CASE("chi-square is non-negative and zero at the fit") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Table3D raw = random_table(rng, {3, 2, 4}, 8);
    std::vector<Count> shifted(raw.cells().begin(), raw.cells().end());
    for (auto& x : shifted) ++x;
    const Table3D u(raw.dims(), shifted);
    const FittedTable fit = ipfp_fit(u);
    CHECK(chi_square(u, fit) >= 0.0);
    std::vector<double> exact(u.cells().begin(), u.cells().end());
    CHECK(chi_square(u, FittedTable(u.dims(), exact)) == 0.0);
  }
}

TEST_CASE("chi-square zero fitted cells") {
  const std::vector<Count> obs = {0, 2};
  CHECK(chi_square(obs, std::vector<double>{0.0, 2.0}) == 0.0);
  CHECK_THROWS_MATCHES(chi_square(std::vector<Count>{1, 2}, std::vector<double>{0.0, 2.0}),
                       Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::kZeroFittedCell;
                       }));
  // (3-2)^2/2 + (1-2)^2/2
  CHECK(chi_square(std::vector<Count>{3, 1}, std::vector<double>{2.0, 2.0}) ==
        Catch::Approx(1.0));
}
