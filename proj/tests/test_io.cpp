#include "catch_amalgamated.hpp"

#include "fibersampler/datasets.hpp"
#include "fibersampler/io.hpp"

using namespace fibersampler;

namespace {

const std::filesystem::path kData = FIBERSAMPLER_DATA_DIR;

auto has_code(ErrorCode code) {
  return Catch::Matchers::Predicate<Error>([code](const Error& e) { return e.code() == code; });
}

}  // namespace

TEST_CASE("bundled datasets") {
  const auto officer = datasets::navy_officer();
  CHECK(officer.table.dims() == Dims{10, 6, 2});
  CHECK(officer.table.total() == 54993);
  CHECK(officer.table.at(0, 5, 0) == 192);  // Adm., White, Male
  CHECK(officer.labels[0][4] == "O-3");

  const auto full = datasets::navy_full();
  CHECK(full.table.dims() == Dims{19, 6, 2});
  CHECK(full.table.total() == 339705);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      for (std::size_t k = 0; k < 2; ++k) CHECK(full.table.at(i, j, k) == officer.table.at(i, j, k));

  CHECK(table_checksum(officer.table) == 0x50886cbae6534cf3ULL);
  CHECK(table_checksum(full.table) == 0x9dcd3d9fb0df3357ULL);
  CHECK_FALSE(datasets::find("nope").has_value());
  for (const auto& name : datasets::names()) CHECK(datasets::find(name)->name == name);
}

TEST_CASE("data files match the embedded tables") {
  CHECK(load_table(kData / "navy_officer_10x6x2.json").table == datasets::navy_officer().table);
  CHECK(load_table(kData / "navy_officer_10x6x2.csv").table == datasets::navy_officer().table);
  CHECK(load_table(kData / "navy_full_19x6x2.json").table == datasets::navy_full().table);
  CHECK(load_table(kData / "isolated_3x3x3.json").table == fixtures::isolated_3x3x3());

  const Decomposition b1 = load_decomposition(kData / "b1_decomposition.json");
  CHECK(b1.start == fixtures::b1_plus());
  CHECK(b1.expected_end == fixtures::b1_minus());
  CHECK(replay_decomposition(b1).success);
  const Decomposition b2 = load_decomposition(kData / "b2_decomposition.json");
  CHECK(b2.start == fixtures::b2_plus());
  CHECK(replay_decomposition(b2).success);
}

TEST_CASE("JSON round trip") {
  const auto navy = datasets::navy_officer();
  const Dataset back = parse_table_json(table_to_json(navy));
  CHECK(back.table == navy.table);
  CHECK(back.labels == navy.labels);
  CHECK(back.axis_names == navy.axis_names);
  CHECK(back.name == navy.name);

  const Decomposition d = fixtures::b2_decomposition();
  const Decomposition again = parse_decomposition(decomposition_to_json(d));
  CHECK(again.steps.size() == d.steps.size());
  CHECK(decomposition_to_json(again) == decomposition_to_json(d));
}

TEST_CASE("bad JSON tables") {
  CHECK_THROWS_MATCHES(parse_table_json(nlohmann::json{{"dims", {2, 2, 2}}}), Error,
                       has_code(ErrorCode::kParseError));
  CHECK_THROWS_MATCHES(parse_table_json(nlohmann::json{{"dims", {2, 2}}, {"counts", {1, 2, 3, 4}}}),
                       Error, has_code(ErrorCode::kDimensionMismatch));
  CHECK_THROWS_MATCHES(parse_table_json(nlohmann::json{{"dims", {1, 1, 2}}, {"counts", {1, 2, 3}}}),
                       Error, has_code(ErrorCode::kDimensionMismatch));
  CHECK_THROWS_MATCHES(parse_table_json(nlohmann::json{{"dims", {1, 1, 2}}, {"counts", {1, -2}}}),
                       Error, has_code(ErrorCode::kNegativeCount));
  CHECK_THROWS_MATCHES(
      parse_table_json(nlohmann::json{{"dims", {1, 1, 2}}, {"counts", {1, 2}}, {"labels", {{"a"}, {"b"}, {"c"}}}}),
      Error, has_code(ErrorCode::kDimensionMismatch));
  CHECK_THROWS_MATCHES(load_table(kData / "does_not_exist.json"), Error,
                       has_code(ErrorCode::kParseError));
}

TEST_CASE("CSV round trip and errors") {
  const Table3D u({2, 1, 3}, {4, 0, 1, 2, 5, 3});
  const Dataset back = parse_table_csv(table_to_csv(u));
  CHECK(back.table == u);

  CHECK_THROWS_MATCHES(parse_table_csv("i,j,k,count\n1,1,1,3\n1,1,2,4\n", Dims{1, 1, 3}), Error,
                       has_code(ErrorCode::kDimensionMismatch));
  CHECK_THROWS_MATCHES(parse_table_csv("i,j,k,count\n1,1,1,3\n2,1,2,4\n"), Error,
                       has_code(ErrorCode::kDimensionMismatch));
  CHECK_THROWS_MATCHES(parse_table_csv("i,j,k,count\n1,1,1,3\n1,1,1,4\n"), Error,
                       has_code(ErrorCode::kDimensionMismatch));
  CHECK_THROWS_MATCHES(parse_table_csv("a,b,c,d\n1,1,1,3\n"), Error, has_code(ErrorCode::kParseError));
  CHECK_THROWS_MATCHES(parse_table_csv("i,j,k,count\n1,1,x,3\n"), Error, has_code(ErrorCode::kParseError));
  CHECK_THROWS_MATCHES(parse_table_csv("i,j,k,count\n0,1,1,3\n"), Error, has_code(ErrorCode::kParseError));
  CHECK_THROWS_MATCHES(parse_table_csv("i,j,k,count\n1,1,1,-3\n"), Error,
                       has_code(ErrorCode::kNegativeCount));
}
