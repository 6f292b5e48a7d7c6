#include "fibersampler/datasets.hpp"

namespace fibersampler::datasets {

namespace {

using Rows = std::vector<std::vector<Count>>;  // race x rank, as printed

// Rows are race, columns rank.
const Rows kMaleOfficer = {
    {1, 9, 29, 92, 154, 64, 66, 7, 14, 15},
    {2, 96, 225, 417, 832, 347, 349, 12, 51, 34},
    {6, 167, 357, 551, 1006, 329, 396, 81, 148, 142},
    {2, 107, 263, 280, 413, 127, 118, 14, 38, 50},
    {2, 36, 123, 242, 853, 311, 342, 13, 19, 14},
    {192, 2452, 4752, 6517, 11635, 4038, 4038, 222, 413, 371},
};

const Rows kMaleEnlisted = {
    {44, 210, 777, 1863, 1142, 379, 254, 110, 56},
    {129, 466, 1257, 2720, 3405, 2229, 2051, 693, 452},
    {409, 994, 3151, 7514, 9963, 6533, 5968, 2820, 2036},
    {93, 308, 798, 1387, 2593, 3087, 1922, 333, 30},
    {48, 162, 942, 4679, 5004, 2189, 1279, 476, 348},
    {1809, 4242, 11591, 26435, 34716, 25716, 20871, 9140, 6502},
};

const Rows kFemaleOfficer = {
    {0, 2, 11, 12, 45, 27, 32, 0, 0, 0},
    {1, 28, 56, 136, 323, 129, 126, 0, 3, 4},
    {0, 50, 103, 226, 466, 143, 141, 13, 29, 38},
    {1, 14, 39, 81, 215, 55, 45, 0, 8, 6},
    {0, 5, 33, 87, 327, 130, 144, 1, 3, 1},
    {13, 294, 677, 1447, 2955, 1089, 1117, 12, 21, 33},
};

// Af. Am. E-7 reads 3,151 here as in the male table; kept as printed.
const Rows kFemaleEnlisted = {
    {6, 24, 114, 294, 314, 173, 124, 53, 23},
    {14, 71, 214, 545, 863, 652, 677, 198, 129},
    {88, 915, 3151, 2509, 4453, 3039, 2983, 1050, 894},
    {13, 50, 157, 297, 779, 920, 714, 132, 5},
    {5, 24, 181, 975, 1536, 757, 544, 165, 122},
    {120, 324, 1267, 3536, 7555, 6669, 5914, 2308, 1748},
};

const std::vector<std::string> kRaces = {"Nat. Am.", "Asian",      "Af. Am.",
                                         "Pac. Isl.", "Multi-Race", "White"};
const std::vector<std::string> kOfficerRanks = {"Adm.", "O-6", "O-5", "O-4", "O-3",
                                                "O-2",  "O-1", "W-4", "W-3", "W-2"};
const std::vector<std::string> kEnlistedRanks = {"E-9", "E-8", "E-7", "E-6", "E-5",
                                                 "E-4", "E-3", "E-2", "E-1"};

// Stacks (male, female) blocks of race x rank into a rank x race x gender table.
Dataset build(const std::string& name, const std::vector<const Rows*>& male,
              const std::vector<const Rows*>& female, std::vector<std::string> ranks) {
  const std::size_t races = kRaces.size();
  std::size_t rank_count = 0;
  for (const Rows* block : male) rank_count += block->front().size();
  const Dims dims{rank_count, races, 2};
  std::vector<Count> cells(dims.cells(), 0);
  for (std::size_t gender = 0; gender < 2; ++gender) {
    const auto& blocks = gender == 0 ? male : female;
    std::size_t rank_base = 0;
    for (const Rows* block : blocks) {
      for (std::size_t race = 0; race < races; ++race) {
        for (std::size_t r = 0; r < (*block)[race].size(); ++r) {
          cells[dims.index(rank_base + r, race, gender)] = (*block)[race][r];
        }
      }
      rank_base += block->front().size();
    }
  }
  Dataset out;
  out.name = name;
  out.table = Table3D(dims, std::move(cells));
  out.axis_names = {"rank", "race", "gender"};
  out.labels = {std::move(ranks), kRaces, {"Male", "Female"}};
  out.validate();
  return out;
}

}  // namespace

Dataset navy_officer() {
  return build("navy_officer_10x6x2", {&kMaleOfficer}, {&kFemaleOfficer}, kOfficerRanks);
}

Dataset navy_full() {
  std::vector<std::string> ranks = kOfficerRanks;
  ranks.insert(ranks.end(), kEnlistedRanks.begin(), kEnlistedRanks.end());
  return build("navy_full_19x6x2", {&kMaleOfficer, &kMaleEnlisted},
               {&kFemaleOfficer, &kFemaleEnlisted}, std::move(ranks));
}

Dataset isolated_3x3x3() {
  Dataset out;
  out.name = "isolated_3x3x3";
  out.table = fixtures::isolated_3x3x3();
  return out;
}

std::vector<std::string> names() {
  return {"navy_officer_10x6x2", "navy_full_19x6x2", "isolated_3x3x3"};
}

std::optional<Dataset> find(const std::string& name) {
  if (name == "navy_officer_10x6x2") return navy_officer();
  if (name == "navy_full_19x6x2") return navy_full();
  if (name == "isolated_3x3x3") return isolated_3x3x3();
  return std::nullopt;
}

}  // namespace fibersampler::datasets
