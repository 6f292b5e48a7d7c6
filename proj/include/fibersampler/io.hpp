#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fibersampler/fitted.hpp"
#include "fibersampler/moves.hpp"
#include "fibersampler/table.hpp"

namespace fibersampler {

struct Dataset {
  std::string name;
  Table3D table;
  std::array<std::string, 3> axis_names{"i", "j", "k"};
  std::array<std::vector<std::string>, 3> labels;  // empty, or one per level

  // Throws kDimensionMismatch when a non-empty label list has the wrong length.
  void validate() const;
};

enum class TableFormat { kJson, kCsv };

// Chooses by extension: .csv is CSV, everything else JSON.
TableFormat format_for(const std::filesystem::path& path);

// {"dims":[I,J,K],"counts":[...]} with optional "name", "axes" and "labels".
Dataset parse_table_json(const nlohmann::json& doc, RelaxDepth floor = RelaxDepth{0});
nlohmann::json table_to_json(const Dataset& dataset);
nlohmann::json table_to_json(const Table3D& table);

// Long format with header i,j,k,count and 1-based indices. Dims are the
// largest index seen on each axis unless given; every cell must appear once.
Dataset parse_table_csv(const std::string& text, std::optional<Dims> dims = std::nullopt,
                        RelaxDepth floor = RelaxDepth{0});
std::string table_to_csv(const Table3D& table);
std::string fitted_to_csv(const FittedTable& fitted);

// Throws kParseError for unreadable files or malformed content.
Dataset load_table(const std::filesystem::path& path, std::optional<TableFormat> format = {},
                   RelaxDepth floor = RelaxDepth{0});

// {"start":..,"end":..,"floor":t,"steps":[{"i":..,"i2":..,"j":..,"j2":..,
// "k":..,"k2":..,"sign":+-1}]}, move indices 1-based.
Decomposition parse_decomposition(const nlohmann::json& doc);
nlohmann::json decomposition_to_json(const Decomposition& d);
Decomposition load_decomposition(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

// FNV-1a over dims and counts as little-endian 64-bit words.
std::uint64_t table_checksum(const Table3D& table);

}  // namespace fibersampler
