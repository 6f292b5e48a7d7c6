#include "fibersampler/io.hpp"

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <tuple>

namespace fibersampler {

void Dataset::validate() const {
  const std::array<std::size_t, 3> dims{table.dims().I, table.dims().J, table.dims().K};
  for (std::size_t a = 0; a < 3; ++a) {
    if (!labels[a].empty() && labels[a].size() != dims[a]) {
      std::ostringstream msg;
      msg << "axis " << a << " has " << labels[a].size() << " labels for " << dims[a]
          << " levels";
      throw Error(ErrorCode::kDimensionMismatch, msg.str());
    }
  }
}

TableFormat format_for(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? TableFormat::kCsv : TableFormat::kJson;
}

Dataset parse_table_json(const nlohmann::json& doc, RelaxDepth floor) {
  try {
    if (!doc.is_object() || !doc.contains("dims") || !doc.contains("counts")) {
      throw Error(ErrorCode::kParseError, "table JSON needs \"dims\" and \"counts\"");
    }
    const auto dims_v = doc.at("dims").get<std::vector<long long>>();
    if (dims_v.size() != 3 || dims_v[0] < 1 || dims_v[1] < 1 || dims_v[2] < 1) {
      throw Error(ErrorCode::kDimensionMismatch, "\"dims\" must hold three positive integers");
    }
    const Dims dims{static_cast<std::size_t>(dims_v[0]), static_cast<std::size_t>(dims_v[1]),
                    static_cast<std::size_t>(dims_v[2])};
    auto counts = doc.at("counts").get<std::vector<Count>>();

    Dataset out;
    out.name = doc.value("name", std::string{});
    out.table = Table3D(dims, std::move(counts), floor);
    if (doc.contains("axes")) {
      const auto axes = doc.at("axes").get<std::vector<std::string>>();
      if (axes.size() != 3) throw Error(ErrorCode::kDimensionMismatch, "\"axes\" needs 3 names");
      std::copy(axes.begin(), axes.end(), out.axis_names.begin());
    }
    if (doc.contains("labels")) {
      const auto labels = doc.at("labels").get<std::vector<std::vector<std::string>>>();
      if (labels.size() != 3) throw Error(ErrorCode::kDimensionMismatch, "\"labels\" needs 3 lists");
      std::copy(labels.begin(), labels.end(), out.labels.begin());
    }
    out.validate();
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("table JSON: ") + e.what());
  }
}

nlohmann::json table_to_json(const Table3D& table) {
  const auto& d = table.dims();
  return nlohmann::json{{"dims", {d.I, d.J, d.K}},
                        {"counts", std::vector<Count>(table.cells().begin(), table.cells().end())}};
}

nlohmann::json table_to_json(const Dataset& dataset) {
  nlohmann::json doc = table_to_json(dataset.table);
  if (!dataset.name.empty()) doc["name"] = dataset.name;
  doc["axes"] = dataset.axis_names;
  const bool any_labels = !dataset.labels[0].empty() || !dataset.labels[1].empty() ||
                          !dataset.labels[2].empty();
  if (any_labels) doc["labels"] = dataset.labels;
  return doc;
}

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) fields.push_back(trim(field));
  return fields;
}

long long parse_integer(const std::string& field, std::size_t line_no) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(field, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != field.size()) {
    std::ostringstream msg;
    msg << "line " << line_no << ": expected an integer, got '" << field << "'";
    throw Error(ErrorCode::kParseError, msg.str());
  }
  return v;
}

}  // namespace

Dataset parse_table_csv(const std::string& text, std::optional<Dims> dims, RelaxDepth floor) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::map<std::tuple<long long, long long, long long>, Count> entries;
  Dims seen{0, 0, 0};
  std::size_t rows = 0;

  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const auto fields = split_commas(line);
    if (!header_seen) {
      if (fields != std::vector<std::string>{"i", "j", "k", "count"}) {
        throw Error(ErrorCode::kParseError, "CSV header must be i,j,k,count");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 4) {
      std::ostringstream msg;
      msg << "line " << line_no << ": expected 4 fields";
      throw Error(ErrorCode::kParseError, msg.str());
    }
    const long long i = parse_integer(fields[0], line_no);
    const long long j = parse_integer(fields[1], line_no);
    const long long k = parse_integer(fields[2], line_no);
    const Count c = parse_integer(fields[3], line_no);
    if (i < 1 || j < 1 || k < 1) {
      std::ostringstream msg;
      msg << "line " << line_no << ": indices are 1-based";
      throw Error(ErrorCode::kParseError, msg.str());
    }
    if (!entries.emplace(std::make_tuple(i, j, k), c).second) {
      std::ostringstream msg;
      msg << "line " << line_no << ": cell (" << i << "," << j << "," << k << ") repeated";
      throw Error(ErrorCode::kDimensionMismatch, msg.str());
    }
    seen.I = std::max<std::size_t>(seen.I, static_cast<std::size_t>(i));
    seen.J = std::max<std::size_t>(seen.J, static_cast<std::size_t>(j));
    seen.K = std::max<std::size_t>(seen.K, static_cast<std::size_t>(k));
    ++rows;
  }
  if (!header_seen) throw Error(ErrorCode::kParseError, "CSV is empty");
  const Dims d = dims.value_or(seen);
  if (!d.valid() || seen.I > d.I || seen.J > d.J || seen.K > d.K || rows != d.cells()) {
    std::ostringstream msg;
    msg << "CSV has " << rows << " rows but dims " << d.I << "x" << d.J << "x" << d.K
        << " need " << d.cells();
    throw Error(ErrorCode::kDimensionMismatch, msg.str());
  }
  std::vector<Count> cells(d.cells(), 0);
  for (const auto& [key, value] : entries) {
    const auto [i, j, k] = key;
    cells[d.index(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1),
                  static_cast<std::size_t>(k - 1))] = value;
  }
  Dataset out;
  out.table = Table3D(d, std::move(cells), floor);
  return out;
}

std::string table_to_csv(const Table3D& table) {
  std::ostringstream out;
  out << "i,j,k,count\n";
  const auto& d = table.dims();
  for (std::size_t i = 0; i < d.I; ++i)
    for (std::size_t j = 0; j < d.J; ++j)
      for (std::size_t k = 0; k < d.K; ++k)
        out << i + 1 << ',' << j + 1 << ',' << k + 1 << ',' << table.at(i, j, k) << '\n';
  return out.str();
}

std::string fitted_to_csv(const FittedTable& fitted) {
  std::ostringstream out;
  out << "i,j,k,fitted\n" << std::setprecision(17);
  const auto& d = fitted.dims();
  for (std::size_t i = 0; i < d.I; ++i)
    for (std::size_t j = 0; j < d.J; ++j)
      for (std::size_t k = 0; k < d.K; ++k)
        out << i + 1 << ',' << j + 1 << ',' << k + 1 << ',' << fitted.at(i, j, k) << '\n';
  return out.str();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path.string());
  out << text;
}

Dataset load_table(const std::filesystem::path& path, std::optional<TableFormat> format,
                   RelaxDepth floor) {
  const std::string text = read_file(path);
  Dataset out;
  if (format.value_or(format_for(path)) == TableFormat::kCsv) {
    out = parse_table_csv(text, std::nullopt, floor);
  } else {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
    }
    out = parse_table_json(doc, floor);
  }
  if (out.name.empty()) out.name = path.stem().string();
  return out;
}

Decomposition parse_decomposition(const nlohmann::json& doc) {
  try {
    const RelaxDepth floor{doc.at("floor").get<Count>()};
    Decomposition d{parse_table_json(doc.at("start"), floor).table, {},
                    parse_table_json(doc.at("end"), floor).table, floor};
    for (const auto& s : doc.at("steps")) {
      d.steps.push_back(SignedMove::from_one_based(
          s.at("i").get<std::size_t>(), s.at("i2").get<std::size_t>(),
          s.at("j").get<std::size_t>(), s.at("j2").get<std::size_t>(),
          s.at("k").get<std::size_t>(), s.at("k2").get<std::size_t>(), s.at("sign").get<int>()));
    }
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("decomposition JSON: ") + e.what());
  }
}

nlohmann::json decomposition_to_json(const Decomposition& d) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : d.steps) {
    const auto* m = std::get_if<BasicMove>(&s.move);
    if (!m) throw Error(ErrorCode::kInvalidArgument, "only basic-move steps serialize");
    steps.push_back({{"i", m->i + 1}, {"i2", m->i2 + 1}, {"j", m->j + 1}, {"j2", m->j2 + 1},
                     {"k", m->k + 1}, {"k2", m->k2 + 1}, {"sign", s.sign}});
  }
  return {{"start", table_to_json(d.start)},
          {"end", table_to_json(d.expected_end)},
          {"floor", d.floor.t},
          {"steps", steps}};
}

Decomposition load_decomposition(const std::filesystem::path& path) {
  try {
    return parse_decomposition(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
}

std::uint64_t table_checksum(const Table3D& table) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xFF;
      h *= 0x100000001b3ULL;
    }
  };
  mix(table.dims().I);
  mix(table.dims().J);
  mix(table.dims().K);
  for (Count c : table.cells()) mix(static_cast<std::uint64_t>(c));
  return h;
}

}  // namespace fibersampler
