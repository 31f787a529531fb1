#include "kpref/csv.hpp"

#include <charconv>
#include <fstream>
#include <string_view>

#include "kpref/errors.hpp"

namespace kpref {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.emplace_back(trim(line.substr(start)));
      break;
    }
    cells.emplace_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

double parse_double(const std::string& cell, const std::string& path,
                    std::size_t line_no) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end)
    throw InputError(path + ":" + std::to_string(line_no) +
                     ": cannot parse number '" + cell + "'");
  return value;
}

int parse_label(const std::string& cell, const std::string& path,
                std::size_t line_no) {
  if (cell == "-1") return -1;
  if (cell == "1" || cell == "+1") return +1;
  throw InputError(path + ":" + std::to_string(line_no) +
                   ": label must be -1 or +1, got '" + cell + "'");
}

/// All non-empty lines of a CSV file, split into cells. The first entry is
/// the header. Throws InputError if the file cannot be read or is empty.
std::vector<std::vector<std::string>> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const auto trimmed = trim(line);
    if (trimmed.empty()) continue;
    rows.push_back(split_csv_line(trimmed));
  }
  if (rows.empty()) throw InputError(path + ": empty file, header required");
  return rows;
}

void expect_header(const std::vector<std::string>& got,
                   const std::vector<std::string>& want,
                   const std::string& path) {
  bool ok = got.size() == want.size();
  for (std::size_t i = 0; ok && i < want.size(); ++i) ok = got[i] == want[i];
  if (!ok) {
    std::string expected;
    for (std::size_t i = 0; i < want.size(); ++i) {
      if (i) expected += ',';
      expected += want[i];
    }
    throw InputError(path + ": expected header '" + expected + "'");
  }
}

}  // namespace

Index ItemTable::lookup(const std::string& id) const {
  const auto it = index.find(id);
  if (it == index.end()) throw InputError("unknown item id '" + id + "'");
  return it->second;
}

ItemTable read_items_csv(const std::string& path) {
  const auto rows = read_rows(path);
  const auto& header = rows.front();
  const bool has_id = !header.empty() && header.front() == "id";
  const std::size_t dim = header.size() - (has_id ? 1 : 0);
  if (dim == 0)
    throw InputError(path + ": no coordinate columns in header");
  if (rows.size() < 2)
    throw InputError(path + ": no items after the header");

  ItemTable table;
  const std::size_t n = rows.size() - 1;
  table.points = Matrix(static_cast<Index>(n), static_cast<Index>(dim));
  table.ids.reserve(n);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& cells = rows[r];
    const std::size_t line_no = r + 1;
    if (cells.size() != header.size())
      throw InputError(path + ":" + std::to_string(line_no) +
                       ": expected " + std::to_string(header.size()) +
                       " cells, got " + std::to_string(cells.size()));
    const std::string id =
        has_id ? cells[0] : std::to_string(r - 1);
    if (table.index.count(id))
      throw InputError(path + ":" + std::to_string(line_no) +
                       ": duplicate item id '" + id + "'");
    const Index row = static_cast<Index>(r - 1);
    table.index.emplace(id, row);
    table.ids.push_back(id);
    for (std::size_t c = 0; c < dim; ++c)
      table.points(row, static_cast<Index>(c)) =
          parse_double(cells[c + (has_id ? 1 : 0)], path, line_no);
  }
  return table;
}

std::vector<PairedSample> read_pairs_csv(const std::string& path,
                                         const ItemTable& items) {
  const auto rows = read_rows(path);
  expect_header(rows.front(), {"first_id", "second_id", "y"}, path);
  std::vector<PairedSample> data;
  data.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& cells = rows[r];
    const std::size_t line_no = r + 1;
    if (cells.size() != 3)
      throw InputError(path + ":" + std::to_string(line_no) +
                       ": expected 3 cells");
    PairedSample s;
    s.first = items.lookup(cells[0]);
    s.second = items.lookup(cells[1]);
    s.y = parse_label(cells[2], path, line_no);
    if (s.first == s.second)
      throw InputError(path + ":" + std::to_string(line_no) +
                       ": degenerate pair, first_id equals second_id");
    data.push_back(s);
  }
  return data;
}

std::vector<TripletSample> read_triplets_csv(const std::string& path,
                                             const ItemTable& items) {
  const auto rows = read_rows(path);
  expect_header(rows.front(), {"anchor_id", "second_id", "third_id", "y"},
                path);
  std::vector<TripletSample> data;
  data.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& cells = rows[r];
    const std::size_t line_no = r + 1;
    if (cells.size() != 4)
      throw InputError(path + ":" + std::to_string(line_no) +
                       ": expected 4 cells");
    TripletSample s;
    s.anchor = items.lookup(cells[0]);
    s.second = items.lookup(cells[1]);
    s.third = items.lookup(cells[2]);
    s.y = parse_label(cells[3], path, line_no);
    if (s.second == s.third)
      throw InputError(path + ":" + std::to_string(line_no) +
                       ": uninformative triplet, second_id equals third_id");
    data.push_back(s);
  }
  return data;
}

namespace {

/// Parses headers of the form prefix_0, prefix_1, ... and returns the count
/// of consecutive columns with that prefix starting at `start`.
std::size_t prefixed_run(const std::vector<std::string>& header,
                         std::size_t start, const std::string& prefix) {
  std::size_t count = 0;
  while (start + count < header.size()) {
    const std::string want = prefix + "_" + std::to_string(count);
    if (header[start + count] != want) break;
    ++count;
  }
  return count;
}

}  // namespace

QuerySet read_queries_csv(const std::string& path) {
  const auto rows = read_rows(path);
  const auto& header = rows.front();
  QuerySet qs;

  if (!header.empty() && (header[0] == "first_id" || header[0] == "anchor_id")) {
    qs.by_id = true;
    qs.is_triplet = header[0] == "anchor_id";
    if (qs.is_triplet)
      expect_header(header, {"anchor_id", "second_id", "third_id"}, path);
    else
      expect_header(header, {"first_id", "second_id"}, path);
    const std::size_t width = qs.is_triplet ? 3 : 2;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const auto& cells = rows[r];
      if (cells.size() != width)
        throw InputError(path + ":" + std::to_string(r + 1) +
                         ": expected " + std::to_string(width) + " cells");
      std::array<std::string, 3> ids{};
      for (std::size_t c = 0; c < width; ++c) ids[c] = cells[c];
      qs.id_rows.push_back(std::move(ids));
    }
    return qs;
  }

  // raw coordinate mode: z1_* block, z2_* block, optional z3_* block
  const std::size_t d1 = prefixed_run(header, 0, "z1");
  if (d1 == 0)
    throw InputError(path +
                     ": unrecognized query header; expected id columns or "
                     "z1_*/z2_* coordinate blocks");
  const std::size_t d2 = prefixed_run(header, d1, "z2");
  const std::size_t d3 = prefixed_run(header, d1 + d2, "z3");
  if (d2 != d1 || (d3 != 0 && d3 != d1) || header.size() != d1 + d2 + d3)
    throw InputError(path + ": coordinate blocks must be z1_*, z2_*" +
                     " (and optionally z3_*) of equal width");
  qs.is_triplet = d3 != 0;
  const Index d = static_cast<Index>(d1);
  const Index n = static_cast<Index>(rows.size() - 1);
  qs.z1 = Matrix(n, d);
  qs.z2 = Matrix(n, d);
  if (qs.is_triplet) qs.z3 = Matrix(n, d);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& cells = rows[r];
    const std::size_t line_no = r + 1;
    if (cells.size() != header.size())
      throw InputError(path + ":" + std::to_string(line_no) +
                       ": expected " + std::to_string(header.size()) +
                       " cells");
    const Index row = static_cast<Index>(r - 1);
    for (Index c = 0; c < d; ++c) {
      qs.z1(row, c) = parse_double(cells[static_cast<std::size_t>(c)], path,
                                   line_no);
      qs.z2(row, c) = parse_double(
          cells[static_cast<std::size_t>(d + c)], path, line_no);
      if (qs.is_triplet)
        qs.z3(row, c) = parse_double(
            cells[static_cast<std::size_t>(2 * d + c)], path, line_no);
    }
  }
  return qs;
}

}  // namespace kpref
