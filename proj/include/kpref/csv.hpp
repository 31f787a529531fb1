#pragma once

#include <array>
#include <string>
#include <unordered_map>
#include <vector>

#include "kpref/solver_preference.hpp"
#include "kpref/solver_triplet.hpp"
#include "kpref/types.hpp"

namespace kpref {

/// Items by id with their coordinates, in file order. Ids are strings; when
/// the CSV has no id column they default to the 0-based row number.
struct ItemTable {
  std::vector<std::string> ids;
  Matrix points;  ///< one item per row
  std::unordered_map<std::string, Index> index;

  Index size() const { return points.rows(); }
  Index dim() const { return points.cols(); }

  /// Row of the item with this id; throws InputError for unknown ids.
  Index lookup(const std::string& id) const;
};

/// Reads an item table. Expected layout: a header row, then one item per
/// row. If the first header cell is "id" the first column holds string ids;
/// otherwise every column is a coordinate and ids are the row numbers.
/// Comma separator, '.' decimal point. Throws InputError on ragged rows,
/// duplicate ids, unparsable numbers, or an empty table.
ItemTable read_items_csv(const std::string& path);

/// Reads labeled pairs with header "first_id,second_id,y" and resolves ids
/// against the table. Labels must be -1, 1, or +1. Rows with
/// first_id == second_id are rejected as degenerate.
std::vector<PairedSample> read_pairs_csv(const std::string& path,
                                         const ItemTable& items);

/// Reads labeled triplets with header "anchor_id,second_id,third_id,y".
/// Rows with second_id == third_id are rejected as uninformative; the
/// anchor may coincide with either compared item.
std::vector<TripletSample> read_triplets_csv(const std::string& path,
                                             const ItemTable& items);

/// Prediction queries: pairs or triplets, referencing items either by id
/// (headers "first_id,second_id" / "anchor_id,second_id,third_id") or as
/// raw coordinate blocks (headers "z1_0..z1_k,z2_0..z2_k[,z3_0..z3_k]").
struct QuerySet {
  bool is_triplet = false;
  bool by_id = false;
  std::vector<std::array<std::string, 3>> id_rows;  ///< by_id: third unused for pairs
  Matrix z1, z2, z3;                                ///< raw mode: one query per row
};

/// Reads a query file, inferring pair-vs-triplet and id-vs-raw from the
/// header. Throws InputError on malformed rows or unrecognized headers.
QuerySet read_queries_csv(const std::string& path);

}  // namespace kpref
