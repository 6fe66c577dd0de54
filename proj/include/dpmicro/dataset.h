// Copyright 2026 The dpmicro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPMICRO_DATASET_H_
#define DPMICRO_DATASET_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dpmicro/schema.h"
#include "dpmicro/taxonomy.h"

namespace dpmicro {

using NumericColumn = std::vector<double>;
using CategoricalColumn = std::vector<NodeId>;
using Column = std::variant<NumericColumn, CategoricalColumn>;

// One cell of a record: a real for numeric attributes, a taxonomy label for
// categorical ones.
using Cell = std::variant<double, std::string>;

// n records x m attributes, stored column by column. Immutable once built.
class Dataset {
 public:
  Dataset() = default;

  // Checks column count, kinds, lengths, and that every numeric value lies
  // inside its attribute's [lower, upper].
  Dataset(Schema schema, std::vector<Column> columns);

  // Same as the constructor but skips the domain check. Used for noisy
  // releases produced with clamping disabled, which may leave the domain.
  static Dataset Unbounded(Schema schema, std::vector<Column> columns);

  const Schema& schema() const { return schema_; }
  std::size_t num_records() const { return num_records_; }
  std::size_t num_attributes() const { return columns_.size(); }

  const Column& column(std::size_t attr) const { return columns_[attr]; }
  std::span<const double> numeric(std::size_t attr) const;
  std::span<const NodeId> categorical(std::size_t attr) const;

  std::vector<Cell> record(std::size_t index) const;

  // Restricts the dataset (schema and columns) to the given attributes in
  // the given order.
  Dataset Select(std::span<const std::size_t> attrs) const;
  Dataset Select(std::span<const std::string> names) const;

  // Copy with one record replaced. The replacement is validated like any
  // loaded record.
  Dataset WithRecord(std::size_t index, std::span<const Cell> replacement) const;

 private:
  Dataset(Schema schema, std::vector<Column> columns, bool check_domain);

  Schema schema_;
  std::vector<Column> columns_;
  std::size_t num_records_ = 0;
};

// Two datasets that differ in exactly one record.
struct NeighborPair {
  Dataset base;
  Dataset modified;
  std::size_t changed_index = 0;
};

NeighborPair make_neighbor(const Dataset& base, std::size_t index,
                           std::span<const Cell> replacement);

// (0, factor * max(column)). Throws InvalidArgument on an empty column, a
// negative value, or a degenerate (all-zero) column.
std::pair<double, double> infer_numeric_bounds(std::span<const double> column,
                                               double factor);

// Reads a CSV with a header row. Columns are matched by name and emitted in
// schema order; extra CSV columns are ignored. Attributes that request bound
// inference get their bounds filled from the data, so the returned dataset's
// schema is fully resolved.
Dataset load_dataset(std::istream& csv, const Schema& schema);
Dataset load_dataset(const std::filesystem::path& csv, const Schema& schema);

// Header row plus one line per record; numeric cells with 6 decimals.
void write_dataset(const Dataset& data, std::ostream& out);
void write_dataset(const Dataset& data, const std::filesystem::path& path);

std::string format_numeric(double value);

}  // namespace dpmicro

#endif  // DPMICRO_DATASET_H_
