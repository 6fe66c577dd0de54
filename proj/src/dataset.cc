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

#include "dpmicro/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>

#include "dpmicro/csv.h"
#include "dpmicro/error.h"

namespace dpmicro {

namespace {

std::string OutOfDomain(const AttributeSchema& a, double v, std::size_t row) {
  return "attribute '" + a.name + "' record " + std::to_string(row) +
         ": value " + format_numeric(v) + " outside [" + format_numeric(a.lower) +
         ", " + format_numeric(a.upper) + "]";
}

}  // namespace

Dataset::Dataset(Schema schema, std::vector<Column> columns)
    : Dataset(std::move(schema), std::move(columns), /*check_domain=*/true) {}

Dataset Dataset::Unbounded(Schema schema, std::vector<Column> columns) {
  return Dataset(std::move(schema), std::move(columns), /*check_domain=*/false);
}

Dataset::Dataset(Schema schema, std::vector<Column> columns, bool check_domain)
    : schema_(std::move(schema)), columns_(std::move(columns)) {
  if (columns_.size() != schema_.size()) {
    throw InvalidArgument("dataset: " + std::to_string(columns_.size()) +
                          " columns for " + std::to_string(schema_.size()) +
                          " attributes");
  }
  for (std::size_t a = 0; a < columns_.size(); ++a) {
    const AttributeSchema& attr = schema_[a];
    attr.Validate();
    const std::size_t len =
        std::visit([](const auto& c) { return c.size(); }, columns_[a]);
    if (a == 0) num_records_ = len;
    if (len != num_records_) {
      throw InvalidArgument("dataset: column '" + attr.name + "' has length " +
                            std::to_string(len) + ", expected " +
                            std::to_string(num_records_));
    }
    if (attr.is_numeric()) {
      const auto* col = std::get_if<NumericColumn>(&columns_[a]);
      if (!col) throw InvalidArgument("dataset: '" + attr.name + "' must be numeric");
      if (check_domain) {
        for (std::size_t r = 0; r < col->size(); ++r) {
          const double v = (*col)[r];
          if (!(v >= attr.lower && v <= attr.upper)) {
            throw InvalidArgument(OutOfDomain(attr, v, r));
          }
        }
      }
    } else {
      const auto* col = std::get_if<CategoricalColumn>(&columns_[a]);
      if (!col) {
        throw InvalidArgument("dataset: '" + attr.name + "' must be categorical");
      }
      const auto size = static_cast<NodeId>(attr.taxonomy->size());
      for (NodeId v : *col) {
        if (v < 0 || v >= size) {
          throw InvalidArgument("dataset: '" + attr.name +
                                "' holds a node outside its taxonomy");
        }
      }
    }
  }
}

std::span<const double> Dataset::numeric(std::size_t attr) const {
  const auto* col = std::get_if<NumericColumn>(&columns_.at(attr));
  if (!col) throw InvalidArgument("attribute '" + schema_[attr].name + "' is not numeric");
  return *col;
}

std::span<const NodeId> Dataset::categorical(std::size_t attr) const {
  const auto* col = std::get_if<CategoricalColumn>(&columns_.at(attr));
  if (!col) {
    throw InvalidArgument("attribute '" + schema_[attr].name + "' is not categorical");
  }
  return *col;
}

std::vector<Cell> Dataset::record(std::size_t index) const {
  std::vector<Cell> out;
  out.reserve(columns_.size());
  for (std::size_t a = 0; a < columns_.size(); ++a) {
    if (schema_[a].is_numeric()) {
      out.emplace_back(numeric(a)[index]);
    } else {
      out.emplace_back(schema_[a].taxonomy->label(categorical(a)[index]));
    }
  }
  return out;
}

Dataset Dataset::Select(std::span<const std::size_t> attrs) const {
  std::vector<AttributeSchema> schema;
  std::vector<Column> columns;
  for (std::size_t a : attrs) {
    if (a >= columns_.size()) throw InvalidArgument("attribute index out of range");
    schema.push_back(schema_[a]);
    columns.push_back(columns_[a]);
  }
  Dataset out;
  out.schema_ = Schema(std::move(schema));
  out.columns_ = std::move(columns);
  out.num_records_ = num_records_;
  return out;
}

Dataset Dataset::Select(std::span<const std::string> names) const {
  std::vector<std::size_t> attrs;
  for (const auto& name : names) attrs.push_back(schema_.index_of(name));
  return Select(attrs);
}

Dataset Dataset::WithRecord(std::size_t index,
                            std::span<const Cell> replacement) const {
  if (index >= num_records_) throw InvalidArgument("record index out of range");
  if (replacement.size() != columns_.size()) {
    throw InvalidArgument("replacement record has wrong arity");
  }
  std::vector<Column> columns = columns_;
  for (std::size_t a = 0; a < columns.size(); ++a) {
    const AttributeSchema& attr = schema_[a];
    if (attr.is_numeric()) {
      const auto* v = std::get_if<double>(&replacement[a]);
      if (!v) throw InvalidArgument("replacement for '" + attr.name + "' must be numeric");
      std::get<NumericColumn>(columns[a])[index] = *v;
    } else {
      const auto* v = std::get_if<std::string>(&replacement[a]);
      if (!v) throw InvalidArgument("replacement for '" + attr.name + "' must be a label");
      std::get<CategoricalColumn>(columns[a])[index] = attr.taxonomy->id_of(*v);
    }
  }
  return Dataset(schema_, std::move(columns));
}

NeighborPair make_neighbor(const Dataset& base, std::size_t index,
                           std::span<const Cell> replacement) {
  return NeighborPair{base, base.WithRecord(index, replacement), index};
}

std::pair<double, double> infer_numeric_bounds(std::span<const double> column,
                                               double factor) {
  if (column.empty()) throw InvalidArgument("cannot infer bounds of an empty column");
  if (!(factor > 0)) throw InvalidArgument("bound factor must be positive");
  double max = 0.0;
  for (double v : column) {
    if (v < 0) {
      throw InvalidArgument("bound inference fixes lower = 0 but found " +
                            format_numeric(v) + "; give explicit bounds");
    }
    max = std::max(max, v);
  }
  const double upper = factor * max;
  if (!(upper > 0)) {
    throw InvalidArgument("inferred domain [0, 0] is degenerate");
  }
  return {0.0, upper};
}

Dataset load_dataset(std::istream& csv, const Schema& schema) {
  CsvReader reader(csv);
  std::vector<std::string> header;
  if (!reader.Next(header)) throw ParseError("csv: missing header row");

  std::vector<std::size_t> source(schema.size());
  for (std::size_t a = 0; a < schema.size(); ++a) {
    auto it = std::find(header.begin(), header.end(), schema[a].name);
    if (it == header.end()) {
      throw ParseError("csv: missing column '" + schema[a].name + "'");
    }
    source[a] = static_cast<std::size_t>(it - header.begin());
  }

  std::vector<Column> columns;
  for (std::size_t a = 0; a < schema.size(); ++a) {
    if (schema[a].is_numeric()) {
      columns.emplace_back(NumericColumn{});
    } else {
      columns.emplace_back(CategoricalColumn{});
    }
  }

  std::vector<std::string> fields;
  std::size_t row = 0;
  while (reader.Next(fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    if (fields.size() != header.size()) {
      throw ParseError("csv line " + std::to_string(reader.line()) + ": " +
                       std::to_string(fields.size()) + " fields, header has " +
                       std::to_string(header.size()));
    }
    for (std::size_t a = 0; a < schema.size(); ++a) {
      const AttributeSchema& attr = schema[a];
      const std::string& cell = fields[source[a]];
      const std::string where = "csv line " + std::to_string(reader.line()) +
                                ", column '" + attr.name + "'";
      if (cell.empty()) throw ParseError(where + ": missing value");
      if (attr.is_numeric()) {
        double v = 0;
        const char* begin = cell.data();
        const char* end = begin + cell.size();
        auto [ptr, ec] = std::from_chars(begin, end, v);
        if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
          throw ParseError(where + ": cannot parse '" + cell + "' as a number");
        }
        std::get<NumericColumn>(columns[a]).push_back(v);
      } else {
        auto id = attr.taxonomy->find(cell);
        if (!id) {
          throw ParseError(where + ": label '" + cell + "' is not in taxonomy '" +
                           attr.taxonomy_ref + "'");
        }
        std::get<CategoricalColumn>(columns[a]).push_back(*id);
      }
    }
    ++row;
  }

  Schema resolved = schema;
  for (std::size_t a = 0; a < resolved.size(); ++a) {
    AttributeSchema& attr = resolved.mutable_attribute(a);
    if (attr.is_numeric() && !attr.has_bounds()) {
      if (!attr.bound_factor) {
        throw InvalidArgument("attribute '" + attr.name + "' has no bounds");
      }
      try {
        std::tie(attr.lower, attr.upper) = infer_numeric_bounds(
            std::get<NumericColumn>(columns[a]), *attr.bound_factor);
      } catch (const InvalidArgument& e) {
        throw InvalidArgument("attribute '" + attr.name + "': " + e.what());
      }
    }
  }
  return Dataset(std::move(resolved), std::move(columns));
}

Dataset load_dataset(const std::filesystem::path& csv, const Schema& schema) {
  std::ifstream in(csv, std::ios::binary);
  if (!in) throw IoError("cannot open data file " + csv.string());
  try {
    return load_dataset(in, schema);
  } catch (const ParseError& e) {
    throw ParseError(csv.string() + ": " + e.what());
  }
}

std::string format_numeric(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  std::string out(buf);
  if (out == "-0.000000") out.erase(0, 1);
  return out;
}

void write_dataset(const Dataset& data, std::ostream& out) {
  const Schema& schema = data.schema();
  std::vector<std::string> fields;
  for (const auto& a : schema.attributes()) fields.push_back(a.name);
  WriteCsvRecord(out, fields);
  for (std::size_t r = 0; r < data.num_records(); ++r) {
    fields.clear();
    for (std::size_t a = 0; a < schema.size(); ++a) {
      if (schema[a].is_numeric()) {
        fields.push_back(format_numeric(data.numeric(a)[r]));
      } else {
        fields.push_back(schema[a].taxonomy->label(data.categorical(a)[r]));
      }
    }
    WriteCsvRecord(out, fields);
  }
  if (!out) throw IoError("write failure while emitting dataset");
}

void write_dataset(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_dataset(data, out);
  out.flush();
  if (!out) throw IoError("write failure on " + path.string());
}

}  // namespace dpmicro
