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

#include "dpmicro/schema.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <unordered_set>

#include "dpmicro/error.h"

namespace dpmicro {

std::string_view to_string(AttributeKind kind) {
  return kind == AttributeKind::kNumeric ? "numeric" : "categorical";
}

AttributeSchema AttributeSchema::Numeric(std::string name, double lower,
                                         double upper, bool discrete) {
  AttributeSchema a;
  a.name = std::move(name);
  a.kind = AttributeKind::kNumeric;
  a.lower = lower;
  a.upper = upper;
  a.discrete = discrete;
  a.Validate();
  return a;
}

AttributeSchema AttributeSchema::Categorical(
    std::string name, std::shared_ptr<const Taxonomy> taxonomy,
    std::string taxonomy_ref) {
  AttributeSchema a;
  a.name = std::move(name);
  a.kind = AttributeKind::kCategorical;
  a.taxonomy = std::move(taxonomy);
  a.taxonomy_ref = std::move(taxonomy_ref);
  a.Validate();
  return a;
}

bool AttributeSchema::has_bounds() const {
  return !std::isnan(lower) && !std::isnan(upper);
}

double AttributeSchema::sensitivity() const {
  return is_numeric() ? upper - lower : 1.0;
}

void AttributeSchema::Validate(bool require_bounds) const {
  if (name.empty()) throw InvalidArgument("attribute with empty name");
  if (is_numeric()) {
    if (taxonomy) {
      throw InvalidArgument("numeric attribute '" + name + "' has a taxonomy");
    }
    if (!has_bounds()) {
      if (require_bounds || !bound_factor) {
        throw InvalidArgument("numeric attribute '" + name +
                              "' needs lower/upper or bound_factor");
      }
      if (!(*bound_factor > 0) || !std::isfinite(*bound_factor)) {
        throw InvalidArgument("attribute '" + name +
                              "': bound_factor must be positive");
      }
      return;
    }
    if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
      throw InvalidArgument("numeric attribute '" + name +
                            "' needs finite lower < upper");
    }
  } else if (!taxonomy) {
    throw InvalidArgument("categorical attribute '" + name +
                          "' has no taxonomy loaded");
  }
}

Schema::Schema(std::vector<AttributeSchema> attributes)
    : attributes_(std::move(attributes)) {
  std::unordered_set<std::string> names;
  for (const auto& a : attributes_) {
    if (!names.insert(a.name).second) {
      throw InvalidArgument("duplicate attribute '" + a.name + "'");
    }
  }
}

std::optional<std::size_t> Schema::find(std::string_view name) const {
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t Schema::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw InvalidArgument("unknown attribute '" + std::string(name) + "'");
}

bool Schema::all_numeric() const {
  for (const auto& a : attributes_) {
    if (!a.is_numeric()) return false;
  }
  return true;
}

namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double ParseReal(std::string_view text, const std::string& where) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ParseError(where + ": expected a finite number, got '" +
                     std::string(text) + "'");
  }
  return v;
}

bool ParseBool(std::string_view text, const std::string& where) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ParseError(where + ": expected true/false, got '" + std::string(text) + "'");
}

}  // namespace

Schema ParseSchema(std::istream& in, const std::filesystem::path& base_dir) {
  std::vector<AttributeSchema> attrs;
  std::map<std::filesystem::path, std::shared_ptr<const Taxonomy>> taxonomies;
  std::vector<bool> kind_seen;
  std::string line;
  std::size_t line_no = 0;

  auto finish = [&]() {
    if (attrs.empty()) return;
    AttributeSchema& a = attrs.back();
    if (!kind_seen.back()) {
      throw ParseError("schema: attribute '" + a.name + "' has no kind");
    }
    a.Validate(/*require_bounds=*/false);
  };

  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = "schema line " + std::to_string(line_no);
    std::string_view view = Trim(line);
    if (view.empty() || view.front() == '#' || view.front() == ';') continue;
    if (view.front() == '[') {
      if (view.back() != ']') throw ParseError(where + ": unterminated section");
      finish();
      AttributeSchema a;
      a.name = std::string(Trim(view.substr(1, view.size() - 2)));
      if (a.name.empty()) throw ParseError(where + ": empty attribute name");
      attrs.push_back(std::move(a));
      kind_seen.push_back(false);
      continue;
    }
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) throw ParseError(where + ": expected key = value");
    if (attrs.empty()) throw ParseError(where + ": key outside an [attribute] section");
    const std::string_view key = Trim(view.substr(0, eq));
    const std::string_view value = Trim(view.substr(eq + 1));
    AttributeSchema& a = attrs.back();
    if (key == "kind") {
      if (value == "numeric") {
        a.kind = AttributeKind::kNumeric;
      } else if (value == "categorical") {
        a.kind = AttributeKind::kCategorical;
      } else {
        throw ParseError(where + ": unknown kind '" + std::string(value) + "'");
      }
      kind_seen.back() = true;
    } else if (key == "lower") {
      a.lower = ParseReal(value, where);
    } else if (key == "upper") {
      a.upper = ParseReal(value, where);
    } else if (key == "bound_factor") {
      a.bound_factor = ParseReal(value, where);
    } else if (key == "discrete") {
      a.discrete = ParseBool(value, where);
    } else if (key == "taxonomy") {
      a.taxonomy_ref = std::string(value);
      std::filesystem::path path(a.taxonomy_ref);
      if (path.is_relative()) path = base_dir / path;
      auto& slot = taxonomies[path.lexically_normal()];
      if (!slot) slot = std::make_shared<const Taxonomy>(Taxonomy::Load(path));
      a.taxonomy = slot;
    } else {
      throw ParseError(where + ": unknown key '" + std::string(key) + "'");
    }
  }
  finish();
  if (attrs.empty()) throw ParseError("schema: no attributes");
  return Schema(std::move(attrs));
}

Schema LoadSchema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open schema file " + path.string());
  return ParseSchema(in, path.parent_path());
}

}  // namespace dpmicro
