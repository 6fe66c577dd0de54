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

// Minimal RFC 4180 reader/writer: comma separator, double-quote quoting,
// doubled quotes inside quoted fields, CRLF or LF record terminators.

#ifndef DPMICRO_CSV_H_
#define DPMICRO_CSV_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dpmicro {

class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  // Reads the next record into `fields`. Returns false at end of input.
  // Throws ParseError on an unterminated quoted field.
  bool Next(std::vector<std::string>& fields);

  // 1-based line number where the last returned record started.
  std::size_t line() const { return record_line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
};

// Quotes the field only when it contains a comma, quote, CR or LF.
std::string CsvEscape(std::string_view field);

void WriteCsvRecord(std::ostream& out, std::span<const std::string> fields);

}  // namespace dpmicro

#endif  // DPMICRO_CSV_H_
