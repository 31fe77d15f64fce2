// Copyright 2026 The cbmrep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CBMREP_IO_HPP
#define CBMREP_IO_HPP

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace cbmrep {

enum class OutputFormat { csv, jsonl };

/// Number rendered with 12 significant digits.
std::string format_sig(double value, int digits = 12);

/// RFC 4180 field quoting: fields containing commas, quotes or line breaks
/// are wrapped in double quotes with inner quotes doubled.
std::string csv_quote(std::string_view field);

/// Streams a table as CSV (one header row, schema version pinned in a
/// leading comment) or as JSON lines. Values are passed pre-rendered; the
/// JSON path re-quotes anything that does not parse as a bare number.
class TableWriter {
  public:
    TableWriter(std::ostream& os, OutputFormat format, std::vector<std::string> columns,
                std::string provenance_json);

    void row(const std::vector<std::string>& values);

  private:
    std::ostream& os_;
    OutputFormat format_;
    std::vector<std::string> columns_;
};

/// True when the rendered value is a bare JSON number.
bool is_json_number(std::string_view s);

}  // namespace cbmrep

#endif
