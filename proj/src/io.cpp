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

#include "cbmrep/io.hpp"

#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace cbmrep {

std::string format_sig(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
    return buf;
}

std::string csv_quote(std::string_view field) {
    const bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

bool is_json_number(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    size_t i = 0;
    if (s[i] == '-') {
        ++i;
    }
    bool digits = false;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        ++i;
        digits = true;
    }
    if (!digits) {
        return false;
    }
    if (i < s.size() && s[i] == '.') {
        ++i;
        bool frac = false;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            ++i;
            frac = true;
        }
        if (!frac) {
            return false;
        }
    }
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            ++i;
        }
        bool exp = false;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            ++i;
            exp = true;
        }
        if (!exp) {
            return false;
        }
    }
    return i == s.size();
}

namespace {

std::string json_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

TableWriter::TableWriter(std::ostream& os, OutputFormat format, std::vector<std::string> columns,
                         std::string provenance_json)
    : os_(os), format_(format), columns_(std::move(columns)) {
    if (format_ == OutputFormat::csv) {
        os_ << "# schema=1 config=" << provenance_json << "\n";
        for (size_t i = 0; i < columns_.size(); ++i) {
            os_ << (i ? "," : "") << csv_quote(columns_[i]);
        }
        os_ << "\n";
    } else {
        os_ << "{\"schema\":1,\"config\":" << provenance_json << "}\n";
    }
}

void TableWriter::row(const std::vector<std::string>& values) {
    if (values.size() != columns_.size()) {
        throw std::logic_error("TableWriter: row width does not match header");
    }
    if (format_ == OutputFormat::csv) {
        for (size_t i = 0; i < values.size(); ++i) {
            os_ << (i ? "," : "") << csv_quote(values[i]);
        }
        os_ << "\n";
        return;
    }
    os_ << "{";
    for (size_t i = 0; i < values.size(); ++i) {
        os_ << (i ? "," : "") << "\"" << json_escape(columns_[i]) << "\":";
        if (is_json_number(values[i])) {
            os_ << values[i];
        } else {
            os_ << "\"" << json_escape(values[i]) << "\"";
        }
    }
    os_ << "}\n";
}

}  // namespace cbmrep
