#pragma once

// Minimal strict RFC 4180 reader/writer shared by the table parsers.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace gazeform::csv {

struct Record {
    std::size_t line = 0;  // 1-based line where the record starts
    std::vector<std::string> fields;
};

// Accepts LF and CRLF, quoted fields with doubled quotes and embedded newlines.
// Blank lines are skipped. Throws InputError on an unterminated quote or on
// characters after a closing quote.
std::vector<Record> read(std::string_view text);

std::string quote(std::string_view field);
std::string join(const std::vector<std::string>& fields);

}  // namespace gazeform::csv
