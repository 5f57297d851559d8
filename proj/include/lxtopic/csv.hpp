#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace lxtopic::csv {

using Row = std::vector<std::string>;

struct Table {
    Row header;
    std::vector<Row> rows;
    /// 1-based physical line on which each data row starts.
    std::vector<std::size_t> line_numbers;
};

/// Parses RFC-4180 text. Accepts LF or CRLF record separators and a trailing
/// newline. Throws Error{MalformedCsv} with the offending line number on an
/// unterminated quote, stray quote inside an unquoted field, or a row whose
/// field count differs from the header. `where` tags the error.
Table parse(std::string_view text, bool has_header = true, std::string_view where = "csv");

/// Reads a whole file. Throws Error{IoError} if it cannot be opened.
std::string read_file(const std::string& path, std::string_view where = "csv");

/// Quotes a field only when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

std::string join_row(const Row& fields);

} // namespace lxtopic::csv
