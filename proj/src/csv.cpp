#include "lxtopic/csv.hpp"

#include "lxtopic/error.hpp"

#include <fstream>
#include <sstream>

namespace lxtopic::csv {

namespace {

[[noreturn]] void malformed(std::string_view where, std::size_t line, const std::string& what) {
    throw Error(ErrorCode::MalformedCsv, std::string(where), "line " + std::to_string(line) + ": " + what);
}

} // namespace

Table parse(std::string_view text, bool has_header, std::string_view where) {
    Table table;
    std::vector<Row> records;
    std::vector<std::size_t> starts;

    Row record;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    bool after_quote = false; // just closed a quoted field, expecting , or EOL
    std::size_t line = 1;
    std::size_t record_line = 1;
    bool record_open = false;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
        after_quote = false;
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(record));
        starts.push_back(record_line);
        record.clear();
        record_open = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (!record_open) {
            record_open = true;
            record_line = line;
        }
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                    after_quote = true;
                }
            } else {
                if (ch == '\n') ++line;
                field.push_back(ch);
            }
            continue;
        }
        switch (ch) {
        case ',':
            end_field();
            break;
        case '\r':
            if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
            end_record();
            ++line;
            break;
        case '\n':
            end_record();
            ++line;
            break;
        case '"':
            if (!field.empty() || field_was_quoted || after_quote) malformed(where, line, "unexpected quote in field");
            in_quotes = true;
            field_was_quoted = true;
            break;
        default:
            if (after_quote) malformed(where, line, "characters after closing quote");
            field.push_back(ch);
        }
    }
    if (in_quotes) malformed(where, record_line, "unterminated quoted field");
    if (record_open) end_record();

    std::size_t first = 0;
    if (has_header) {
        if (records.empty()) malformed(where, 1, "missing header row");
        table.header = std::move(records[0]);
        first = 1;
    }
    const std::size_t width = has_header ? table.header.size() : (records.empty() ? 0 : records[0].size());
    for (std::size_t r = first; r < records.size(); ++r) {
        // A blank line in a single-column file is an empty field, not a missing row.
        if (records[r].size() != width) {
            malformed(where, starts[r],
                      "expected " + std::to_string(width) + " fields, found " + std::to_string(records[r].size()));
        }
        table.rows.push_back(std::move(records[r]));
        table.line_numbers.push_back(starts[r]);
    }
    return table;
}

std::string read_file(const std::string& path, std::string_view where) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, std::string(where), "cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out.push_back('"');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

std::string join_row(const Row& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += escape(fields[i]);
    }
    return out;
}

} // namespace lxtopic::csv
