#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace valproj::csv {

/// One physical record: its fields and the raw text it was read from.
struct Record {
    std::vector<std::string> fields;
    std::string raw;
    std::size_t line = 0;  // 1-based line where the record starts
};

/// RFC 4180 reader: comma separated, double-quote escaping, CRLF tolerated.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    /// Next record, or nullopt at end of stream. Throws DataError on an
    /// unterminated quoted field.
    std::optional<Record> next();

private:
    std::istream& in_;
    std::size_t line_ = 0;
};

/// Quotes a field when it contains a separator, quote or line break.
std::string escape(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace valproj::csv
