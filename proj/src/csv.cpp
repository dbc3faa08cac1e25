#include "valproj/csv.hpp"

#include "valproj/error.hpp"

namespace valproj::csv {

std::optional<Record> Reader::next() {
    std::string line;
    if (!std::getline(in_, line)) return std::nullopt;
    ++line_;

    Record rec;
    rec.line = line_;
    std::string field;
    bool quoted = false;
    bool field_was_quoted = false;

    for (;;) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        rec.raw += line;
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char c = line[i];
            if (quoted) {
                if (c == '"') {
                    if (i + 1 < line.size() && line[i + 1] == '"') {
                        field += '"';
                        ++i;
                    } else {
                        quoted = false;
                    }
                } else {
                    field += c;
                }
            } else if (c == '"' && field.empty() && !field_was_quoted) {
                quoted = true;
                field_was_quoted = true;
            } else if (c == ',') {
                rec.fields.push_back(std::move(field));
                field.clear();
                field_was_quoted = false;
            } else {
                field += c;
            }
        }
        if (!quoted) break;
        // quoted field spans a line break
        if (!std::getline(in_, line))
            throw DataError("line " + std::to_string(rec.line) + ": unterminated quoted field");
        ++line_;
        field += '\n';
        rec.raw += '\n';
    }
    rec.fields.push_back(std::move(field));
    return rec;
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << escape(fields[i]);
    }
    out << '\n';
}

}  // namespace valproj::csv
