#pragma once

#include <stdexcept>
#include <string>

namespace valproj {

/// Bad input data or configuration. The CLI maps this to exit code 1.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fatal parse failure; message names the row and column.
class ParseError : public DataError {
public:
    ParseError(const std::string& source, std::size_t row, const std::string& column,
               const std::string& what)
        : DataError(source + ": row " + std::to_string(row) + ", column '" + column + "': " + what),
          row_(row), column_(column) {}

    std::size_t row() const noexcept { return row_; }
    const std::string& column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::string column_;
};

/// File system failure. The CLI maps this to exit code 2.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace valproj
