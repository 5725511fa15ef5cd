#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vu::csv {

// RFC 4180 style: comma separated, '"' quoting, "" as escaped quote,
// quoted fields may span lines.

struct Field {
    std::string text;
    bool quoted = false;
};

using Row = std::vector<Field>;

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    /// Next record, or nullopt at end of input. Throws vu::Error(SchemaViolation)
    /// on an unterminated quoted field.
    std::optional<Row> next();

    /// Physical line on which the last returned record started (1-based).
    std::size_t line() const { return record_line_; }

private:
    std::istream& in_;
    std::size_t current_line_ = 1;
    std::size_t record_line_ = 0;
};

std::vector<std::string> texts(const Row& row);

std::string quote(std::string_view field);
/// Quotes only when needed (comma, quote, CR/LF, or leading/trailing space).
std::string escape(std::string_view field);
std::string join(const std::vector<std::string>& fields);

}  // namespace vu::csv
