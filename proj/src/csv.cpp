#include "vu/csv.hpp"

#include <istream>

#include "vu/error.hpp"

namespace vu::csv {

std::optional<Row> Reader::next() {
    int c = in_.get();
    if (c == EOF) return std::nullopt;

    record_line_ = current_line_;
    Row row;
    Field field;
    bool in_quotes = false;
    bool after_quote = false;

    for (;; c = in_.get()) {
        if (c == EOF) {
            if (in_quotes) {
                throw Error(ErrorCode::SchemaViolation,
                            "unterminated quoted field starting on line " +
                                std::to_string(record_line_));
            }
            row.push_back(std::move(field));
            return row;
        }
        char ch = static_cast<char>(c);
        if (in_quotes) {
            if (ch == '"') {
                if (in_.peek() == '"') {
                    in_.get();
                    field.text.push_back('"');
                } else {
                    in_quotes = false;
                    after_quote = true;
                }
            } else {
                if (ch == '\n') ++current_line_;
                field.text.push_back(ch);
            }
            continue;
        }
        if (ch == ',') {
            row.push_back(std::move(field));
            field = Field{};
            after_quote = false;
        } else if (ch == '\r') {
            if (in_.peek() == '\n') in_.get();
            ++current_line_;
            row.push_back(std::move(field));
            return row;
        } else if (ch == '\n') {
            ++current_line_;
            row.push_back(std::move(field));
            return row;
        } else if (ch == '"' && field.text.empty() && !after_quote) {
            in_quotes = true;
            field.quoted = true;
        } else {
            field.text.push_back(ch);
        }
    }
}

std::vector<std::string> texts(const Row& row) {
    std::vector<std::string> out;
    out.reserve(row.size());
    for (const auto& f : row) out.push_back(f.text);
    return out;
}

std::string quote(std::string_view field) {
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out.push_back('"');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

std::string escape(std::string_view field) {
    bool needs = field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!field.empty() && (field.front() == ' ' || field.back() == ' ')) needs = true;
    return needs ? quote(field) : std::string(field);
}

std::string join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += escape(fields[i]);
    }
    return out;
}

}  // namespace vu::csv
