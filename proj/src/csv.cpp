#include "csv.hpp"

#include "procpat/error.hpp"

namespace procpat::csv {

std::optional<std::vector<std::string>> Reader::next() {
    while (true) {
        std::vector<std::string> fields;
        std::string field;
        bool in_quotes = false;
        bool any = false;
        bool field_was_quoted = false;
        record_line_ = line_;
        int ch;
        while ((ch = in_.get()) != std::char_traits<char>::eof()) {
            any = true;
            const char c = static_cast<char>(ch);
            if (in_quotes) {
                if (c == '"') {
                    if (in_.peek() == '"') {
                        in_.get();
                        field.push_back('"');
                    } else {
                        in_quotes = false;
                    }
                } else {
                    if (c == '\n')
                        ++line_;
                    field.push_back(c);
                }
                continue;
            }
            if (c == '"' && field.empty() && !field_was_quoted) {
                in_quotes = true;
                field_was_quoted = true;
            } else if (c == delim_) {
                fields.push_back(std::move(field));
                field.clear();
                field_was_quoted = false;
            } else if (c == '\r') {
                // swallowed; the following '\n' terminates the record
            } else if (c == '\n') {
                ++line_;
                break;
            } else {
                field.push_back(c);
            }
        }
        if (in_quotes)
            throw Error(Errc::MalformedRow, "unterminated quoted field starting on line " +
                                                std::to_string(record_line_));
        if (!any)
            return std::nullopt;
        fields.push_back(std::move(field));
        if (fields.size() == 1 && fields[0].empty() && !field_was_quoted)
            continue;
        return fields;
    }
}

void write_field(std::ostream& out, std::string_view field, char delimiter) {
    const bool needs_quotes = field.find_first_of(std::string{delimiter, '"', '\n', '\r'}) !=
                              std::string_view::npos;
    if (!needs_quotes) {
        out << field;
        return;
    }
    out << '"';
    for (char c : field) {
        if (c == '"')
            out << '"';
        out << c;
    }
    out << '"';
}

void write_row(std::ostream& out, const std::vector<std::string>& fields, char delimiter) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            out << delimiter;
        write_field(out, fields[i], delimiter);
    }
    out << '\n';
}

} // namespace procpat::csv
