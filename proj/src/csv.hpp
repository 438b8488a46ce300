#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace procpat::csv {

/// Streaming RFC 4180 reader: quoted fields, doubled quotes, CRLF or LF.
class Reader {
public:
    Reader(std::istream& in, char delimiter) : in_(in), delim_(delimiter) {}

    /// Next record, or nullopt at end of input. Blank lines are skipped.
    std::optional<std::vector<std::string>> next();

    /// 1-based physical line on which the last returned record started.
    std::size_t line() const noexcept { return record_line_; }

private:
    std::istream& in_;
    char delim_;
    std::size_t line_ = 1;
    std::size_t record_line_ = 0;
};

void write_field(std::ostream& out, std::string_view field, char delimiter);
void write_row(std::ostream& out, const std::vector<std::string>& fields, char delimiter);

} // namespace procpat::csv
