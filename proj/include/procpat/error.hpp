#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace procpat {

enum class Errc {
    // log_model
    MissingColumn,
    UnparseableTimestamp,
    InconsistentOutcome,
    MissingOutcome,
    EmptyLog,
    MalformedRow,
    Io,
    // partial_order / patterns
    IndexOutOfRange,
    InvalidPattern,
    InstanceCapExceeded,
    PatternTooLarge,
    // interest / pareto
    LengthMismatch,
    EmptyInput,
    DimensionMismatch,
    // discovery
    UnknownPatternId,
    NoExtensionPossible,
    InvalidState,
    // eval
    SingleClass,
    InsufficientClassSupport,
    KTooLarge,
    // configuration / generic
    InvalidConfig,
    InvalidArgument,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace procpat
