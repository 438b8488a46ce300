#include "procpat/error.hpp"

namespace procpat {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
    case Errc::MissingColumn: return "MissingColumn";
    case Errc::UnparseableTimestamp: return "UnparseableTimestamp";
    case Errc::InconsistentOutcome: return "InconsistentOutcome";
    case Errc::MissingOutcome: return "MissingOutcome";
    case Errc::EmptyLog: return "EmptyLog";
    case Errc::MalformedRow: return "MalformedRow";
    case Errc::Io: return "Io";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::InvalidPattern: return "InvalidPattern";
    case Errc::InstanceCapExceeded: return "InstanceCapExceeded";
    case Errc::PatternTooLarge: return "PatternTooLarge";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::UnknownPatternId: return "UnknownPatternId";
    case Errc::NoExtensionPossible: return "NoExtensionPossible";
    case Errc::InvalidState: return "InvalidState";
    case Errc::SingleClass: return "SingleClass";
    case Errc::InsufficientClassSupport: return "InsufficientClassSupport";
    case Errc::KTooLarge: return "KTooLarge";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

} // namespace procpat
