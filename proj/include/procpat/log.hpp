#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace procpat {

using Timestamp = std::chrono::time_point<std::chrono::system_clock, std::chrono::milliseconds>;

/// Scalar attribute value; monostate marks a missing cell.
using AttrValue = std::variant<std::monostate, double, std::string>;

inline constexpr std::string_view kMissingCategory = "__missing__";

enum class OutcomeKind { Continuous, Categorical };

struct OutcomeValue {
    OutcomeKind kind = OutcomeKind::Continuous;
    std::variant<std::monostate, double, std::string> value;

    bool missing() const { return std::holds_alternative<std::monostate>(value); }
    double number() const { return std::get<double>(value); }
    const std::string& category() const { return std::get<std::string>(value); }

    friend bool operator==(const OutcomeValue&, const OutcomeValue&) = default;
};

struct Event {
    std::string activity;
    std::string case_id;
    Timestamp start{};
    /// Completion instant; equals start when the log carries no end column.
    Timestamp end{};
    std::map<std::string, AttrValue> attrs;

    friend bool operator==(const Event&, const Event&) = default;
};

struct CaseAttributes {
    std::map<std::string, std::optional<double>> numeric;
    std::map<std::string, std::string> categorical;

    friend bool operator==(const CaseAttributes&, const CaseAttributes&) = default;
};

struct Trace {
    std::string case_id;
    std::vector<Event> events;
    CaseAttributes case_attrs;
    OutcomeValue outcome;
    /// Survival-style event indicator for the outcome; true when not declared.
    bool outcome_observed = true;

    friend bool operator==(const Trace&, const Trace&) = default;
};

struct LogSchema {
    std::string case_column = "case_id";
    std::string activity_column = "activity";
    std::string timestamp_column = "timestamp";
    std::optional<std::string> end_timestamp_column;
    std::string outcome_column = "outcome";
    OutcomeKind outcome_kind = OutcomeKind::Categorical;
    std::optional<std::string> outcome_observed_column;
    std::vector<std::string> numeric_attributes;
    std::vector<std::string> categorical_attributes;
    std::string timestamp_format = "%Y-%m-%dT%H:%M:%S";
    char delimiter = ',';

    friend bool operator==(const LogSchema&, const LogSchema&) = default;
};

/// Immutable set of traces kept in canonical order (case id, lexicographic).
class EventLog {
public:
    EventLog(LogSchema schema, std::vector<Trace> traces);

    const LogSchema& schema() const noexcept { return schema_; }
    const std::vector<Trace>& traces() const noexcept { return traces_; }
    const std::set<std::string>& activity_alphabet() const noexcept { return alphabet_; }
    std::size_t size() const noexcept { return traces_.size(); }
    std::size_t event_count() const noexcept { return event_count_; }
    OutcomeKind outcome_kind() const noexcept { return schema_.outcome_kind; }

    /// Position of a case in canonical order, or nullopt.
    std::optional<std::size_t> index_of(std::string_view case_id) const;

    /// Traces at the given canonical positions, as a new log with the same schema.
    EventLog subset(std::span<const std::size_t> indices) const;

    /// Same traces with every outcome replaced; kinds must agree with `kind`.
    EventLog with_outcomes(OutcomeKind kind, std::vector<OutcomeValue> outcomes) const;

    friend bool operator==(const EventLog&, const EventLog&) = default;

private:
    LogSchema schema_;
    std::vector<Trace> traces_;
    std::set<std::string> alphabet_;
    std::size_t event_count_ = 0;
};

EventLog load_event_log(const std::filesystem::path& path, const LogSchema& schema,
                        std::vector<std::string>* warnings = nullptr);

EventLog parse_event_log(std::istream& in, const LogSchema& schema,
                         std::vector<std::string>* warnings = nullptr);

/// Writes the log in the same CSV layout load_event_log reads under its schema.
void write_event_log_csv(const EventLog& log, std::ostream& out);

std::vector<OutcomeValue> outcome_vector(const EventLog& log);

struct ValidationIssue {
    std::string case_id;
    std::string attribute;
    std::string message;

    friend bool operator==(const ValidationIssue&, const ValidationIssue&) = default;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    std::size_t case_count = 0;
    std::size_t activity_count = 0;
    std::size_t event_count = 0;

    bool clean() const noexcept { return issues.empty(); }
};

ValidationReport validate_log(const EventLog& log);

std::optional<Timestamp> parse_timestamp(std::string_view text, const std::string& format);
std::string format_timestamp(Timestamp ts, const std::string& format);

/// Shortest text that parses back to the same double.
std::string format_number(double value);
std::optional<double> parse_number(std::string_view text);

} // namespace procpat
