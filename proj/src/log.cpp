#include "procpat/log.hpp"

#include "csv.hpp"
#include "procpat/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <unordered_map>

namespace procpat {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    return s;
}

std::optional<bool> parse_flag(std::string_view text) {
    text = trim(text);
    if (text.empty())
        return std::nullopt;
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "1" || lower == "true" || lower == "yes")
        return true;
    if (lower == "0" || lower == "false" || lower == "no")
        return false;
    throw Error(Errc::MalformedRow, "not a boolean flag: '" + std::string(text) + "'");
}

AttrValue parse_cell(std::string_view text) {
    if (text.empty())
        return std::monostate{};
    if (auto n = parse_number(text))
        return *n;
    return std::string(text);
}

std::string cell_text(const AttrValue& v) {
    if (std::holds_alternative<double>(v))
        return format_number(std::get<double>(v));
    if (std::holds_alternative<std::string>(v))
        return std::get<std::string>(v);
    return {};
}

std::string outcome_text(const OutcomeValue& o) {
    if (o.missing())
        return {};
    if (o.kind == OutcomeKind::Continuous)
        return format_number(o.number());
    return o.category();
}

struct RowEvent {
    Event event;
    std::size_t line = 0;
    OutcomeValue outcome;
    std::optional<bool> observed;
    CaseAttributes attrs;
};

} // namespace

std::optional<double> parse_number(std::string_view text) {
    text = trim(text);
    if (text.empty())
        return std::nullopt;
    if (text.front() == '+')
        text.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value))
        return std::nullopt;
    return value;
}

std::string format_number(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::optional<Timestamp> parse_timestamp(std::string_view text, const std::string& format) {
    const std::string input(trim(text));
    if (input.empty())
        return std::nullopt;
    std::tm tm{};
    tm.tm_mday = 1;
    const char* rest = strptime(input.c_str(), format.c_str(), &tm);
    if (rest == nullptr)
        return std::nullopt;
    long millis = 0;
    if (*rest == '.') {
        ++rest;
        int digits = 0;
        while (*rest >= '0' && *rest <= '9') {
            if (digits < 3) {
                millis = millis * 10 + (*rest - '0');
            }
            ++digits;
            ++rest;
        }
        if (digits == 0)
            return std::nullopt;
        for (int d = digits; d < 3; ++d)
            millis *= 10;
    }
    if (*rest == 'Z')
        ++rest;
    if (*rest != '\0')
        return std::nullopt;
    const std::time_t secs = timegm(&tm);
    if (secs == static_cast<std::time_t>(-1) && !(tm.tm_year == 69 && tm.tm_mon == 11))
        return std::nullopt;
    return Timestamp{std::chrono::milliseconds{static_cast<std::int64_t>(secs) * 1000 + millis}};
}

std::string format_timestamp(Timestamp ts, const std::string& format) {
    const auto ms = ts.time_since_epoch().count();
    auto secs = ms / 1000;
    auto frac = ms % 1000;
    if (frac < 0) {
        frac += 1000;
        secs -= 1;
    }
    const std::time_t t = static_cast<std::time_t>(secs);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[128];
    const std::size_t n = std::strftime(buf, sizeof buf, format.c_str(), &tm);
    std::string out(buf, n);
    if (frac != 0) {
        char fb[8];
        std::snprintf(fb, sizeof fb, ".%03d", static_cast<int>(frac));
        out += fb;
    }
    return out;
}

EventLog::EventLog(LogSchema schema, std::vector<Trace> traces)
    : schema_(std::move(schema)), traces_(std::move(traces)) {
    std::sort(traces_.begin(), traces_.end(),
              [](const Trace& a, const Trace& b) { return a.case_id < b.case_id; });
    for (std::size_t i = 0; i < traces_.size(); ++i) {
        const Trace& t = traces_[i];
        if (i > 0 && traces_[i - 1].case_id == t.case_id)
            throw Error(Errc::InvalidArgument, "duplicate case id '" + t.case_id + "'");
        if (t.events.empty())
            throw Error(Errc::InvalidArgument, "trace '" + t.case_id + "' has no events");
        if (!t.outcome.missing() && t.outcome.kind != schema_.outcome_kind)
            throw Error(Errc::InvalidArgument,
                        "outcome kind of case '" + t.case_id + "' differs from the log's");
        for (std::size_t j = 0; j < t.events.size(); ++j) {
            const Event& e = t.events[j];
            if (e.activity.empty())
                throw Error(Errc::InvalidArgument, "empty activity in case '" + t.case_id + "'");
            if (e.case_id != t.case_id)
                throw Error(Errc::InvalidArgument, "event case id mismatch in '" + t.case_id + "'");
            if (j > 0 && t.events[j - 1].start > e.start)
                throw Error(Errc::InvalidArgument,
                            "events of case '" + t.case_id + "' are not time-ordered");
            alphabet_.insert(e.activity);
        }
        event_count_ += t.events.size();
    }
}

std::optional<std::size_t> EventLog::index_of(std::string_view case_id) const {
    auto it = std::lower_bound(traces_.begin(), traces_.end(), case_id,
                               [](const Trace& t, std::string_view id) { return t.case_id < id; });
    if (it == traces_.end() || it->case_id != case_id)
        return std::nullopt;
    return static_cast<std::size_t>(it - traces_.begin());
}

EventLog EventLog::subset(std::span<const std::size_t> indices) const {
    std::vector<Trace> picked;
    picked.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i >= traces_.size())
            throw Error(Errc::IndexOutOfRange, "trace index " + std::to_string(i));
        picked.push_back(traces_[i]);
    }
    return EventLog(schema_, std::move(picked));
}

EventLog EventLog::with_outcomes(OutcomeKind kind, std::vector<OutcomeValue> outcomes) const {
    if (outcomes.size() != traces_.size())
        throw Error(Errc::LengthMismatch, "outcome count differs from trace count");
    LogSchema schema = schema_;
    schema.outcome_kind = kind;
    std::vector<Trace> traces = traces_;
    for (std::size_t i = 0; i < traces.size(); ++i)
        traces[i].outcome = std::move(outcomes[i]);
    return EventLog(std::move(schema), std::move(traces));
}

EventLog load_event_log(const std::filesystem::path& path, const LogSchema& schema,
                        std::vector<std::string>* warnings) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::Io, "cannot open event log '" + path.string() + "'");
    return parse_event_log(in, schema, warnings);
}

EventLog parse_event_log(std::istream& in, const LogSchema& schema,
                         std::vector<std::string>* warnings) {
    csv::Reader reader(in, schema.delimiter);
    auto header = reader.next();
    if (!header)
        throw Error(Errc::EmptyLog, "no header row");
    if (!header->empty() && header->front().rfind("\xEF\xBB\xBF", 0) == 0)
        header->front().erase(0, 3);

    std::unordered_map<std::string, std::size_t> column;
    for (std::size_t i = 0; i < header->size(); ++i)
        column.emplace(std::string(trim((*header)[i])), i);
    auto require = [&](const std::string& name) {
        auto it = column.find(name);
        if (it == column.end())
            throw Error(Errc::MissingColumn, "column '" + name + "' not in header");
        return it->second;
    };

    const std::size_t case_col = require(schema.case_column);
    const std::size_t act_col = require(schema.activity_column);
    const std::size_t ts_col = require(schema.timestamp_column);
    const std::size_t out_col = require(schema.outcome_column);
    std::optional<std::size_t> end_col;
    if (schema.end_timestamp_column)
        end_col = require(*schema.end_timestamp_column);
    std::optional<std::size_t> obs_col;
    if (schema.outcome_observed_column)
        obs_col = require(*schema.outcome_observed_column);
    std::vector<std::size_t> num_cols, cat_cols;
    for (const auto& a : schema.numeric_attributes)
        num_cols.push_back(require(a));
    for (const auto& a : schema.categorical_attributes)
        cat_cols.push_back(require(a));

    std::vector<bool> reserved(header->size(), false);
    for (std::size_t c : {case_col, act_col, ts_col, out_col})
        reserved[c] = true;
    if (end_col)
        reserved[*end_col] = true;
    if (obs_col)
        reserved[*obs_col] = true;
    for (std::size_t c : num_cols)
        reserved[c] = true;
    for (std::size_t c : cat_cols)
        reserved[c] = true;

    std::map<std::string, std::vector<RowEvent>> by_case;
    while (auto row = reader.next()) {
        const std::size_t line = reader.line();
        if (row->size() != header->size())
            throw Error(Errc::MalformedRow, "line " + std::to_string(line) + " has " +
                                                std::to_string(row->size()) + " fields, expected " +
                                                std::to_string(header->size()));
        const auto& r = *row;
        RowEvent re;
        re.line = line;
        re.event.case_id = std::string(trim(r[case_col]));
        re.event.activity = std::string(trim(r[act_col]));
        if (re.event.case_id.empty() || re.event.activity.empty())
            throw Error(Errc::MalformedRow,
                        "line " + std::to_string(line) + " has an empty case id or activity");
        auto start = parse_timestamp(r[ts_col], schema.timestamp_format);
        if (!start)
            throw Error(Errc::UnparseableTimestamp,
                        "line " + std::to_string(line) + ": '" + r[ts_col] + "'");
        re.event.start = *start;
        re.event.end = *start;
        if (end_col && !trim(r[*end_col]).empty()) {
            auto end = parse_timestamp(r[*end_col], schema.timestamp_format);
            if (!end)
                throw Error(Errc::UnparseableTimestamp,
                            "line " + std::to_string(line) + ": '" + r[*end_col] + "'");
            re.event.end = *end;
        }
        for (std::size_t c = 0; c < r.size(); ++c)
            if (!reserved[c])
                re.event.attrs.emplace(std::string(trim((*header)[c])), parse_cell(trim(r[c])));

        const auto out_text = trim(r[out_col]);
        re.outcome.kind = schema.outcome_kind;
        if (!out_text.empty()) {
            if (schema.outcome_kind == OutcomeKind::Continuous) {
                auto v = parse_number(out_text);
                if (!v)
                    throw Error(Errc::MalformedRow, "line " + std::to_string(line) +
                                                        ": non-numeric outcome '" +
                                                        std::string(out_text) + "'");
                re.outcome.value = *v;
            } else {
                re.outcome.value = std::string(out_text);
            }
        }
        if (obs_col)
            re.observed = parse_flag(r[*obs_col]);
        for (std::size_t i = 0; i < num_cols.size(); ++i) {
            const auto text = trim(r[num_cols[i]]);
            std::optional<double> v;
            if (!text.empty()) {
                v = parse_number(text);
                if (!v)
                    throw Error(Errc::MalformedRow, "line " + std::to_string(line) +
                                                        ": non-numeric value for '" +
                                                        schema.numeric_attributes[i] + "'");
            }
            re.attrs.numeric[schema.numeric_attributes[i]] = v;
        }
        for (std::size_t i = 0; i < cat_cols.size(); ++i) {
            const auto text = trim(r[cat_cols[i]]);
            re.attrs.categorical[schema.categorical_attributes[i]] =
                text.empty() ? std::string(kMissingCategory) : std::string(text);
        }
        by_case[re.event.case_id].push_back(std::move(re));
    }
    if (by_case.empty())
        throw Error(Errc::EmptyLog, "no data rows");

    std::vector<Trace> traces;
    traces.reserve(by_case.size());
    for (auto& [case_id, rows] : by_case) {
        std::stable_sort(rows.begin(), rows.end(), [](const RowEvent& a, const RowEvent& b) {
            return a.event.start < b.event.start;
        });
        Trace t;
        t.case_id = case_id;
        t.outcome.kind = schema.outcome_kind;
        std::optional<bool> observed;
        for (const RowEvent& re : rows) {
            if (!re.outcome.missing()) {
                if (t.outcome.missing())
                    t.outcome = re.outcome;
                else if (!(t.outcome == re.outcome))
                    throw Error(Errc::InconsistentOutcome, "case '" + case_id + "' (line " +
                                                               std::to_string(re.line) + ")");
            }
            if (re.observed) {
                if (observed && *observed != *re.observed)
                    throw Error(Errc::InconsistentOutcome,
                                "case '" + case_id + "' has conflicting outcome event flags");
                observed = re.observed;
            }
        }
        t.outcome_observed = observed.value_or(true);
        t.case_attrs = rows.front().attrs;
        if (warnings) {
            for (std::size_t i = 1; i < rows.size(); ++i) {
                if (!(rows[i].attrs == t.case_attrs)) {
                    warnings->push_back("case '" + case_id + "': case attributes on line " +
                                        std::to_string(rows[i].line) +
                                        " differ from the first event and are ignored");
                    break;
                }
            }
        }
        t.events.reserve(rows.size());
        for (RowEvent& re : rows)
            t.events.push_back(std::move(re.event));
        traces.push_back(std::move(t));
    }
    return EventLog(schema, std::move(traces));
}

void write_event_log_csv(const EventLog& log, std::ostream& out) {
    const LogSchema& s = log.schema();
    std::set<std::string> extra;
    for (const Trace& t : log.traces())
        for (const Event& e : t.events)
            for (const auto& [k, v] : e.attrs)
                extra.insert(k);

    std::vector<std::string> header{s.case_column, s.activity_column, s.timestamp_column};
    if (s.end_timestamp_column)
        header.push_back(*s.end_timestamp_column);
    header.push_back(s.outcome_column);
    if (s.outcome_observed_column)
        header.push_back(*s.outcome_observed_column);
    header.insert(header.end(), s.numeric_attributes.begin(), s.numeric_attributes.end());
    header.insert(header.end(), s.categorical_attributes.begin(), s.categorical_attributes.end());
    header.insert(header.end(), extra.begin(), extra.end());
    csv::write_row(out, header, s.delimiter);

    std::vector<std::string> row;
    for (const Trace& t : log.traces()) {
        for (const Event& e : t.events) {
            row.clear();
            row.push_back(t.case_id);
            row.push_back(e.activity);
            row.push_back(format_timestamp(e.start, s.timestamp_format));
            if (s.end_timestamp_column)
                row.push_back(format_timestamp(e.end, s.timestamp_format));
            row.push_back(outcome_text(t.outcome));
            if (s.outcome_observed_column)
                row.push_back(t.outcome_observed ? "1" : "0");
            for (const auto& a : s.numeric_attributes) {
                auto it = t.case_attrs.numeric.find(a);
                row.push_back(it != t.case_attrs.numeric.end() && it->second
                                  ? format_number(*it->second)
                                  : std::string{});
            }
            for (const auto& a : s.categorical_attributes) {
                auto it = t.case_attrs.categorical.find(a);
                const bool missing =
                    it == t.case_attrs.categorical.end() || it->second == kMissingCategory;
                row.push_back(missing ? std::string{} : it->second);
            }
            for (const auto& k : extra) {
                auto it = e.attrs.find(k);
                row.push_back(it == e.attrs.end() ? std::string{} : cell_text(it->second));
            }
            csv::write_row(out, row, s.delimiter);
        }
    }
}

std::vector<OutcomeValue> outcome_vector(const EventLog& log) {
    std::vector<OutcomeValue> out;
    out.reserve(log.size());
    for (const Trace& t : log.traces())
        out.push_back(t.outcome);
    return out;
}

ValidationReport validate_log(const EventLog& log) {
    ValidationReport report;
    report.case_count = log.size();
    report.activity_count = log.activity_alphabet().size();
    report.event_count = log.event_count();
    const LogSchema& s = log.schema();
    for (const Trace& t : log.traces()) {
        if (t.events.empty())
            report.issues.push_back({t.case_id, {}, "trace has no events"});
        if (t.outcome.missing())
            report.issues.push_back({t.case_id, s.outcome_column, "missing outcome"});
        for (const auto& a : s.numeric_attributes) {
            auto it = t.case_attrs.numeric.find(a);
            if (it == t.case_attrs.numeric.end() || !it->second)
                report.issues.push_back({t.case_id, a, "missing numeric attribute"});
        }
        for (const auto& a : s.categorical_attributes) {
            auto it = t.case_attrs.categorical.find(a);
            if (it == t.case_attrs.categorical.end() || it->second == kMissingCategory)
                report.issues.push_back({t.case_id, a, "missing categorical attribute"});
        }
    }
    return report;
}

} // namespace procpat
