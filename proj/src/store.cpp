#include "vu/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "vu/csv.hpp"
#include "vu/error.hpp"

namespace vu::store {

std::string_view to_string(EventKind kind) {
    switch (kind) {
    case EventKind::StudyCreated: return "StudyCreated";
    case EventKind::ParticipantRegistered: return "ParticipantRegistered";
    case EventKind::FamiliaritySubmitted: return "FamiliaritySubmitted";
    case EventKind::PhaseAdvanced: return "PhaseAdvanced";
    case EventKind::LoopRecorded: return "LoopRecorded";
    case EventKind::ResponseSubmitted: return "ResponseSubmitted";
    case EventKind::ResponseAmended: return "ResponseAmended";
    }
    return "StudyCreated";
}

EventKind parse_event_kind(std::string_view text) {
    for (auto k : {EventKind::StudyCreated, EventKind::ParticipantRegistered,
                   EventKind::FamiliaritySubmitted, EventKind::PhaseAdvanced, EventKind::LoopRecorded,
                   EventKind::ResponseSubmitted, EventKind::ResponseAmended}) {
        if (to_string(k) == text) return k;
    }
    throw Error(ErrorCode::SchemaViolation, "unknown event kind '" + std::string(text) + "'");
}

std::string_view to_string(Phase phase) {
    switch (phase) {
    case Phase::PreViewing: return "pre_viewing";
    case Phase::Familiarization: return "familiarization";
    case Phase::InDepth: return "in_depth";
    case Phase::Complete: return "complete";
    }
    return "pre_viewing";
}

Phase parse_phase(std::string_view text) {
    for (auto p : {Phase::PreViewing, Phase::Familiarization, Phase::InDepth, Phase::Complete}) {
        if (to_string(p) == text) return p;
    }
    throw Error(ErrorCode::SchemaViolation, "unknown phase '" + std::string(text) + "'");
}

std::string EventRecord::to_line() const {
    json j{{"id", event_id}, {"kind", std::string(to_string(kind))}, {"at", recorded_at}, {"payload", payload}};
    return j.dump();
}

EventRecord EventRecord::from_line(std::string_view line) {
    return with_schema_errors("event record", [&] {
        json j = json::parse(line);
        EventRecord e;
        e.event_id = j.at("id").get<std::uint64_t>();
        e.kind = parse_event_kind(j.at("kind").get<std::string>());
        e.recorded_at = j.at("at").get<std::int64_t>();
        e.payload = j.at("payload");
        return e;
    });
}

std::int64_t now_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

const ParticipantRecord* StudySnapshot::find_participant(const std::string& participant_id) const {
    for (const auto& p : participants) {
        if (p.participant_id == participant_id) return &p;
    }
    return nullptr;
}

std::vector<SequenceResponse> StudySnapshot::response_list() const {
    std::vector<SequenceResponse> out;
    out.reserve(responses.size());
    for (const auto& [key, r] : responses) out.push_back(r);
    return out;
}

namespace {

const design::StudyDefinition& require_study(const StudySnapshot& s) {
    if (!s.study) throw Error(ErrorCode::SchemaViolation, "log has no StudyCreated event");
    return *s.study;
}

ParticipantRecord* participant_mut(StudySnapshot& s, const std::string& id) {
    for (auto& p : s.participants) {
        if (p.participant_id == id) return &p;
    }
    throw Error(ErrorCode::UnknownParticipant, "unknown participant '" + id + "'");
}

void check_familiarity(const design::StudyDefinition& study, const FamiliarityProfile& profile) {
    for (const auto& [area, level] : profile) {
        if (!study.find_area(area)) throw Error(ErrorCode::UnknownArea, "unknown area '" + area + "'");
    }
    std::string missing;
    for (const auto& a : study.areas) {
        if (!profile.contains(a.area_id)) missing += (missing.empty() ? "" : ", ") + a.area_id;
    }
    if (!missing.empty()) {
        throw Error(ErrorCode::IncompleteFamiliarity, "familiarity missing for area(s): " + missing);
    }
}

void check_response(const design::StudyDefinition& study, const StudySnapshot& s,
                    const SequenceResponse& r) {
    if (!s.find_participant(r.participant_id)) {
        throw Error(ErrorCode::UnknownParticipant, "unknown participant '" + r.participant_id + "'");
    }
    if (!study.find_sequence(r.sequence_id)) {
        throw Error(ErrorCode::UnknownSequence, "unknown sequence '" + r.sequence_id + "'");
    }
    if (r.guessed_area_id && !study.find_area(*r.guessed_area_id)) {
        throw Error(ErrorCode::UnknownArea, "unknown area '" + *r.guessed_area_id + "'");
    }
}

Phase next_phase(Phase p) {
    switch (p) {
    case Phase::PreViewing: return Phase::Familiarization;
    case Phase::Familiarization: return Phase::InDepth;
    case Phase::InDepth:
    case Phase::Complete: return Phase::Complete;
    }
    return Phase::Complete;
}

std::string string_field(const json& j, const char* key) {
    return with_schema_errors(key, [&] { return j.at(key).get<std::string>(); });
}

}  // namespace

void apply(StudySnapshot& state, const EventRecord& event) {
    const json& p = event.payload;
    switch (event.kind) {
    case EventKind::StudyCreated: {
        if (state.study) throw Error(ErrorCode::SchemaViolation, "study already created");
        auto def = design::parse_study_definition(p);
        auto report = design::validate_study(def, design::Strictness::Lenient);
        if (!report.passed()) {
            std::string msg = "invalid study definition:";
            for (const auto& f : report.findings) {
                if (f.severity == design::Severity::Error) msg += " [" + f.subject + "] " + f.message + ";";
            }
            throw Error(ErrorCode::InvalidDefinition, msg);
        }
        state.study = std::move(def);
        break;
    }
    case EventKind::ParticipantRegistered: {
        const auto& study = require_study(state);
        auto record = with_schema_errors("participant", [&] { return p.at("participant").get<ParticipantRecord>(); });
        std::string token = p.contains("token") ? string_field(p, "token") : std::string{};
        if (state.find_participant(record.participant_id)) {
            throw Error(ErrorCode::DuplicateParticipant,
                        "participant '" + record.participant_id + "' already registered");
        }
        if (!token.empty() && state.tokens.contains(token)) {
            throw Error(ErrorCode::DuplicateParticipant, "session token already in use");
        }
        if (!record.familiarity_profile.empty()) check_familiarity(study, record.familiarity_profile);
        if (!token.empty()) state.tokens[token] = record.participant_id;
        state.sessions[record.participant_id];
        state.participants.push_back(std::move(record));
        break;
    }
    case EventKind::FamiliaritySubmitted: {
        const auto& study = require_study(state);
        auto id = string_field(p, "participant_id");
        auto profile = with_schema_errors("familiarity", [&] { return familiarity_from_json(p.at("familiarity")); });
        auto* participant = participant_mut(state, id);
        check_familiarity(study, profile);
        participant->familiarity_profile = std::move(profile);
        break;
    }
    case EventKind::PhaseAdvanced: {
        const auto& study = require_study(state);
        auto id = string_field(p, "participant_id");
        auto to = parse_phase(string_field(p, "phase"));
        participant_mut(state, id);
        auto& session = state.sessions[id];
        if (!session.phase) {
            if (to != Phase::PreViewing) {
                throw Error(ErrorCode::WrongPhase, "session for '" + id + "' has not started");
            }
        } else if (*session.phase == Phase::Complete || to != next_phase(*session.phase)) {
            throw Error(ErrorCode::WrongPhase, "cannot move from " + std::string(to_string(*session.phase)) +
                                                   " to " + std::string(to_string(to)));
        }
        if (to == Phase::Complete) {
            for (const auto& seq : study.sequences) {
                if (!state.responses.contains({id, seq.sequence_id})) {
                    throw Error(ErrorCode::GateUnmet, "no response for sequence '" + seq.sequence_id + "'");
                }
            }
        }
        session.phase = to;
        session.phase_started_at[to] = event.recorded_at;
        break;
    }
    case EventKind::LoopRecorded: {
        const auto& study = require_study(state);
        auto id = string_field(p, "participant_id");
        auto seq = string_field(p, "sequence_id");
        auto phase = parse_phase(string_field(p, "phase"));
        participant_mut(state, id);
        if (!study.find_sequence(seq)) throw Error(ErrorCode::UnknownSequence, "unknown sequence '" + seq + "'");
        auto& session = state.sessions[id];
        if (phase != Phase::Familiarization && phase != Phase::InDepth) {
            throw Error(ErrorCode::WrongPhase, "loops are recorded only while viewing");
        }
        if (session.phase != phase) {
            throw Error(ErrorCode::WrongPhase, "loop phase does not match the session phase");
        }
        ++(phase == Phase::Familiarization ? session.familiarization_loops : session.in_depth_loops)[seq];
        break;
    }
    case EventKind::ResponseSubmitted:
    case EventKind::ResponseAmended: {
        const auto& study = require_study(state);
        auto r = with_schema_errors("response", [&] { return p.get<SequenceResponse>(); });
        check_response(study, state, r);
        ResponseKey key{r.participant_id, r.sequence_id};
        bool exists = state.responses.contains(key);
        if (event.kind == EventKind::ResponseSubmitted && exists) {
            throw Error(ErrorCode::DuplicateResponse,
                        "response for (" + r.participant_id + ", " + r.sequence_id + ") already submitted");
        }
        if (event.kind == EventKind::ResponseAmended && !exists) {
            throw Error(ErrorCode::BadRequest,
                        "no response for (" + r.participant_id + ", " + r.sequence_id + ") to amend");
        }
        state.responses[key] = std::move(r);
        break;
    }
    }
    state.last_event_id = event.event_id;
}

namespace {

struct ReplayResult {
    StudySnapshot state;
    std::vector<EventRecord> events;
    std::size_t good_bytes = 0;  // prefix length holding complete valid records
    bool torn = false;
    bool needs_newline = false;
};

ReplayResult replay_text(const std::string& text, std::vector<std::string>* warnings) {
    ReplayResult out;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        ++line_no;
        auto nl = text.find('\n', pos);
        bool terminated = nl != std::string::npos;
        std::string_view line(text.data() + pos, (terminated ? nl : text.size()) - pos);
        std::size_t next = terminated ? nl + 1 : text.size();
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos) {
            pos = next;
            out.good_bytes = next;
            continue;
        }
        try {
            auto event = EventRecord::from_line(line);
            if (event.event_id != out.state.last_event_id + 1) {
                throw Error(ErrorCode::CorruptLog, "expected event id " +
                                                       std::to_string(out.state.last_event_id + 1) +
                                                       ", found " + std::to_string(event.event_id));
            }
            apply(out.state, event);
            out.events.push_back(std::move(event));
        } catch (const Error& e) {
            if (!terminated) {
                if (warnings) {
                    warnings->push_back("ignored torn final record on line " + std::to_string(line_no) +
                                        ": " + e.what());
                }
                out.torn = true;
                return out;
            }
            throw Error(ErrorCode::CorruptLog, "line " + std::to_string(line_no) + ": " + e.what());
        }
        out.needs_newline = !terminated;
        pos = next;
        out.good_bytes = next;
    }
    return out;
}

}  // namespace

StudySnapshot replay(std::istream& log, std::vector<std::string>* warnings) {
    std::stringstream buffer;
    buffer << log.rdbuf();
    return replay_text(buffer.str(), warnings).state;
}

EventLog EventLog::in_memory() { return EventLog(); }

EventLog EventLog::open(const std::filesystem::path& path) {
    EventLog log;
    log.path_ = path;
    std::string text;
    if (std::filesystem::exists(path)) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path.string() + "'");
        std::stringstream buffer;
        buffer << in.rdbuf();
        text = buffer.str();
    } else if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    auto result = replay_text(text, &log.warnings_);
    if (result.torn) std::filesystem::resize_file(path, result.good_bytes);

    log.fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (log.fd_ < 0) {
        throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "': " + std::strerror(errno));
    }
    if (result.needs_newline && ::write(log.fd_, "\n", 1) != 1) {
        throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
    }
    log.state_ = std::move(result.state);
    log.events_ = std::move(result.events);
    return log;
}

EventLog::EventLog(EventLog&& other) noexcept
    : path_(std::move(other.path_)),
      fd_(std::exchange(other.fd_, -1)),
      state_(std::move(other.state_)),
      events_(std::move(other.events_)),
      warnings_(std::move(other.warnings_)) {}

EventLog& EventLog::operator=(EventLog&& other) noexcept {
    if (this != &other) {
        if (fd_ >= 0) ::close(fd_);
        path_ = std::move(other.path_);
        fd_ = std::exchange(other.fd_, -1);
        state_ = std::move(other.state_);
        events_ = std::move(other.events_);
        warnings_ = std::move(other.warnings_);
    }
    return *this;
}

EventLog::~EventLog() {
    if (fd_ >= 0) ::close(fd_);
}

std::uint64_t EventLog::append(EventKind kind, json payload, std::int64_t recorded_at) {
    EventRecord event{state_.last_event_id + 1, kind, std::move(payload), recorded_at};
    StudySnapshot next = state_;
    apply(next, event);

    if (fd_ >= 0) {
        std::string line = event.to_line() + "\n";
        std::size_t written = 0;
        while (written < line.size()) {
            auto n = ::write(fd_, line.data() + written, line.size() - written);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw Error(ErrorCode::IoError, std::string("append failed: ") + std::strerror(errno));
            }
            written += static_cast<std::size_t>(n);
        }
        if (::fsync(fd_) != 0) {
            throw Error(ErrorCode::IoError, std::string("fsync failed: ") + std::strerror(errno));
        }
    }
    state_ = std::move(next);
    events_.push_back(std::move(event));
    return state_.last_event_id;
}

// --- import / export --------------------------------------------------------

std::string_view to_string(ImportFormat format) {
    return format == ImportFormat::DelimitedTable ? "csv" : "jsonl";
}

ImportFormat parse_import_format(std::string_view text) {
    if (text == "csv") return ImportFormat::DelimitedTable;
    if (text == "jsonl") return ImportFormat::RecordPerLine;
    throw Error(ErrorCode::BadRequest, "unknown import format '" + std::string(text) + "'");
}

namespace {

using Record = std::map<std::string, std::string>;

// Feeds every data row as a column->value record. Returns false from `sink`
// are not needed: the sink records its own outcome.
template <class Sink>
void for_each_record(std::istream& in, ImportFormat format, const std::vector<std::string>& required,
                     Sink&& sink) {
    if (!in) throw Error(ErrorCode::IoError, "input is not readable");
    if (format == ImportFormat::DelimitedTable) {
        csv::Reader reader(in);
        std::vector<std::string> header;
        std::size_t row_no = 0;
        while (auto row = reader.next()) {
            auto fields = csv::texts(*row);
            if (fields.size() == 1 && fields[0].empty()) continue;
            if (header.empty()) {
                header = fields;
                for (const auto& col : required) {
                    if (std::find(header.begin(), header.end(), col) == header.end()) {
                        throw Error(ErrorCode::BadRequest, "missing column '" + col + "'");
                    }
                }
                continue;
            }
            ++row_no;
            if (fields.size() != header.size()) {
                sink(row_no, std::optional<Record>{}, "expected " + std::to_string(header.size()) +
                                                          " fields, found " + std::to_string(fields.size()));
                continue;
            }
            Record rec;
            for (std::size_t i = 0; i < header.size(); ++i) rec[header[i]] = fields[i];
            sink(row_no, std::optional<Record>(std::move(rec)), "");
        }
        return;
    }
    std::string line;
    std::size_t row_no = 0;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ++row_no;
        Record rec;
        try {
            json j = json::parse(line);
            if (!j.is_object()) throw Error(ErrorCode::SchemaViolation, "record is not an object");
            for (const auto& [k, v] : j.items()) {
                if (v.is_null()) {
                    rec[k] = "";
                } else if (v.is_string()) {
                    rec[k] = v.template get<std::string>();
                } else if (v.is_object()) {
                    for (const auto& [area, level] : v.items()) rec[k + ":" + area] = level.template get<std::string>();
                } else {
                    rec[k] = v.dump();
                }
            }
        } catch (const std::exception& e) {
            sink(row_no, std::optional<Record>{}, std::string("malformed record: ") + e.what());
            continue;
        }
        bool complete = true;
        for (const auto& col : required) {
            if (!rec.contains(col)) {
                sink(row_no, std::optional<Record>{}, "missing field '" + col + "'");
                complete = false;
                break;
            }
        }
        if (complete) sink(row_no, std::optional<Record>(std::move(rec)), "");
    }
}

std::string get(const Record& r, const std::string& key) {
    auto it = r.find(key);
    return it == r.end() ? std::string{} : it->second;
}

std::string reason_for(const Error& e) {
    switch (e.code()) {
    case ErrorCode::UnknownArea: return std::string("unknown area: ") + e.what();
    case ErrorCode::UnknownSequence: return std::string("unknown sequence: ") + e.what();
    case ErrorCode::DuplicateResponse: return std::string("duplicate response: ") + e.what();
    case ErrorCode::DuplicateParticipant: return std::string("duplicate participant: ") + e.what();
    default: return e.what();
    }
}

const std::vector<std::string> kResponseColumns = {"participant_id", "group", "sequence_id", "guessed_area_id",
                                                   "q2", "q3", "q4", "q5"};

}  // namespace

IngestReport import_responses(std::istream& in, ImportFormat format, EventLog& log) {
    IngestReport report;
    for_each_record(in, format, kResponseColumns,
                    [&](std::size_t row, std::optional<Record> rec, const std::string& problem) {
        if (!rec) {
            report.rejected.push_back({row, problem});
            return;
        }
        try {
            const auto& state = log.state();
            const auto& study = require_study(state);
            SequenceResponse r;
            r.participant_id = get(*rec, "participant_id");
            r.sequence_id = get(*rec, "sequence_id");
            auto guess = get(*rec, "guessed_area_id");
            if (!guess.empty()) r.guessed_area_id = guess;
            r.q2_text = get(*rec, "q2");
            r.q3_text = get(*rec, "q3");
            r.q4_text = get(*rec, "q4");
            r.q5_text = get(*rec, "q5");
            if (auto loops = get(*rec, "loops_viewed"); !loops.empty()) {
                std::size_t used = 0;
                int v = std::stoi(loops, &used);
                if (used != loops.size() || v < 0) throw Error(ErrorCode::SchemaViolation, "bad loops_viewed");
                r.loops_viewed = v;
            }
            if (r.participant_id.empty()) throw Error(ErrorCode::SchemaViolation, "empty participant_id");
            auto group = parse_participant_group(get(*rec, "group"));

            const auto* existing = state.find_participant(r.participant_id);
            if (existing && existing->group != group) {
                throw Error(ErrorCode::SchemaViolation, "group mismatch for '" + r.participant_id + "'");
            }
            if (!study.find_sequence(r.sequence_id)) {
                throw Error(ErrorCode::UnknownSequence, "'" + r.sequence_id + "'");
            }
            if (r.guessed_area_id && !study.find_area(*r.guessed_area_id)) {
                throw Error(ErrorCode::UnknownArea, "'" + *r.guessed_area_id + "'");
            }
            if (state.responses.contains({r.participant_id, r.sequence_id})) {
                throw Error(ErrorCode::DuplicateResponse, "(" + r.participant_id + ", " + r.sequence_id + ")");
            }
            if (!existing) {
                ParticipantRecord p;
                p.participant_id = r.participant_id;
                p.group = group;
                log.append(EventKind::ParticipantRegistered, json{{"participant", p}});
            }
            log.append(EventKind::ResponseSubmitted, json(r));
            ++report.accepted;
        } catch (const Error& e) {
            report.rejected.push_back({row, reason_for(e)});
        } catch (const std::exception& e) {
            report.rejected.push_back({row, e.what()});
        }
    });
    return report;
}

IngestReport import_participants(std::istream& in, ImportFormat format, EventLog& log) {
    IngestReport report;
    for_each_record(in, format, {"participant_id", "group"},
                    [&](std::size_t row, std::optional<Record> rec, const std::string& problem) {
        if (!rec) {
            report.rejected.push_back({row, problem});
            return;
        }
        try {
            const auto& study = require_study(log.state());
            ParticipantRecord p;
            p.participant_id = get(*rec, "participant_id");
            p.group = parse_participant_group(get(*rec, "group"));
            if (auto age = get(*rec, "age"); !age.empty()) {
                std::size_t used = 0;
                p.age = std::stoi(age, &used);
                if (used != age.size()) throw Error(ErrorCode::SchemaViolation, "bad age '" + age + "'");
            }
            if (auto res = get(*rec, "residence"); !res.empty()) p.residence = parse_residence_bucket(res);
            if (auto prof = get(*rec, "profession"); !prof.empty()) p.profession = prof;
            if (auto ai = get(*rec, "ai_familiarity"); !ai.empty()) p.ai_familiarity = ai;
            for (const auto& [col, value] : *rec) {
                constexpr std::string_view prefix = "fam:";
                if (col.rfind(prefix, 0) == 0 && !value.empty()) {
                    p.familiarity_profile[col.substr(prefix.size())] = parse_familiarity_level(value);
                }
            }
            if (!p.familiarity_profile.empty()) check_familiarity(study, p.familiarity_profile);
            log.append(EventKind::ParticipantRegistered, json{{"participant", p}});
            ++report.accepted;
        } catch (const Error& e) {
            report.rejected.push_back({row, reason_for(e)});
        } catch (const std::exception& e) {
            report.rejected.push_back({row, e.what()});
        }
    });
    return report;
}

void export_responses(const StudySnapshot& snapshot, ImportFormat format, std::ostream& out) {
    auto group_of = [&](const std::string& id) {
        const auto* p = snapshot.find_participant(id);
        return p ? std::string(to_string(p->group)) : std::string{};
    };
    if (format == ImportFormat::DelimitedTable) {
        auto cols = kResponseColumns;
        cols.push_back("loops_viewed");
        out << csv::join(cols) << "\n";
        for (const auto& [key, r] : snapshot.responses) {
            out << csv::join({r.participant_id, group_of(r.participant_id), r.sequence_id,
                              r.guessed_area_id.value_or(""), r.q2_text, r.q3_text, r.q4_text, r.q5_text,
                              std::to_string(r.loops_viewed)})
                << "\n";
        }
        return;
    }
    for (const auto& [key, r] : snapshot.responses) {
        json j{{"participant_id", r.participant_id}, {"group", group_of(r.participant_id)},
               {"sequence_id", r.sequence_id},       {"guessed_area_id", r.guessed_area_id.value_or("")},
               {"q2", r.q2_text},                    {"q3", r.q3_text},
               {"q4", r.q4_text},                    {"q5", r.q5_text},
               {"loops_viewed", std::to_string(r.loops_viewed)}};
        out << j.dump() << "\n";
    }
}

void export_participants(const StudySnapshot& snapshot, ImportFormat format, std::ostream& out) {
    std::vector<std::string> area_ids;
    if (snapshot.study) {
        for (const auto& a : snapshot.study->areas) area_ids.push_back(a.area_id);
    }
    auto base = [](const ParticipantRecord& p) {
        return std::vector<std::string>{p.participant_id,
                                        std::string(to_string(p.group)),
                                        p.age ? std::to_string(*p.age) : "",
                                        p.residence ? std::string(to_string(*p.residence)) : "",
                                        p.profession.value_or(""),
                                        p.ai_familiarity.value_or("")};
    };
    auto level = [](const ParticipantRecord& p, const std::string& area) {
        auto it = p.familiarity_profile.find(area);
        return it == p.familiarity_profile.end() ? std::string{} : std::string(to_string(it->second));
    };
    if (format == ImportFormat::DelimitedTable) {
        std::vector<std::string> header = {"participant_id", "group", "age", "residence", "profession",
                                           "ai_familiarity"};
        for (const auto& a : area_ids) header.push_back("fam:" + a);
        out << csv::join(header) << "\n";
        for (const auto& p : snapshot.participants) {
            auto fields = base(p);
            for (const auto& a : area_ids) fields.push_back(level(p, a));
            out << csv::join(fields) << "\n";
        }
        return;
    }
    for (const auto& p : snapshot.participants) {
        auto fields = base(p);
        json j{{"participant_id", fields[0]}, {"group", fields[1]},      {"age", fields[2]},
               {"residence", fields[3]},      {"profession", fields[4]}, {"ai_familiarity", fields[5]}};
        json fam = json::object();
        for (const auto& a : area_ids) {
            if (auto l = level(p, a); !l.empty()) fam[a] = l;
        }
        j["fam"] = fam;
        out << j.dump() << "\n";
    }
}

}  // namespace vu::store
