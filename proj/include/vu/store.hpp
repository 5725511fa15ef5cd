#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vu/design.hpp"
#include "vu/model.hpp"
#include "vu/serialize.hpp"

namespace vu::store {

enum class EventKind {
    StudyCreated,
    ParticipantRegistered,
    FamiliaritySubmitted,
    PhaseAdvanced,
    LoopRecorded,
    ResponseSubmitted,
    ResponseAmended,
};

std::string_view to_string(EventKind kind);
EventKind parse_event_kind(std::string_view text);

enum class Phase { PreViewing, Familiarization, InDepth, Complete };

std::string_view to_string(Phase phase);
Phase parse_phase(std::string_view text);

struct EventRecord {
    std::uint64_t event_id = 0;
    EventKind kind = EventKind::StudyCreated;
    json payload;
    std::int64_t recorded_at = 0;  // unix milliseconds

    std::string to_line() const;  // one JSON object, no trailing newline
    static EventRecord from_line(std::string_view line);
};

struct SessionProgress {
    std::optional<Phase> phase;  // nullopt until the session is started
    std::map<Phase, std::int64_t> phase_started_at;
    std::map<std::string, int> familiarization_loops;  // per sequence
    std::map<std::string, int> in_depth_loops;         // per sequence

    // Timestamps are excluded.
    bool operator==(const SessionProgress& o) const {
        return phase == o.phase && familiarization_loops == o.familiarization_loops &&
               in_depth_loops == o.in_depth_loops;
    }
};

using ResponseKey = std::pair<std::string, std::string>;  // (participant_id, sequence_id)

/// Materialized state of one study's event log.
struct StudySnapshot {
    std::optional<design::StudyDefinition> study;
    std::vector<ParticipantRecord> participants;  // registration order
    std::map<std::string, std::string> tokens;    // session token -> participant_id
    std::map<ResponseKey, SequenceResponse> responses;
    std::map<std::string, SessionProgress> sessions;
    std::uint64_t last_event_id = 0;

    const ParticipantRecord* find_participant(const std::string& participant_id) const;
    std::vector<SequenceResponse> response_list() const;  // ordered by key

    bool operator==(const StudySnapshot& o) const {
        return study == o.study && participants == o.participants && tokens == o.tokens &&
               responses == o.responses && sessions == o.sessions;
    }
};

/// Validates `event` against `state` and applies it. Nothing is modified when
/// it throws. Rejections carry SchemaViolation, UnknownParticipant,
/// UnknownSequence, UnknownArea, DuplicateParticipant, DuplicateResponse,
/// IncompleteFamiliarity, WrongPhase or InvalidDefinition.
void apply(StudySnapshot& state, const EventRecord& event);

/// Replays a log. Throws CorruptLog naming the line for malformed or
/// out-of-sequence records. A malformed final line without a terminating
/// newline is treated as a torn write: ignored, with a warning.
StudySnapshot replay(std::istream& log, std::vector<std::string>* warnings = nullptr);

std::int64_t now_ms();

/// Append-only event log. With a path, every append is written and fsynced
/// before returning; without one, events live in memory only. Not internally
/// synchronized: callers serialize writers.
class EventLog {
public:
    static EventLog in_memory();
    /// Opens (creating if absent) and replays. A torn tail is cut off.
    static EventLog open(const std::filesystem::path& path);

    EventLog(EventLog&&) noexcept;
    EventLog& operator=(EventLog&&) noexcept;
    ~EventLog();

    std::uint64_t append(EventKind kind, json payload, std::int64_t recorded_at = now_ms());

    const StudySnapshot& state() const { return state_; }
    const std::vector<EventRecord>& events() const { return events_; }
    const std::vector<std::string>& warnings() const { return warnings_; }
    const std::optional<std::filesystem::path>& path() const { return path_; }

private:
    EventLog() = default;

    std::optional<std::filesystem::path> path_;
    int fd_ = -1;
    StudySnapshot state_;
    std::vector<EventRecord> events_;
    std::vector<std::string> warnings_;
};

enum class ImportFormat { DelimitedTable, RecordPerLine };

std::string_view to_string(ImportFormat format);
ImportFormat parse_import_format(std::string_view text);  // "csv" | "jsonl"

struct RejectedRow {
    std::size_t row = 0;  // 1-based data row (header excluded)
    std::string reason;

    bool operator==(const RejectedRow&) const = default;
};

struct IngestReport {
    std::size_t accepted = 0;
    std::vector<RejectedRow> rejected;
};

/// Columns: participant_id, group, sequence_id, guessed_area_id, q2, q3, q4,
/// q5 and optionally loops_viewed. Unknown participants are registered with
/// the row's group. Each row is applied atomically.
IngestReport import_responses(std::istream& in, ImportFormat format, EventLog& log);

/// Columns: participant_id, group, age, residence, profession,
/// ai_familiarity and one "fam:<area_id>" column per area. A participant
/// row with any familiarity column filled must cover every area.
IngestReport import_participants(std::istream& in, ImportFormat format, EventLog& log);

void export_responses(const StudySnapshot& snapshot, ImportFormat format, std::ostream& out);
void export_participants(const StudySnapshot& snapshot, ImportFormat format, std::ostream& out);

}  // namespace vu::store
