#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "vu/design.hpp"
#include "vu/model.hpp"
#include "vu/report.hpp"
#include "vu/store.hpp"

namespace vu::service {

using store::Phase;

/// What a participant client sees. Fully derived from the event log, so a
/// reloaded client can resume from it.
struct SessionView {
    std::string study_id;
    std::string participant_id;
    std::optional<Phase> phase;
    std::map<Phase, std::int64_t> phase_started_at;
    design::PhaseSchedule schedule;
    std::vector<std::string> sequence_order;  // presentation order, neutral sequence ids
    std::map<std::string, int> familiarization_loops;
    std::map<std::string, int> in_depth_loops;
    std::vector<std::string> responded;  // sequence ids with a stored response
    std::optional<std::string> current_sequence;  // InDepth: first unanswered in order
    bool familiarity_submitted = false;
    std::vector<std::string> remaining;  // what the next advance still needs
    std::map<std::string, std::string> advisories;  // sequence_id -> warning
};

json to_json(const SessionView& v);

struct Registration {
    std::string study_id;
    std::string participant_id;
    std::string token;
};

/// Multi-study engine behind the HTTP API and `vu serve`. Each study has its
/// own event log and a reader/writer lock: mutations on a study are
/// serialized, reads run concurrently against the current snapshot.
class Service {
public:
    /// With a data directory each study persists to <dir>/<study_id>/events.log
    /// and existing studies are loaded. Without one everything is in memory.
    explicit Service(std::optional<std::filesystem::path> data_dir = std::nullopt);
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Token source; defaults to 128 bits from std::random_device.
    void set_token_source(std::function<std::string()> source);

    /// Rejects on validation errors (pipeline findings count only when Strict).
    std::string create_study(const design::StudyDefinition& definition,
                             design::Strictness strictness = design::Strictness::Lenient);
    std::vector<std::string> study_ids() const;
    design::StudyDefinition study(const std::string& study_id) const;

    /// An empty participant_id gets the next free "P<n>" label.
    Registration register_participant(const std::string& study_id, ParticipantRecord attrs);

    SessionView start_session(const std::string& token);  // idempotent
    SessionView get_session(const std::string& token) const;
    SessionView submit_familiarity(const std::string& token, const FamiliarityProfile& profile);
    SessionView record_loop(const std::string& token, const std::string& sequence_id);
    SessionView advance_phase(const std::string& token);
    /// participant_id in `response` is ignored; the token decides. A second
    /// submission for a sequence amends the first. The final missing response
    /// completes the session.
    SessionView submit_response(const std::string& token, SequenceResponse response);

    report::ReportDocument get_report(const std::string& study_id, report::ReportKind kind,
                                      const report::ReportOptions& options = {}) const;
    design::StimulusManifest stimulus(const std::string& study_id, const std::string& sequence_id) const;
    store::StudySnapshot snapshot(const std::string& study_id) const;

    /// Bulk ingestion into an existing study, serialized with other writers.
    store::IngestReport import_responses(const std::string& study_id, std::istream& in,
                                         store::ImportFormat format);
    store::IngestReport import_participants(const std::string& study_id, std::istream& in,
                                            store::ImportFormat format);

    /// Deterministic per-participant presentation order.
    static std::vector<std::string> presentation_order(const design::StudyDefinition& study,
                                                       const std::string& participant_id);

private:
    struct Study;

    std::shared_ptr<Study> find_study(const std::string& study_id) const;
    std::pair<std::shared_ptr<Study>, std::string> resolve(const std::string& token) const;
    static SessionView view(const Study& s, const std::string& participant_id);

    std::optional<std::filesystem::path> data_dir_;
    mutable std::shared_mutex mutex_;  // guards studies_ and tokens_
    std::map<std::string, std::shared_ptr<Study>> studies_;
    std::map<std::string, std::string> tokens_;  // token -> study_id
    std::function<std::string()> token_source_;
};

}  // namespace vu::service
