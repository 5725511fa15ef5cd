#include "vu/service.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <mutex>
#include <random>

#include "vu/error.hpp"
#include "vu/hash.hpp"

namespace vu::service {

struct Service::Study {
    mutable std::shared_mutex mutex;
    store::EventLog log;

    explicit Study(store::EventLog l) : log(std::move(l)) {}
};

namespace {

std::string random_token() {
    static std::mutex m;
    static std::random_device rd;
    std::lock_guard lock(m);
    char buf[33];
    for (int i = 0; i < 4; ++i) std::snprintf(buf + 8 * i, 9, "%08x", static_cast<unsigned>(rd()));
    return std::string(buf, 32);
}

void check_study_id(const std::string& id) {
    bool ok = !id.empty() && id.size() <= 64 && id != "." && id != "..";
    for (char c : id) {
        ok = ok && (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.');
    }
    if (!ok) {
        throw Error(ErrorCode::InvalidDefinition,
                    "study_id must be 1-64 characters of letters, digits, '-', '_' or '.'");
    }
}

}  // namespace

json to_json(const SessionView& v) {
    json started = json::object();
    for (const auto& [phase, at] : v.phase_started_at) started[std::string(store::to_string(phase))] = at;
    json j{{"study_id", v.study_id},
           {"participant_id", v.participant_id},
           {"phase", v.phase ? json(std::string(store::to_string(*v.phase))) : json(nullptr)},
           {"phase_started_at", std::move(started)},
           {"schedule", v.schedule},
           {"sequence_order", v.sequence_order},
           {"familiarization_loops", v.familiarization_loops},
           {"in_depth_loops", v.in_depth_loops},
           {"responded", v.responded},
           {"current_sequence", v.current_sequence ? json(*v.current_sequence) : json(nullptr)},
           {"familiarity_submitted", v.familiarity_submitted},
           {"remaining", v.remaining},
           {"advisories", v.advisories}};
    return j;
}

Service::Service(std::optional<std::filesystem::path> data_dir)
    : data_dir_(std::move(data_dir)), token_source_(random_token) {
    if (!data_dir_) return;
    std::filesystem::create_directories(*data_dir_);
    std::vector<std::filesystem::path> dirs;
    for (const auto& entry : std::filesystem::directory_iterator(*data_dir_)) {
        if (entry.is_directory() && std::filesystem::exists(entry.path() / "events.log")) dirs.push_back(entry.path());
    }
    std::sort(dirs.begin(), dirs.end());
    for (const auto& dir : dirs) {
        auto log = store::EventLog::open(dir / "events.log");
        if (!log.state().study) continue;
        const auto id = log.state().study->study_id;
        for (const auto& [token, pid] : log.state().tokens) tokens_[token] = id;
        studies_[id] = std::make_shared<Study>(std::move(log));
    }
}

Service::~Service() = default;

void Service::set_token_source(std::function<std::string()> source) {
    std::unique_lock lock(mutex_);
    token_source_ = std::move(source);
}

std::string Service::create_study(const design::StudyDefinition& definition, design::Strictness strictness) {
    check_study_id(definition.study_id);
    auto report = design::validate_study(definition, strictness);
    if (!report.passed()) {
        std::string msg = "invalid study definition:";
        for (const auto& f : report.findings) {
            if (f.severity == design::Severity::Error) msg += " [" + f.subject + "] " + f.message + ";";
        }
        throw Error(ErrorCode::InvalidDefinition, msg);
    }
    std::unique_lock lock(mutex_);
    if (studies_.contains(definition.study_id)) {
        throw Error(ErrorCode::DuplicateStudy, "study '" + definition.study_id + "' already exists");
    }
    auto log = store::EventLog::in_memory();
    if (data_dir_) {
        auto path = *data_dir_ / definition.study_id / "events.log";
        if (std::filesystem::exists(path) && std::filesystem::file_size(path) > 0) {
            throw Error(ErrorCode::DuplicateStudy, "a log for '" + definition.study_id + "' already exists");
        }
        log = store::EventLog::open(path);
    }
    log.append(store::EventKind::StudyCreated, json(definition));
    studies_[definition.study_id] = std::make_shared<Study>(std::move(log));
    return definition.study_id;
}

std::vector<std::string> Service::study_ids() const {
    std::shared_lock lock(mutex_);
    std::vector<std::string> ids;
    for (const auto& [id, s] : studies_) ids.push_back(id);
    return ids;
}

std::shared_ptr<Service::Study> Service::find_study(const std::string& study_id) const {
    std::shared_lock lock(mutex_);
    auto it = studies_.find(study_id);
    if (it == studies_.end()) throw Error(ErrorCode::UnknownStudy, "unknown study '" + study_id + "'");
    return it->second;
}

std::pair<std::shared_ptr<Service::Study>, std::string> Service::resolve(const std::string& token) const {
    std::string study_id;
    {
        std::shared_lock lock(mutex_);
        auto it = tokens_.find(token);
        if (it == tokens_.end()) throw Error(ErrorCode::UnknownParticipant, "unknown session token");
        study_id = it->second;
    }
    auto study = find_study(study_id);
    std::shared_lock lock(study->mutex);
    return {study, study->log.state().tokens.at(token)};
}

design::StudyDefinition Service::study(const std::string& study_id) const {
    auto s = find_study(study_id);
    std::shared_lock lock(s->mutex);
    return *s->log.state().study;
}

Registration Service::register_participant(const std::string& study_id, ParticipantRecord attrs) {
    auto s = find_study(study_id);
    std::string token;
    {
        std::unique_lock registry(mutex_);
        do {
            token = token_source_();
        } while (tokens_.contains(token));
    }
    {
        std::unique_lock lock(s->mutex);
        const auto& state = s->log.state();
        if (attrs.participant_id.empty()) {
            for (std::size_t n = state.participants.size() + 1;; ++n) {
                auto candidate = "P" + std::to_string(n);
                if (!state.find_participant(candidate)) {
                    attrs.participant_id = candidate;
                    break;
                }
            }
        }
        s->log.append(store::EventKind::ParticipantRegistered, json{{"participant", attrs}, {"token", token}});
    }
    std::unique_lock registry(mutex_);
    tokens_[token] = study_id;
    return {study_id, attrs.participant_id, token};
}

std::vector<std::string> Service::presentation_order(const design::StudyDefinition& study,
                                                     const std::string& participant_id) {
    std::vector<std::string> order;
    for (const auto& seq : study.sequences) order.push_back(seq.sequence_id);
    seeded_shuffle(order, study.presentation_seed ^ splitmix64(fnv1a(participant_id)));
    return order;
}

SessionView Service::view(const Study& s, const std::string& participant_id) {
    const auto& state = s.log.state();
    const auto& study = *state.study;
    const auto& progress = state.sessions.at(participant_id);
    const auto* participant = state.find_participant(participant_id);

    SessionView v;
    v.study_id = study.study_id;
    v.participant_id = participant_id;
    v.phase = progress.phase;
    v.phase_started_at = progress.phase_started_at;
    v.schedule = study.schedule;
    v.sequence_order = presentation_order(study, participant_id);
    v.familiarization_loops = progress.familiarization_loops;
    v.in_depth_loops = progress.in_depth_loops;
    v.familiarity_submitted = !participant->familiarity_profile.empty();
    for (const auto& seq : v.sequence_order) {
        auto it = state.responses.find({participant_id, seq});
        if (it == state.responses.end()) continue;
        v.responded.push_back(seq);
        if (it->second.loops_viewed < study.schedule.in_depth_loops_per_sequence) {
            v.advisories[seq] = "viewed " + std::to_string(it->second.loops_viewed) + " of " +
                                std::to_string(study.schedule.in_depth_loops_per_sequence) + " loops";
        }
    }
    if (!v.phase) {
        v.remaining.push_back("session not started");
        return v;
    }
    switch (*v.phase) {
    case Phase::PreViewing:
        if (!v.familiarity_submitted) v.remaining.push_back("familiarity profile");
        break;
    case Phase::Familiarization:
        for (const auto& seq : v.sequence_order) {
            auto it = progress.familiarization_loops.find(seq);
            int done = it == progress.familiarization_loops.end() ? 0 : it->second;
            if (done < study.schedule.familiarization_loops) {
                v.remaining.push_back(seq + ": " + std::to_string(done) + " of " +
                                      std::to_string(study.schedule.familiarization_loops) + " loops");
            }
        }
        break;
    case Phase::InDepth:
        for (const auto& seq : v.sequence_order) {
            if (!state.responses.contains({participant_id, seq})) {
                if (!v.current_sequence) v.current_sequence = seq;
                v.remaining.push_back(seq + ": response missing");
            }
        }
        break;
    case Phase::Complete: break;
    }
    return v;
}

SessionView Service::start_session(const std::string& token) {
    auto [s, pid] = resolve(token);
    std::unique_lock lock(s->mutex);
    if (!s->log.state().sessions.at(pid).phase) {
        s->log.append(store::EventKind::PhaseAdvanced, json{{"participant_id", pid}, {"phase", "pre_viewing"}});
    }
    return view(*s, pid);
}

SessionView Service::get_session(const std::string& token) const {
    auto [s, pid] = resolve(token);
    std::shared_lock lock(s->mutex);
    return view(*s, pid);
}

namespace {

Phase require_phase(const store::StudySnapshot& state, const std::string& pid) {
    const auto& phase = state.sessions.at(pid).phase;
    if (!phase) throw Error(ErrorCode::WrongPhase, "session not started");
    return *phase;
}

std::string phase_name(Phase p) { return std::string(store::to_string(p)); }

}  // namespace

SessionView Service::submit_familiarity(const std::string& token, const FamiliarityProfile& profile) {
    auto [s, pid] = resolve(token);
    std::unique_lock lock(s->mutex);
    auto phase = require_phase(s->log.state(), pid);
    if (phase != Phase::PreViewing) {
        throw Error(ErrorCode::WrongPhase, "phase already passed: session is in " + phase_name(phase));
    }
    s->log.append(store::EventKind::FamiliaritySubmitted,
                  json{{"participant_id", pid}, {"familiarity", familiarity_to_json(profile)}});
    s->log.append(store::EventKind::PhaseAdvanced, json{{"participant_id", pid}, {"phase", "familiarization"}});
    return view(*s, pid);
}

SessionView Service::record_loop(const std::string& token, const std::string& sequence_id) {
    auto [s, pid] = resolve(token);
    std::unique_lock lock(s->mutex);
    auto phase = require_phase(s->log.state(), pid);
    if (phase != Phase::Familiarization && phase != Phase::InDepth) {
        throw Error(ErrorCode::WrongPhase, "loops are recorded only while viewing; session is in " + phase_name(phase));
    }
    s->log.append(store::EventKind::LoopRecorded,
                  json{{"participant_id", pid}, {"sequence_id", sequence_id}, {"phase", phase_name(phase)}});
    return view(*s, pid);
}

SessionView Service::advance_phase(const std::string& token) {
    auto [s, pid] = resolve(token);
    std::unique_lock lock(s->mutex);
    auto phase = require_phase(s->log.state(), pid);
    if (phase == Phase::Complete) throw Error(ErrorCode::WrongPhase, "session is already complete");
    auto current = view(*s, pid);
    if (!current.remaining.empty()) {
        std::string msg = "cannot leave " + phase_name(phase) + ", still needed:";
        for (const auto& r : current.remaining) msg += " " + r + ";";
        throw Error(ErrorCode::GateUnmet, msg);
    }
    Phase next = phase == Phase::PreViewing        ? Phase::Familiarization
                 : phase == Phase::Familiarization ? Phase::InDepth
                                                   : Phase::Complete;
    s->log.append(store::EventKind::PhaseAdvanced, json{{"participant_id", pid}, {"phase", phase_name(next)}});
    return view(*s, pid);
}

SessionView Service::submit_response(const std::string& token, SequenceResponse response) {
    auto [s, pid] = resolve(token);
    std::unique_lock lock(s->mutex);
    const auto& state = s->log.state();
    auto phase = require_phase(state, pid);
    if (phase != Phase::InDepth) {
        throw Error(ErrorCode::WrongPhase, "responses are accepted only in in_depth; session is in " + phase_name(phase));
    }
    response.participant_id = pid;
    if (response.submitted_at == 0) response.submitted_at = store::now_ms();
    if (response.loops_viewed == 0) {
        const auto& loops = state.sessions.at(pid).in_depth_loops;
        if (auto it = loops.find(response.sequence_id); it != loops.end()) response.loops_viewed = it->second;
    }
    bool amend = state.responses.contains({pid, response.sequence_id});
    s->log.append(amend ? store::EventKind::ResponseAmended : store::EventKind::ResponseSubmitted, json(response));
    if (view(*s, pid).remaining.empty()) {
        s->log.append(store::EventKind::PhaseAdvanced, json{{"participant_id", pid}, {"phase", "complete"}});
    }
    return view(*s, pid);
}

report::ReportDocument Service::get_report(const std::string& study_id, report::ReportKind kind,
                                           const report::ReportOptions& options) const {
    auto s = find_study(study_id);
    std::shared_lock lock(s->mutex);
    return report::build_report(s->log.state(), kind, options);
}

design::StimulusManifest Service::stimulus(const std::string& study_id, const std::string& sequence_id) const {
    auto s = find_study(study_id);
    std::shared_lock lock(s->mutex);
    const auto* m = s->log.state().study->find_sequence(sequence_id);
    if (!m) throw Error(ErrorCode::UnknownSequence, "unknown sequence '" + sequence_id + "'");
    return *m;
}

store::StudySnapshot Service::snapshot(const std::string& study_id) const {
    auto s = find_study(study_id);
    std::shared_lock lock(s->mutex);
    return s->log.state();
}

store::IngestReport Service::import_responses(const std::string& study_id, std::istream& in,
                                              store::ImportFormat format) {
    auto s = find_study(study_id);
    std::unique_lock lock(s->mutex);
    return store::import_responses(in, format, s->log);
}

store::IngestReport Service::import_participants(const std::string& study_id, std::istream& in,
                                                 store::ImportFormat format) {
    auto s = find_study(study_id);
    std::unique_lock lock(s->mutex);
    return store::import_participants(in, format, s->log);
}

}  // namespace vu::service
