#include "vu/model.hpp"

#include <set>

#include "vu/error.hpp"

namespace vu {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::BadRequest: return "bad_request";
    case ErrorCode::SchemaViolation: return "schema_violation";
    case ErrorCode::InvalidDefinition: return "invalid_definition";
    case ErrorCode::UnknownStudy: return "unknown_study";
    case ErrorCode::UnknownParticipant: return "unknown_participant";
    case ErrorCode::UnknownSequence: return "unknown_sequence";
    case ErrorCode::UnknownArea: return "unknown_area";
    case ErrorCode::DuplicateParticipant: return "duplicate_participant";
    case ErrorCode::DuplicateResponse: return "duplicate_response";
    case ErrorCode::DuplicateArea: return "duplicate_area";
    case ErrorCode::DuplicateStudy: return "duplicate_study";
    case ErrorCode::WrongPhase: return "wrong_phase";
    case ErrorCode::IncompleteFamiliarity: return "incomplete_familiarity";
    case ErrorCode::GateUnmet: return "gate_unmet";
    case ErrorCode::InsufficientData: return "insufficient_data";
    case ErrorCode::InvalidGrid: return "invalid_grid";
    case ErrorCode::InvalidZoneLimits: return "invalid_zone_limits";
    case ErrorCode::CorruptLog: return "corrupt_log";
    case ErrorCode::IoError: return "io_error";
    case ErrorCode::Unsatisfiable: return "unsatisfiable";
    }
    return "unknown";
}

std::string_view to_string(FamiliarityLevel level) {
    switch (level) {
    case FamiliarityLevel::NotFamiliar: return "not_familiar";
    case FamiliarityLevel::QuickVisits: return "quick_visits";
    case FamiliarityLevel::RegularAttendance: return "regular_attendance";
    case FamiliarityLevel::ContinuousResidence: return "continuous_residence";
    }
    return "not_familiar";
}

std::string_view to_string(ParticipantGroup group) {
    return group == ParticipantGroup::Local ? "local" : "foreign";
}

std::string_view to_string(GroupView view) {
    switch (view) {
    case GroupView::General: return "general";
    case GroupView::Local: return "local";
    case GroupView::Foreign: return "foreign";
    }
    return "general";
}

std::string_view to_string(ResidenceBucket bucket) {
    switch (bucket) {
    case ResidenceBucket::UpTo1Year: return "<=1y";
    case ResidenceBucket::OneToThreeYears: return "1-3y";
    case ResidenceBucket::ThreeToFiveYears: return "3-5y";
    case ResidenceBucket::FiveYearsOrMore: return ">=5y";
    }
    return "<=1y";
}

FamiliarityLevel parse_familiarity_level(std::string_view text) {
    for (auto level : kFamiliarityLevels) {
        if (to_string(level) == text) return level;
    }
    throw Error(ErrorCode::SchemaViolation, "unknown familiarity level '" + std::string(text) + "'");
}

ParticipantGroup parse_participant_group(std::string_view text) {
    if (text == "local") return ParticipantGroup::Local;
    if (text == "foreign") return ParticipantGroup::Foreign;
    throw Error(ErrorCode::SchemaViolation, "unknown participant group '" + std::string(text) + "'");
}

GroupView parse_group_view(std::string_view text) {
    if (text == "general") return GroupView::General;
    if (text == "local") return GroupView::Local;
    if (text == "foreign") return GroupView::Foreign;
    throw Error(ErrorCode::BadRequest, "unknown group '" + std::string(text) + "'");
}

ResidenceBucket parse_residence_bucket(std::string_view text) {
    for (auto bucket : kResidenceBuckets) {
        if (to_string(bucket) == text) return bucket;
    }
    throw Error(ErrorCode::SchemaViolation, "unknown residence bucket '" + std::string(text) + "'");
}

const std::vector<std::string>& CohortPartition::view(GroupView v) const {
    switch (v) {
    case GroupView::Local: return local;
    case GroupView::Foreign: return foreign;
    case GroupView::General: break;
    }
    return general;
}

CohortPartition partition_cohort(std::span<const ParticipantRecord> participants) {
    CohortPartition out;
    std::set<std::string_view> seen;
    for (const auto& p : participants) {
        if (!seen.insert(p.participant_id).second) {
            throw Error(ErrorCode::DuplicateParticipant,
                        "duplicate participant_id '" + p.participant_id + "'");
        }
        out.general.push_back(p.participant_id);
        (p.group == ParticipantGroup::Local ? out.local : out.foreign).push_back(p.participant_id);
    }
    return out;
}

CohortSummary summarize_cohort(std::span<const ParticipantRecord> participants) {
    CohortSummary s;
    for (auto bucket : kResidenceBuckets) s.residence[bucket] = 0;
    for (const auto& p : participants) {
        ++s.size;
        ++(p.group == ParticipantGroup::Local ? s.local : s.foreign);
        if (p.residence) {
            ++s.residence[*p.residence];
        } else {
            ++s.residence_unspecified;
        }
        if (p.age) {
            s.age_min = s.age_min ? std::min(*s.age_min, *p.age) : *p.age;
            s.age_max = s.age_max ? std::max(*s.age_max, *p.age) : *p.age;
        } else {
            ++s.age_unspecified;
        }
        ++s.professions[p.profession.value_or("unspecified")];
    }
    return s;
}

}  // namespace vu
