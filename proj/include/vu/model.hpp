#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

namespace vu {

using Rational = boost::rational<std::int64_t>;

// Four-level exposure scale collected by questionnaire item 0.
enum class FamiliarityLevel { NotFamiliar, QuickVisits, RegularAttendance, ContinuousResidence };

inline constexpr std::array<FamiliarityLevel, 4> kFamiliarityLevels = {
    FamiliarityLevel::NotFamiliar, FamiliarityLevel::QuickVisits,
    FamiliarityLevel::RegularAttendance, FamiliarityLevel::ContinuousResidence};

/// Exposure weight in tenths: 0, 4, 7, 10.
constexpr int familiarity_weight_tenths(FamiliarityLevel level) {
    switch (level) {
    case FamiliarityLevel::NotFamiliar: return 0;
    case FamiliarityLevel::QuickVisits: return 4;
    case FamiliarityLevel::RegularAttendance: return 7;
    case FamiliarityLevel::ContinuousResidence: return 10;
    }
    return 0;
}

inline Rational familiarity_weight(FamiliarityLevel level) {
    return Rational(familiarity_weight_tenths(level), 10);
}

// Stored group. "General" is the union view and only exists in GroupView.
enum class ParticipantGroup { Local, Foreign };
enum class GroupView { General, Local, Foreign };

inline bool group_in_view(ParticipantGroup group, GroupView view) {
    switch (view) {
    case GroupView::General: return true;
    case GroupView::Local: return group == ParticipantGroup::Local;
    case GroupView::Foreign: return group == ParticipantGroup::Foreign;
    }
    return false;
}

enum class ResidenceBucket { UpTo1Year, OneToThreeYears, ThreeToFiveYears, FiveYearsOrMore };

inline constexpr std::array<ResidenceBucket, 4> kResidenceBuckets = {
    ResidenceBucket::UpTo1Year, ResidenceBucket::OneToThreeYears,
    ResidenceBucket::ThreeToFiveYears, ResidenceBucket::FiveYearsOrMore};

std::string_view to_string(FamiliarityLevel level);
std::string_view to_string(ParticipantGroup group);
std::string_view to_string(GroupView view);
std::string_view to_string(ResidenceBucket bucket);

// Parsers throw vu::Error(SchemaViolation) on unknown labels.
FamiliarityLevel parse_familiarity_level(std::string_view text);
ParticipantGroup parse_participant_group(std::string_view text);
GroupView parse_group_view(std::string_view text);
ResidenceBucket parse_residence_bucket(std::string_view text);

struct StudyArea {
    std::string area_id;
    std::string display_name;
    int origin_rank = 0;  // 1 = most organic

    bool operator==(const StudyArea&) const = default;
};

using FamiliarityProfile = std::map<std::string, FamiliarityLevel>;

struct ParticipantRecord {
    std::string participant_id;
    ParticipantGroup group = ParticipantGroup::Local;
    std::optional<int> age;
    std::optional<ResidenceBucket> residence;
    std::optional<std::string> profession;
    std::optional<std::string> ai_familiarity;
    FamiliarityProfile familiarity_profile;

    bool operator==(const ParticipantRecord&) const = default;
};

struct SequenceResponse {
    std::string participant_id;
    std::string sequence_id;
    std::optional<std::string> guessed_area_id;  // nullopt = blank guess
    std::string q2_text;
    std::string q3_text;
    std::string q4_text;
    std::string q5_text;
    std::int64_t submitted_at = 0;  // unix milliseconds
    int loops_viewed = 0;

    bool is_blank() const { return !guessed_area_id.has_value(); }

    std::array<std::string_view, 4> free_text() const {
        return {q2_text, q3_text, q4_text, q5_text};
    }

    // submitted_at is bookkeeping and does not take part in equality.
    bool operator==(const SequenceResponse& other) const {
        return participant_id == other.participant_id && sequence_id == other.sequence_id &&
               guessed_area_id == other.guessed_area_id && q2_text == other.q2_text &&
               q3_text == other.q3_text && q4_text == other.q4_text &&
               q5_text == other.q5_text && loops_viewed == other.loops_viewed;
    }
};

struct CohortPartition {
    std::vector<std::string> general;
    std::vector<std::string> local;
    std::vector<std::string> foreign;

    const std::vector<std::string>& view(GroupView v) const;
};

/// Splits a cohort into Local and Foreign, keeping input order; General is
/// their union. Throws DuplicateParticipant naming the repeated id.
CohortPartition partition_cohort(std::span<const ParticipantRecord> participants);

struct CohortSummary {
    std::size_t size = 0;
    std::size_t local = 0;
    std::size_t foreign = 0;
    std::map<ResidenceBucket, std::size_t> residence;  // all four buckets present
    std::size_t residence_unspecified = 0;
    std::optional<int> age_min;
    std::optional<int> age_max;
    std::size_t age_unspecified = 0;
    std::map<std::string, std::size_t> professions;  // "unspecified" for missing
};

CohortSummary summarize_cohort(std::span<const ParticipantRecord> participants);

}  // namespace vu
