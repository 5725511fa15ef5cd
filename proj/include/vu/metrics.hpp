#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "vu/model.hpp"

namespace vu::metrics {

/// An exact rate in [0, 1] with integer-percent presentation. All comparisons
/// use the exact value; rounding (half away from zero) happens only in display().
class RatePercent {
public:
    RatePercent() = default;
    explicit RatePercent(Rational exact);

    const Rational& exact() const { return exact_; }
    int display() const;
    double as_double() const;

    auto operator<=>(const RatePercent& other) const { return compare(other); }
    bool operator==(const RatePercent& other) const { return exact_ == other.exact_; }

private:
    std::strong_ordering compare(const RatePercent& other) const;
    Rational exact_{0};
};

/// round(p/q * 100), half away from zero, for 0 <= p/q.
int display_percent(const Rational& r);

struct AccuracyInputs {
    std::int64_t correct = 0;     // C
    std::int64_t considered = 0;  // T

    bool operator==(const AccuracyInputs&) const = default;
};

enum class BlankPolicy { ExcludeFromT, BlanksCountIncorrect };

std::string_view to_string(BlankPolicy policy);
BlankPolicy parse_blank_policy(std::string_view text);  // "exclude" | "incorrect"

struct AccuracyResult {
    RatePercent rate;
    AccuracyInputs inputs;
    std::int64_t blanks = 0;

    bool operator==(const AccuracyResult&) const = default;
};

using AnswerKey = std::map<std::string, std::string>;        // sequence_id -> area_id
using GroupIndex = std::map<std::string, ParticipantGroup>;  // participant_id -> group

GroupIndex group_index(std::span<const ParticipantRecord> participants);

/// Mean exposure weight over respondents. Throws InsufficientData when empty.
RatePercent familiarity_rate(std::span<const FamiliarityLevel> levels);

/// Familiarity levels for one area among the participants in a view.
/// Participants without a level for the area are skipped.
std::vector<FamiliarityLevel> familiarity_levels(std::span<const ParticipantRecord> participants,
                                                 const std::string& area_id, GroupView view);

/// C / T. Throws InsufficientData when T = 0 and BadRequest when C > T or C < 0.
RatePercent accuracy_rate(const AccuracyInputs& inputs);

AccuracyResult accuracy_per_participant(std::span<const SequenceResponse> responses,
                                        const AnswerKey& key, const std::string& participant_id,
                                        BlankPolicy policy = BlankPolicy::ExcludeFromT);

/// Per-sequence accuracy (the Urban Identity Level) within a group view.
AccuracyResult uil_per_sequence(std::span<const SequenceResponse> responses, const AnswerKey& key,
                                const GroupIndex& groups, const std::string& sequence_id,
                                GroupView view, BlankPolicy policy = BlankPolicy::ExcludeFromT);

/// Total correct over total considered across the view.
AccuracyResult cohort_mean_accuracy(std::span<const SequenceResponse> responses,
                                    const AnswerKey& key, const GroupIndex& groups, GroupView view,
                                    BlankPolicy policy = BlankPolicy::ExcludeFromT);

/// Display percent -> number of participants. Only participants with at
/// least one considered response are counted. When `groups` is given only
/// participants in `view` are included.
std::map<int, std::size_t> accuracy_histogram(std::span<const SequenceResponse> responses,
                                              const AnswerKey& key,
                                              BlankPolicy policy = BlankPolicy::ExcludeFromT,
                                              const GroupIndex* groups = nullptr,
                                              GroupView view = GroupView::General);

enum class MetricKind { UIL, FamiliarityRate };

std::string_view to_string(MetricKind kind);

struct RankedRow {
    std::string area_id;
    RatePercent metric;
    int rank = 0;

    bool operator==(const RankedRow&) const = default;
};

struct RankedTable {
    MetricKind metric_kind = MetricKind::UIL;
    GroupView group = GroupView::General;
    std::vector<RankedRow> rows;

    const RankedRow* find(const std::string& area_id) const;

    bool operator==(const RankedTable&) const = default;
};

/// Descending by exact value; ties by ascending origin rank, then area_id.
/// Areas absent from `areas` sort after every declared area in a tie.
RankedTable rank_table(const std::map<std::string, RatePercent>& values, MetricKind kind,
                       GroupView group, std::span<const StudyArea> areas);

enum class Marker { Up, Down, Aligned, None };

std::string_view to_string(Marker marker);
std::string_view arrow(Marker marker);  // ▲ ▼ ◀→ or empty

struct DivergenceMarker {
    std::string area_id;
    Marker marker = Marker::None;
    int rank_delta = 0;  // familiarity rank - UIL rank

    bool operator==(const DivergenceMarker&) const = default;
};

inline constexpr int kDefaultDivergenceThreshold = 2;

/// One marker per area in UIL-table order. Up when the area ranks at least
/// `threshold` places better on accuracy than on familiarity, Down for the
/// reverse; areas in `highlighted` that fall inside the threshold are Aligned.
/// Throws BadRequest on mismatched area sets/groups or threshold < 1.
std::vector<DivergenceMarker> divergence_markers(const RankedTable& uil_table,
                                                 const RankedTable& fr_table,
                                                 int threshold = kDefaultDivergenceThreshold,
                                                 const std::set<std::string>& highlighted = {});

}  // namespace vu::metrics
