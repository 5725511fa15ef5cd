#include "vu/metrics.hpp"

#include <algorithm>
#include <limits>

#include "vu/error.hpp"

namespace vu::metrics {

int display_percent(const Rational& r) {
    // floor(100 p / q + 1/2) = floor((200 p + q) / (2 q)) for p/q >= 0
    const auto p = r.numerator();
    const auto q = r.denominator();
    return static_cast<int>((200 * p + q) / (2 * q));
}

RatePercent::RatePercent(Rational exact) : exact_(exact) {
    if (exact_ < 0 || exact_ > 1) {
        throw Error(ErrorCode::BadRequest, "rate outside [0, 1]");
    }
}

int RatePercent::display() const { return display_percent(exact_); }

double RatePercent::as_double() const { return boost::rational_cast<double>(exact_); }

std::strong_ordering RatePercent::compare(const RatePercent& other) const {
    if (exact_ < other.exact_) return std::strong_ordering::less;
    if (other.exact_ < exact_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string_view to_string(BlankPolicy policy) {
    return policy == BlankPolicy::ExcludeFromT ? "exclude" : "incorrect";
}

BlankPolicy parse_blank_policy(std::string_view text) {
    if (text == "exclude") return BlankPolicy::ExcludeFromT;
    if (text == "incorrect") return BlankPolicy::BlanksCountIncorrect;
    throw Error(ErrorCode::BadRequest, "unknown blank policy '" + std::string(text) + "'");
}

GroupIndex group_index(std::span<const ParticipantRecord> participants) {
    GroupIndex idx;
    for (const auto& p : participants) idx[p.participant_id] = p.group;
    return idx;
}

RatePercent familiarity_rate(std::span<const FamiliarityLevel> levels) {
    if (levels.empty()) {
        throw Error(ErrorCode::InsufficientData, "familiarity rate undefined for zero respondents");
    }
    std::int64_t tenths = 0;
    for (auto level : levels) tenths += familiarity_weight_tenths(level);
    return RatePercent(Rational(tenths, 10 * static_cast<std::int64_t>(levels.size())));
}

std::vector<FamiliarityLevel> familiarity_levels(std::span<const ParticipantRecord> participants,
                                                 const std::string& area_id, GroupView view) {
    std::vector<FamiliarityLevel> out;
    for (const auto& p : participants) {
        if (!group_in_view(p.group, view)) continue;
        auto it = p.familiarity_profile.find(area_id);
        if (it != p.familiarity_profile.end()) out.push_back(it->second);
    }
    return out;
}

RatePercent accuracy_rate(const AccuracyInputs& inputs) {
    if (inputs.considered <= 0) {
        throw Error(ErrorCode::InsufficientData, "accuracy rate undefined for zero assignments");
    }
    if (inputs.correct < 0 || inputs.correct > inputs.considered) {
        throw Error(ErrorCode::BadRequest, "correct count must lie within [0, considered]");
    }
    return RatePercent(Rational(inputs.correct, inputs.considered));
}

namespace {

const std::string& true_area(const AnswerKey& key, const std::string& sequence_id) {
    auto it = key.find(sequence_id);
    if (it == key.end()) {
        throw Error(ErrorCode::UnknownSequence, "unknown sequence '" + sequence_id + "'");
    }
    return it->second;
}

void tally(const SequenceResponse& r, const AnswerKey& key, BlankPolicy policy, AccuracyResult& acc) {
    const auto& area = true_area(key, r.sequence_id);
    if (r.is_blank()) {
        ++acc.blanks;
        if (policy == BlankPolicy::BlanksCountIncorrect) ++acc.inputs.considered;
        return;
    }
    ++acc.inputs.considered;
    if (*r.guessed_area_id == area) ++acc.inputs.correct;
}

AccuracyResult finish(AccuracyResult acc, const std::string& what) {
    if (acc.inputs.considered == 0) {
        throw Error(ErrorCode::InsufficientData, "no considered responses for " + what);
    }
    acc.rate = accuracy_rate(acc.inputs);
    return acc;
}

}  // namespace

AccuracyResult accuracy_per_participant(std::span<const SequenceResponse> responses,
                                        const AnswerKey& key, const std::string& participant_id,
                                        BlankPolicy policy) {
    AccuracyResult acc;
    for (const auto& r : responses) {
        if (r.participant_id == participant_id) tally(r, key, policy, acc);
    }
    return finish(acc, "participant '" + participant_id + "'");
}

AccuracyResult uil_per_sequence(std::span<const SequenceResponse> responses, const AnswerKey& key,
                                const GroupIndex& groups, const std::string& sequence_id,
                                GroupView view, BlankPolicy policy) {
    true_area(key, sequence_id);
    AccuracyResult acc;
    for (const auto& r : responses) {
        if (r.sequence_id != sequence_id) continue;
        auto g = groups.find(r.participant_id);
        if (g == groups.end() || !group_in_view(g->second, view)) continue;
        tally(r, key, policy, acc);
    }
    return finish(acc, "sequence '" + sequence_id + "' in group " + std::string(to_string(view)));
}

AccuracyResult cohort_mean_accuracy(std::span<const SequenceResponse> responses,
                                    const AnswerKey& key, const GroupIndex& groups, GroupView view,
                                    BlankPolicy policy) {
    AccuracyResult acc;
    for (const auto& r : responses) {
        auto g = groups.find(r.participant_id);
        if (g == groups.end() || !group_in_view(g->second, view)) continue;
        tally(r, key, policy, acc);
    }
    return finish(acc, "group " + std::string(to_string(view)));
}

std::map<int, std::size_t> accuracy_histogram(std::span<const SequenceResponse> responses,
                                              const AnswerKey& key, BlankPolicy policy,
                                              const GroupIndex* groups, GroupView view) {
    std::map<std::string, AccuracyResult> per_participant;
    for (const auto& r : responses) {
        if (groups) {
            auto g = groups->find(r.participant_id);
            if (g == groups->end() || !group_in_view(g->second, view)) continue;
        }
        tally(r, key, policy, per_participant[r.participant_id]);
    }
    std::map<int, std::size_t> bins;
    for (const auto& [pid, acc] : per_participant) {
        if (acc.inputs.considered == 0) continue;
        ++bins[accuracy_rate(acc.inputs).display()];
    }
    return bins;
}

std::string_view to_string(MetricKind kind) {
    return kind == MetricKind::UIL ? "uil" : "familiarity_rate";
}

const RankedRow* RankedTable::find(const std::string& area_id) const {
    for (const auto& row : rows) {
        if (row.area_id == area_id) return &row;
    }
    return nullptr;
}

RankedTable rank_table(const std::map<std::string, RatePercent>& values, MetricKind kind,
                       GroupView group, std::span<const StudyArea> areas) {
    auto origin = [&](const std::string& id) {
        for (const auto& a : areas) {
            if (a.area_id == id) return a.origin_rank;
        }
        return std::numeric_limits<int>::max();
    };
    RankedTable table{kind, group, {}};
    for (const auto& [area, value] : values) table.rows.push_back({area, value, 0});
    std::sort(table.rows.begin(), table.rows.end(), [&](const RankedRow& a, const RankedRow& b) {
        if (a.metric != b.metric) return a.metric > b.metric;
        int oa = origin(a.area_id), ob = origin(b.area_id);
        if (oa != ob) return oa < ob;
        return a.area_id < b.area_id;
    });
    for (std::size_t i = 0; i < table.rows.size(); ++i) table.rows[i].rank = static_cast<int>(i) + 1;
    return table;
}

std::string_view to_string(Marker marker) {
    switch (marker) {
    case Marker::Up: return "up";
    case Marker::Down: return "down";
    case Marker::Aligned: return "aligned";
    case Marker::None: return "none";
    }
    return "none";
}

std::string_view arrow(Marker marker) {
    switch (marker) {
    case Marker::Up: return "▲";
    case Marker::Down: return "▼";
    case Marker::Aligned: return "◀→";
    case Marker::None: return "";
    }
    return "";
}

std::vector<DivergenceMarker> divergence_markers(const RankedTable& uil_table,
                                                 const RankedTable& fr_table, int threshold,
                                                 const std::set<std::string>& highlighted) {
    if (threshold < 1) throw Error(ErrorCode::BadRequest, "threshold must be at least 1");
    if (uil_table.group != fr_table.group) {
        throw Error(ErrorCode::BadRequest, "tables belong to different groups");
    }
    std::set<std::string> a, b;
    for (const auto& r : uil_table.rows) a.insert(r.area_id);
    for (const auto& r : fr_table.rows) b.insert(r.area_id);
    if (a != b) {
        std::string msg = "area sets differ:";
        for (const auto& id : a) {
            if (!b.contains(id)) msg += " -" + id;
        }
        for (const auto& id : b) {
            if (!a.contains(id)) msg += " +" + id;
        }
        throw Error(ErrorCode::BadRequest, msg);
    }

    std::vector<DivergenceMarker> out;
    for (const auto& row : uil_table.rows) {
        int delta = fr_table.find(row.area_id)->rank - row.rank;
        Marker m = Marker::None;
        if (delta >= threshold) {
            m = Marker::Up;
        } else if (delta <= -threshold) {
            m = Marker::Down;
        } else if (highlighted.contains(row.area_id)) {
            m = Marker::Aligned;
        }
        out.push_back({row.area_id, m, delta});
    }
    return out;
}

}  // namespace vu::metrics
