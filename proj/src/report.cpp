#include "vu/report.hpp"

#include <algorithm>
#include <sstream>

#include "vu/csv.hpp"
#include "vu/design.hpp"
#include "vu/error.hpp"

namespace vu::report {

std::string_view to_string(ReportKind kind) {
    switch (kind) {
    case ReportKind::Metrics: return "metrics";
    case ReportKind::Semantic: return "semantic";
    case ReportKind::Demographics: return "demographics";
    case ReportKind::Histogram: return "histogram";
    }
    return "metrics";
}

ReportKind parse_report_kind(std::string_view text) {
    for (auto k : {ReportKind::Metrics, ReportKind::Semantic, ReportKind::Demographics, ReportKind::Histogram}) {
        if (to_string(k) == text) return k;
    }
    throw Error(ErrorCode::BadRequest, "unknown report kind '" + std::string(text) + "'");
}

const Table* ReportDocument::find_table(const std::string& name) const {
    for (const auto& t : tables) {
        if (t.name == name) return &t;
    }
    return nullptr;
}

namespace {

using metrics::RatePercent;

Cell str(std::string_view s) { return Cell(std::string(s)); }
Cell num(std::int64_t v) { return Cell(v); }
Cell null() { return Cell(std::monostate{}); }

std::vector<StudyArea> areas_by_origin(const design::StudyDefinition& study) {
    auto areas = study.areas;
    std::sort(areas.begin(), areas.end(),
              [](const StudyArea& a, const StudyArea& b) { return a.origin_rank < b.origin_rank; });
    return areas;
}

std::vector<SequenceResponse> responses_in_view(const store::StudySnapshot& snap, GroupView view) {
    std::vector<SequenceResponse> out;
    for (const auto& [key, r] : snap.responses) {
        const auto* p = snap.find_participant(r.participant_id);
        if (p && group_in_view(p->group, view)) out.push_back(r);
    }
    return out;
}

ReportDocument base_document(ReportKind kind, const ReportOptions& options) {
    ReportDocument doc;
    doc.kind = kind;
    doc.group = options.group;
    return doc;
}

ReportDocument insufficient(ReportDocument doc, std::string why) {
    doc.status = "insufficient_data";
    doc.notes.push_back(std::move(why));
    doc.tables.clear();
    return doc;
}

ReportDocument metrics_report(const store::StudySnapshot& snap, const ReportOptions& options) {
    auto doc = base_document(ReportKind::Metrics, options);
    doc.parameters["policy"] = std::string(metrics::to_string(options.policy));
    doc.parameters["threshold"] = std::to_string(options.threshold);
    if (!snap.study) return insufficient(std::move(doc), "study has no definition");
    const auto& study = *snap.study;
    const auto key = design::answer_key(study);
    const auto groups = metrics::group_index(snap.participants);
    const auto responses = responses_in_view(snap, options.group);
    if (responses.empty()) return insufficient(std::move(doc), "no responses in this group");

    // per area: UIL over the area's sequences, FR over the group's profiles
    std::map<std::string, metrics::AccuracyResult> uil;
    std::map<std::string, RatePercent> uil_values, fr_values;
    std::map<std::string, std::pair<std::int64_t, std::int64_t>> fr_parts;  // tenths, respondents
    for (const auto& area : study.areas) {
        metrics::AccuracyResult acc;
        for (const auto& seq : study.sequences) {
            if (seq.area_id != area.area_id) continue;
            try {
                auto r = metrics::uil_per_sequence(responses, key, groups, seq.sequence_id, options.group,
                                                   options.policy);
                acc.inputs.correct += r.inputs.correct;
                acc.inputs.considered += r.inputs.considered;
                acc.blanks += r.blanks;
            } catch (const Error& e) {
                if (e.code() != ErrorCode::InsufficientData) throw;
            }
        }
        if (acc.inputs.considered > 0) {
            acc.rate = metrics::accuracy_rate(acc.inputs);
            uil[area.area_id] = acc;
            uil_values[area.area_id] = acc.rate;
        }
        auto levels = metrics::familiarity_levels(snap.participants, area.area_id, options.group);
        if (!levels.empty()) {
            fr_values[area.area_id] = metrics::familiarity_rate(levels);
            std::int64_t tenths = 0;
            for (auto l : levels) tenths += familiarity_weight_tenths(l);
            fr_parts[area.area_id] = {tenths, static_cast<std::int64_t>(levels.size())};
        }
    }
    if (uil_values.empty()) return insufficient(std::move(doc), "no considered responses in this group");

    auto uil_table = metrics::rank_table(uil_values, metrics::MetricKind::UIL, options.group, study.areas);
    auto fr_table = metrics::rank_table(fr_values, metrics::MetricKind::FamiliarityRate, options.group, study.areas);
    std::map<std::string, metrics::DivergenceMarker> markers;
    bool same_areas = uil_values.size() == fr_values.size() &&
                      std::equal(uil_values.begin(), uil_values.end(), fr_values.begin(),
                                 [](const auto& a, const auto& b) { return a.first == b.first; });
    if (same_areas) {
        for (auto& m : metrics::divergence_markers(uil_table, fr_table, options.threshold, options.highlighted)) {
            markers[m.area_id] = m;
        }
    } else {
        doc.notes.push_back("markers omitted: accuracy and familiarity cover different areas");
    }

    Table ranking{"ranking",
                  {"uil_rank", "area_id", "display_name", "origin_rank", "uil_percent", "uil_correct",
                   "uil_considered", "uil_blanks", "fr_rank", "fr_percent", "fr_weight_tenths",
                   "fr_respondents", "rank_delta", "marker"},
                  {}};
    auto add_row = [&](const StudyArea& area, const metrics::RankedRow* row) {
        std::vector<Cell> cells;
        cells.push_back(row ? num(row->rank) : null());
        cells.push_back(str(area.area_id));
        cells.push_back(str(area.display_name));
        cells.push_back(num(area.origin_rank));
        if (row) {
            const auto& acc = uil.at(area.area_id);
            cells.push_back(num(acc.rate.display()));
            cells.push_back(num(acc.inputs.correct));
            cells.push_back(num(acc.inputs.considered));
            cells.push_back(num(acc.blanks));
        } else {
            for (int i = 0; i < 4; ++i) cells.push_back(null());
        }
        if (const auto* fr = fr_table.find(area.area_id)) {
            cells.push_back(num(fr->rank));
            cells.push_back(num(fr->metric.display()));
            cells.push_back(num(fr_parts.at(area.area_id).first));
            cells.push_back(num(fr_parts.at(area.area_id).second));
        } else {
            for (int i = 0; i < 4; ++i) cells.push_back(null());
        }
        if (auto it = markers.find(area.area_id); it != markers.end()) {
            cells.push_back(num(it->second.rank_delta));
            cells.push_back(str(metrics::to_string(it->second.marker)));
        } else {
            cells.push_back(null());
            cells.push_back(null());
        }
        ranking.rows.push_back(std::move(cells));
    };
    for (const auto& row : uil_table.rows) add_row(*study.find_area(row.area_id), &row);
    for (const auto& area : areas_by_origin(study)) {
        if (!uil_table.find(area.area_id)) add_row(area, nullptr);
    }

    Table familiarity{"familiarity", {"fr_rank", "area_id", "display_name", "fr_percent"}, {}};
    for (const auto& row : fr_table.rows) {
        familiarity.rows.push_back({num(row.rank), str(row.area_id), str(study.find_area(row.area_id)->display_name),
                                    num(row.metric.display())});
    }

    auto mean = metrics::cohort_mean_accuracy(responses, key, groups, options.group, options.policy);
    Table summary{"summary", {"field", "value"}, {}};
    summary.rows.push_back({str("participants"), num(static_cast<std::int64_t>(
                                                     std::count_if(snap.participants.begin(), snap.participants.end(),
                                                                   [&](const ParticipantRecord& p) {
                                                                       return group_in_view(p.group, options.group);
                                                                   })))});
    summary.rows.push_back({str("mean_accuracy_percent"), num(mean.rate.display())});
    summary.rows.push_back({str("correct"), num(mean.inputs.correct)});
    summary.rows.push_back({str("considered"), num(mean.inputs.considered)});
    summary.rows.push_back({str("blanks"), num(mean.blanks)});

    doc.tables = {std::move(ranking), std::move(familiarity), std::move(summary)};
    return doc;
}

ReportDocument semantic_report(const store::StudySnapshot& snap, const ReportOptions& options) {
    auto doc = base_document(ReportKind::Semantic, options);
    const auto& lexicon = options.lexicon ? *options.lexicon : semantic::starter_lexicon();
    doc.parameters["k"] = std::to_string(options.k);
    doc.parameters["lexicon"] = lexicon.version();
    if (options.k < 1) throw Error(ErrorCode::BadRequest, "k must be at least 1");
    if (!snap.study) return insufficient(std::move(doc), "study has no definition");
    const auto& study = *snap.study;
    const auto responses = snap.response_list();
    const auto groups = metrics::group_index(snap.participants);
    semantic::FrequencyOptions freq;
    freq.group = options.group;
    auto table = semantic::element_frequencies(responses, study.areas, design::answer_key(study), lexicon, freq,
                                               &groups);
    std::size_t correct = 0;
    for (const auto& [area, stats] : table.stats) correct += stats.correct_responses;
    if (correct == 0) return insufficient(std::move(doc), "no correctly identified responses in this group");
    auto top = semantic::top_k_elements(table, options.k);

    Table elements{"elements", {"area_id", "display_name", "rank", "group", "theme", "term", "count"}, {}};
    Table coverage{"coverage",
                   {"area_id", "correct_responses", "hits", "matched_tokens", "unmatched_tokens", "total_tokens"},
                   {}};
    for (const auto& area : areas_by_origin(study)) {
        const auto& rows = top.by_area.at(area.area_id);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            elements.rows.push_back({str(area.area_id), str(area.display_name), num(static_cast<std::int64_t>(i + 1)),
                                     str(semantic::to_string(rows[i].group)),
                                     str(semantic::to_string(semantic::project_theme(rows[i].group))),
                                     str(rows[i].canonical_term), num(static_cast<std::int64_t>(rows[i].count))});
        }
        const auto& s = table.stats.at(area.area_id);
        coverage.rows.push_back({str(area.area_id), num(static_cast<std::int64_t>(s.correct_responses)),
                                 num(static_cast<std::int64_t>(s.hits)), num(static_cast<std::int64_t>(s.matched_tokens)),
                                 num(static_cast<std::int64_t>(s.unmatched_tokens)),
                                 num(static_cast<std::int64_t>(s.total_tokens))});
    }
    doc.tables = {std::move(elements), std::move(coverage)};
    return doc;
}

ReportDocument demographics_report(const store::StudySnapshot& snap, const ReportOptions& options) {
    auto doc = base_document(ReportKind::Demographics, options);
    std::vector<ParticipantRecord> members;
    for (const auto& p : snap.participants) {
        if (group_in_view(p.group, options.group)) members.push_back(p);
    }
    if (members.empty()) return insufficient(std::move(doc), "no participants in this group");
    auto summary = summarize_cohort(members);

    auto opt = [](const std::optional<int>& v) { return v ? num(*v) : null(); };
    Table cohort{"cohort", {"field", "value"}, {}};
    cohort.rows.push_back({str("participants"), num(static_cast<std::int64_t>(summary.size))});
    cohort.rows.push_back({str("local"), num(static_cast<std::int64_t>(summary.local))});
    cohort.rows.push_back({str("foreign"), num(static_cast<std::int64_t>(summary.foreign))});
    cohort.rows.push_back({str("age_min"), opt(summary.age_min)});
    cohort.rows.push_back({str("age_max"), opt(summary.age_max)});
    cohort.rows.push_back({str("age_unspecified"), num(static_cast<std::int64_t>(summary.age_unspecified))});
    cohort.rows.push_back(
        {str("residence_unspecified"), num(static_cast<std::int64_t>(summary.residence_unspecified))});

    Table residence{"residence", {"bucket", "local", "foreign", "total"}, {}};
    for (auto bucket : kResidenceBuckets) {
        std::int64_t local = 0, foreign = 0;
        for (const auto& p : members) {
            if (p.residence != bucket) continue;
            ++(p.group == ParticipantGroup::Local ? local : foreign);
        }
        residence.rows.push_back({str(to_string(bucket)), num(local), num(foreign), num(local + foreign)});
    }

    Table professions{"professions", {"profession", "participants"}, {}};
    for (const auto& [name, count] : summary.professions) {
        professions.rows.push_back({str(name), num(static_cast<std::int64_t>(count))});
    }
    doc.tables = {std::move(cohort), std::move(residence), std::move(professions)};
    return doc;
}

ReportDocument histogram_report(const store::StudySnapshot& snap, const ReportOptions& options) {
    auto doc = base_document(ReportKind::Histogram, options);
    doc.parameters["policy"] = std::string(metrics::to_string(options.policy));
    if (!snap.study) return insufficient(std::move(doc), "study has no definition");
    const auto key = design::answer_key(*snap.study);
    const auto responses = responses_in_view(snap, options.group);

    Table participants{"participants",
                       {"participant_id", "group", "correct", "considered", "blanks", "accuracy_percent"},
                       {}};
    std::int64_t min_pct = 101, max_pct = -1;
    for (const auto& p : snap.participants) {
        if (!group_in_view(p.group, options.group)) continue;
        try {
            auto acc = metrics::accuracy_per_participant(responses, key, p.participant_id, options.policy);
            participants.rows.push_back({str(p.participant_id), str(to_string(p.group)), num(acc.inputs.correct),
                                         num(acc.inputs.considered), num(acc.blanks), num(acc.rate.display())});
            min_pct = std::min<std::int64_t>(min_pct, acc.rate.display());
            max_pct = std::max<std::int64_t>(max_pct, acc.rate.display());
        } catch (const Error& e) {
            if (e.code() != ErrorCode::InsufficientData) throw;
        }
    }
    if (participants.rows.empty()) return insufficient(std::move(doc), "no considered responses in this group");

    Table bins{"bins", {"accuracy_percent", "participants"}, {}};
    for (const auto& [pct, count] : metrics::accuracy_histogram(responses, key, options.policy)) {
        bins.rows.push_back({num(pct), num(static_cast<std::int64_t>(count))});
    }
    const auto groups = metrics::group_index(snap.participants);
    auto mean = metrics::cohort_mean_accuracy(responses, key, groups, options.group, options.policy);
    Table summary{"summary", {"field", "value"}, {}};
    summary.rows.push_back({str("participants"), num(static_cast<std::int64_t>(participants.rows.size()))});
    summary.rows.push_back({str("mean_accuracy_percent"), num(mean.rate.display())});
    summary.rows.push_back({str("min_accuracy_percent"), num(min_pct)});
    summary.rows.push_back({str("max_accuracy_percent"), num(max_pct)});
    summary.rows.push_back({str("correct"), num(mean.inputs.correct)});
    summary.rows.push_back({str("considered"), num(mean.inputs.considered)});
    summary.rows.push_back({str("blanks"), num(mean.blanks)});
    doc.tables = {std::move(participants), std::move(bins), std::move(summary)};
    return doc;
}

}  // namespace

ReportDocument build_report(const store::StudySnapshot& snapshot, ReportKind kind, const ReportOptions& options) {
    switch (kind) {
    case ReportKind::Metrics: return metrics_report(snapshot, options);
    case ReportKind::Semantic: return semantic_report(snapshot, options);
    case ReportKind::Demographics: return demographics_report(snapshot, options);
    case ReportKind::Histogram: return histogram_report(snapshot, options);
    }
    throw Error(ErrorCode::BadRequest, "unknown report kind");
}

// --- renders ----------------------------------------------------------------

namespace {

json cell_json(const Cell& c) {
    if (std::holds_alternative<std::int64_t>(c)) return std::get<std::int64_t>(c);
    if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
    return nullptr;
}

Cell cell_from_json(const json& j) {
    if (j.is_null()) return null();
    if (j.is_number_integer()) return num(j.get<std::int64_t>());
    if (j.is_string()) return str(j.get<std::string>());
    throw Error(ErrorCode::SchemaViolation, "report cells are integers, strings or null");
}

}  // namespace

json to_json(const ReportDocument& doc) {
    json tables = json::array();
    for (const auto& t : doc.tables) {
        json rows = json::array();
        for (const auto& row : t.rows) {
            json r = json::array();
            for (const auto& c : row) r.push_back(cell_json(c));
            rows.push_back(std::move(r));
        }
        tables.push_back({{"name", t.name}, {"columns", t.columns}, {"rows", std::move(rows)}});
    }
    json j{{"kind", std::string(to_string(doc.kind))},
           {"group", std::string(to_string(doc.group))},
           {"status", doc.status},
           {"parameters", doc.parameters},
           {"notes", doc.notes},
           {"tables", std::move(tables)}};
    if (doc.generated_at) j["generated_at"] = *doc.generated_at;
    return j;
}

ReportDocument report_from_json(const json& j) {
    return with_schema_errors("report", [&] {
        ReportDocument doc;
        doc.kind = parse_report_kind(j.at("kind").get<std::string>());
        doc.group = parse_group_view(j.at("group").get<std::string>());
        doc.status = j.at("status").get<std::string>();
        doc.parameters = j.at("parameters").get<std::map<std::string, std::string>>();
        doc.notes = j.at("notes").get<std::vector<std::string>>();
        if (j.contains("generated_at")) doc.generated_at = j.at("generated_at").get<std::int64_t>();
        for (const auto& t : j.at("tables")) {
            Table table{t.at("name").get<std::string>(), t.at("columns").get<std::vector<std::string>>(), {}};
            for (const auto& r : t.at("rows")) {
                std::vector<Cell> row;
                for (const auto& c : r) row.push_back(cell_from_json(c));
                table.rows.push_back(std::move(row));
            }
            doc.tables.push_back(std::move(table));
        }
        return doc;
    });
}

std::string render_json(const ReportDocument& doc) { return to_json(doc).dump(2) + "\n"; }

std::string render_csv(const ReportDocument& doc) {
    std::ostringstream out;
    out << "# kind," << csv::quote(to_string(doc.kind)) << "\n";
    out << "# group," << csv::quote(to_string(doc.group)) << "\n";
    out << "# status," << csv::quote(doc.status) << "\n";
    if (doc.generated_at) out << "# generated_at," << *doc.generated_at << "\n";
    for (const auto& [k, v] : doc.parameters) out << "# param," << csv::quote(k) << "," << csv::quote(v) << "\n";
    for (const auto& n : doc.notes) out << "# note," << csv::quote(n) << "\n";
    for (const auto& t : doc.tables) {
        out << "# table," << csv::quote(t.name) << "\n";
        for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << csv::quote(t.columns[i]);
        out << "\n";
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out << ",";
                if (std::holds_alternative<std::int64_t>(row[i])) {
                    out << std::get<std::int64_t>(row[i]);
                } else if (std::holds_alternative<std::string>(row[i])) {
                    out << csv::quote(std::get<std::string>(row[i]));
                }
            }
            out << "\n";
        }
    }
    return out.str();
}

ReportDocument parse_csv(const std::string& text) {
    std::istringstream in(text);
    csv::Reader reader(in);
    ReportDocument doc;
    Table* table = nullptr;
    bool want_header = false;
    auto fail = [&](const std::string& what) {
        throw Error(ErrorCode::SchemaViolation, "report csv line " + std::to_string(reader.line()) + ": " + what);
    };
    while (auto row = reader.next()) {
        const auto& f = *row;
        if (!f.empty() && !f[0].quoted && f[0].text.starts_with("# ")) {
            const auto tag = f[0].text.substr(2);
            auto arg = [&](std::size_t i) {
                if (f.size() <= i) fail("missing value for '" + tag + "'");
                return f[i].text;
            };
            if (tag == "kind") {
                doc.kind = parse_report_kind(arg(1));
            } else if (tag == "group") {
                doc.group = parse_group_view(arg(1));
            } else if (tag == "status") {
                doc.status = arg(1);
            } else if (tag == "generated_at") {
                doc.generated_at = std::stoll(arg(1));
            } else if (tag == "param") {
                doc.parameters[arg(1)] = arg(2);
            } else if (tag == "note") {
                doc.notes.push_back(arg(1));
            } else if (tag == "table") {
                doc.tables.push_back({arg(1), {}, {}});
                table = &doc.tables.back();
                want_header = true;
            } else {
                fail("unknown tag '" + tag + "'");
            }
            continue;
        }
        if (!table) fail("data outside a table");
        if (want_header) {
            table->columns = csv::texts(f);
            want_header = false;
            continue;
        }
        if (f.size() != table->columns.size()) fail("row width does not match header");
        std::vector<Cell> cells;
        for (const auto& field : f) {
            if (field.quoted) {
                cells.push_back(str(field.text));
            } else if (field.text.empty()) {
                cells.push_back(null());
            } else {
                std::size_t used = 0;
                std::int64_t v = 0;
                try {
                    v = std::stoll(field.text, &used);
                } catch (const std::exception&) {
                    fail("bad integer '" + field.text + "'");
                }
                if (used != field.text.size()) fail("bad integer '" + field.text + "'");
                cells.push_back(num(v));
            }
        }
        table->rows.push_back(std::move(cells));
    }
    return doc;
}

namespace {

std::size_t display_width(std::string_view s) {
    std::size_t n = 0;
    for (unsigned char c : s) {
        if ((c & 0xC0) != 0x80) ++n;
    }
    return n;
}

std::string pad(std::string s, std::size_t width, bool right = false) {
    auto w = display_width(s);
    if (w >= width) return s;
    std::string fill(width - w, ' ');
    return right ? fill + s : s + fill;
}

std::string cell_text(const Cell& c) {
    if (std::holds_alternative<std::int64_t>(c)) return std::to_string(std::get<std::int64_t>(c));
    if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
    return "-";
}

void render_generic(std::ostream& out, const Table& t) {
    std::vector<std::size_t> width(t.columns.size());
    for (std::size_t i = 0; i < t.columns.size(); ++i) width[i] = display_width(t.columns[i]);
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) {
            width[i] = std::max(width[i], display_width(cell_text(row[i])));
        }
    }
    out << "[" << t.name << "]\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "  " : "") << pad(t.columns[i], width[i]);
    out << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            bool numeric = std::holds_alternative<std::int64_t>(row[i]);
            out << (i ? "  " : "") << pad(cell_text(row[i]), width[i], numeric);
        }
        out << "\n";
    }
}

std::size_t column(const Table& t, std::string_view name) {
    auto it = std::find(t.columns.begin(), t.columns.end(), name);
    if (it == t.columns.end()) throw Error(ErrorCode::SchemaViolation, "missing column " + std::string(name));
    return static_cast<std::size_t>(it - t.columns.begin());
}

// Two ordered lists side by side: accuracy ranking with markers on the
// left, familiarity ranking on the right.
void render_paired(std::ostream& out, const ReportDocument& doc) {
    const auto& ranking = *doc.find_table("ranking");
    const auto& fam = *doc.find_table("familiarity");
    auto name_col = column(ranking, "display_name"), uil_col = column(ranking, "uil_percent"),
         marker_col = column(ranking, "marker");
    std::vector<std::string> left, right;
    for (const auto& row : ranking.rows) {
        if (std::holds_alternative<std::monostate>(row[uil_col])) continue;
        std::string mark;
        if (std::holds_alternative<std::string>(row[marker_col])) {
            auto m = std::get<std::string>(row[marker_col]);
            if (m == "up") mark = metrics::arrow(metrics::Marker::Up);
            if (m == "down") mark = metrics::arrow(metrics::Marker::Down);
            if (m == "aligned") mark = metrics::arrow(metrics::Marker::Aligned);
        }
        left.push_back(pad(cell_text(row[name_col]), 16) + pad(cell_text(row[uil_col]), 4, true) +
                       (mark.empty() ? "" : " " + mark));
    }
    auto fam_name = column(fam, "display_name"), fam_pct = column(fam, "fr_percent");
    for (const auto& row : fam.rows) {
        right.push_back(pad(cell_text(row[fam_name]), 16) + pad(cell_text(row[fam_pct]), 4, true));
    }
    out << pad("Accuracy Rate (UIL) (%)", 26) << "Familiarity Rate (%)\n";
    for (std::size_t i = 0; i < std::max(left.size(), right.size()); ++i) {
        out << pad(i < left.size() ? left[i] : "", 26) << (i < right.size() ? right[i] : "") << "\n";
    }
}

}  // namespace

std::string render_text(const ReportDocument& doc) {
    std::ostringstream out;
    out << to_string(doc.kind) << " report, group " << to_string(doc.group);
    for (const auto& [k, v] : doc.parameters) out << ", " << k << " " << v;
    out << "\n";
    if (doc.status != "ok") out << "status: " << doc.status << "\n";
    for (const auto& n : doc.notes) out << "note: " << n << "\n";
    if (doc.kind == ReportKind::Metrics && doc.find_table("ranking") && doc.find_table("familiarity")) {
        out << "\n";
        render_paired(out, doc);
    }
    for (const auto& t : doc.tables) {
        out << "\n";
        render_generic(out, t);
    }
    return out.str();
}

RenderFormat parse_render_format(std::string_view text) {
    if (text == "json") return RenderFormat::Json;
    if (text == "csv") return RenderFormat::Csv;
    if (text == "text") return RenderFormat::Text;
    throw Error(ErrorCode::BadRequest, "unknown format '" + std::string(text) + "'");
}

std::string render(const ReportDocument& doc, RenderFormat format) {
    switch (format) {
    case RenderFormat::Json: return render_json(doc);
    case RenderFormat::Csv: return render_csv(doc);
    case RenderFormat::Text: return render_text(doc);
    }
    return render_json(doc);
}

}  // namespace vu::report
