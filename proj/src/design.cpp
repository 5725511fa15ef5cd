#include "vu/design.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "vu/error.hpp"
#include "vu/hash.hpp"
#include "vu/semantic.hpp"

namespace vu::design {

namespace {

std::string num(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

std::string fixed2(double v) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << v;
    return os.str();
}

}  // namespace

std::string_view to_string(Severity severity) {
    switch (severity) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Info: return "info";
    }
    return "error";
}

bool ValidationReport::passed() const { return count(Severity::Error) == 0; }

std::size_t ValidationReport::count(Severity severity) const {
    return static_cast<std::size_t>(std::count_if(
        findings.begin(), findings.end(), [&](const Finding& f) { return f.severity == severity; }));
}

void ValidationReport::add(Severity severity, std::string code, std::string subject,
                           std::string message) {
    findings.push_back({severity, std::move(code), std::move(subject), std::move(message)});
}

void ValidationReport::merge(const ValidationReport& other) {
    findings.insert(findings.end(), other.findings.begin(), other.findings.end());
    for (const auto& [k, v] : other.derived) derived[k] = v;
}

// --- stimulus sequences -----------------------------------------------------

ValidationReport validate_sequence_manifest(const StimulusManifest& m, double fps_tolerance) {
    ValidationReport r;
    const std::string& subj = m.sequence_id;
    if (m.sequence_id.empty()) r.add(Severity::Error, "sequence_id", subj, "sequence_id must not be empty");
    if (m.area_id.empty()) r.add(Severity::Error, "area_id", subj, "area_id must not be empty");
    if (m.media_uri.empty()) r.add(Severity::Warning, "media_uri", subj, "media_uri is empty");

    if (!(m.duration_s > 0)) {
        r.add(Severity::Error, "duration_s", subj,
              "duration_s must be positive (observed " + num(m.duration_s) + ")");
    }
    if (m.frame_count <= 0) {
        r.add(Severity::Error, "frame_count", subj,
              "frame_count must be positive (observed " + std::to_string(m.frame_count) + ")");
    }
    if (!(m.nominal_fps > 0)) {
        r.add(Severity::Error, "nominal_fps", subj,
              "nominal_fps must be positive (observed " + num(m.nominal_fps) + ")");
    }
    if (m.duration_s > 0 && m.frame_count > 0) {
        double fps = static_cast<double>(m.frame_count) / m.duration_s;
        r.derived["fps"] = fps;
        if (m.nominal_fps > 0 && std::fabs(fps - m.nominal_fps) > fps_tolerance) {
            r.add(Severity::Error, "fps", subj,
                  "derived fps " + fixed2(fps) + " differs from nominal " + num(m.nominal_fps) +
                      " by more than " + num(fps_tolerance));
        }
    }
    if (m.denoising_strength < 0.0 || m.denoising_strength > 1.0) {
        r.add(Severity::Error, "denoising_strength", subj,
              "denoising_strength must lie in [0, 1] (observed " + num(m.denoising_strength) + ")");
    } else if (m.denoising_strength > kMaxDenoisingStrength) {
        r.add(Severity::Error, "denoising_strength", subj,
              "denoising_strength " + num(m.denoising_strength) + " exceeds " +
                  num(kMaxDenoisingStrength));
    }
    return r;
}

// --- training datasets ------------------------------------------------------

std::string_view to_string(Typology t) {
    switch (t) {
    case Typology::StreetView: return "street_view";
    case Typology::Facade: return "facade";
    case Typology::Detail: return "detail";
    }
    return "street_view";
}

Typology parse_typology(std::string_view text) {
    if (text == "street_view") return Typology::StreetView;
    if (text == "facade") return Typology::Facade;
    if (text == "detail") return Typology::Detail;
    throw Error(ErrorCode::SchemaViolation, "unknown typology '" + std::string(text) + "'");
}

ValidationReport validate_dataset_composition(const DatasetManifest& d, double tolerance_pp) {
    ValidationReport r;
    const std::string& subj = d.area_id;
    const auto n = static_cast<long>(d.image_records.size());

    const auto& t = d.target_composition;
    if (std::fabs(t.street + t.facade + t.detail - 100.0) > 1e-9) {
        r.add(Severity::Error, "target_composition", subj,
              "target shares sum to " + num(t.street + t.facade + t.detail) + ", expected 100");
    }
    if (n == 0) {
        r.add(Severity::Error, "size", subj, "empty dataset");
        return r;
    }
    if (n < d.size_min || n > d.size_max) {
        r.add(Severity::Error, "size", subj,
              "dataset size " + std::to_string(n) + " outside [" + std::to_string(d.size_min) +
                  ", " + std::to_string(d.size_max) + "]");
    }

    std::set<std::string_view> ids;
    std::map<Typology, long> counts{{Typology::StreetView, 0}, {Typology::Facade, 0}, {Typology::Detail, 0}};
    for (const auto& rec : d.image_records) {
        if (!ids.insert(rec.image_id).second) {
            r.add(Severity::Error, "image_id", subj, "duplicate image_id '" + rec.image_id + "'");
        }
        ++counts[rec.typology];
    }

    const std::pair<Typology, double> targets[] = {
        {Typology::StreetView, t.street}, {Typology::Facade, t.facade}, {Typology::Detail, t.detail}};
    for (const auto& [typ, target] : targets) {
        double share = 100.0 * static_cast<double>(counts[typ]) / static_cast<double>(n);
        r.derived[std::string(to_string(typ)) + "_share"] = share;
        if (std::fabs(share - target) > tolerance_pp + 1e-12) {
            r.add(Severity::Error, "composition", subj,
                  std::string(to_string(typ)) + " share " + fixed2(share) + "% outside " +
                      num(target) + " +/- " + num(tolerance_pp) + " pp");
        }
    }
    return r;
}

// --- captions ---------------------------------------------------------------

TokenFrequencyReport caption_token_stats(std::span<const std::string> captions) {
    if (captions.empty()) throw Error(ErrorCode::BadRequest, "caption list is empty");
    TokenFrequencyReport out;
    out.caption_count = captions.size();
    for (const auto& caption : captions) {
        auto tokens = semantic::normalize_tokens(caption);
        if (tokens.empty()) ++out.empty_captions;
        std::set<std::string> seen;
        for (auto& tok : tokens) {
            auto& stat = out.tokens[tok];
            ++stat.occurrences;
            if (seen.insert(tok).second) ++stat.captions_containing;
        }
    }
    for (auto& [tok, stat] : out.tokens) {
        stat.repetition_ratio =
            static_cast<double>(stat.occurrences) / static_cast<double>(stat.captions_containing);
    }
    return out;
}

// --- fine-tuning config -----------------------------------------------------

ValidationReport validate_lora_config(const LoRATrainConfig& c) {
    ValidationReport r;
    const auto& ref = kReferenceLoRAConfig;
    auto check_int = [&](const char* name, int value, int reference) {
        if (value <= 0) {
            r.add(Severity::Error, name, "lora", std::string(name) + " must be positive (observed " +
                                                     std::to_string(value) + ")");
        } else if (value != reference) {
            r.add(Severity::Info, name, "lora",
                  std::string(name) + " " + std::to_string(value) + " differs from reference " +
                      std::to_string(reference));
        }
    };
    check_int("max_resolution_px", c.max_resolution_px, ref.max_resolution_px);
    check_int("epochs", c.epochs, ref.epochs);
    check_int("batch_size", c.batch_size, ref.batch_size);
    if (!(c.learning_rate > 0)) {
        r.add(Severity::Error, "learning_rate", "lora",
              "learning_rate must be positive (observed " + num(c.learning_rate) + ")");
    } else if (std::fabs(c.learning_rate - ref.learning_rate) > 1e-9 * ref.learning_rate) {
        r.add(Severity::Info, "learning_rate", "lora",
              "learning_rate " + num(c.learning_rate) + " differs from reference " +
                  num(ref.learning_rate));
    }
    return r;
}

// --- replica map ------------------------------------------------------------

std::string sector_id_for(int row, int col) {
    return "r" + std::to_string(row) + "c" + std::to_string(col);
}

SectorGrid build_sector_grid(double extent_m, double sector_size_m,
                             const std::map<Cell, std::string>& assignments,
                             std::span<const StudyArea> areas) {
    if (!(extent_m > 0) || !(sector_size_m > 0)) {
        throw Error(ErrorCode::InvalidGrid, "extent_m and sector_size_m must be positive");
    }
    double ratio = extent_m / sector_size_m;
    double side = std::round(ratio);
    if (side < 1 || std::fabs(ratio - side) > 1e-9) {
        throw Error(ErrorCode::InvalidGrid,
                    "extent " + num(extent_m) + " m / sector " + num(sector_size_m) + " m = " +
                        num(ratio) + " is not a positive integer (remainder " +
                        num(std::fmod(extent_m, sector_size_m)) + " m)");
    }
    const int n = static_cast<int>(side);

    std::vector<std::string> missing, extra;
    for (int row = 0; row < n; ++row) {
        for (int col = 0; col < n; ++col) {
            if (!assignments.contains({row, col})) {
                missing.push_back("(" + std::to_string(row) + "," + std::to_string(col) + ")");
            }
        }
    }
    for (const auto& [cell, area] : assignments) {
        if (cell.first < 0 || cell.first >= n || cell.second < 0 || cell.second >= n) {
            extra.push_back("(" + std::to_string(cell.first) + "," + std::to_string(cell.second) + ")");
        }
    }
    if (!missing.empty() || !extra.empty()) {
        std::string msg = "assignments do not match the " + std::to_string(n) + "x" +
                          std::to_string(n) + " grid;";
        auto list = [](const std::vector<std::string>& v) {
            std::string s;
            for (const auto& c : v) s += " " + c;
            return s;
        };
        if (!missing.empty()) msg += " missing:" + list(missing) + ";";
        if (!extra.empty()) msg += " extra:" + list(extra) + ";";
        throw Error(ErrorCode::InvalidGrid, msg);
    }

    SectorGrid grid{extent_m, sector_size_m, n, n, {}};
    grid.sectors.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (const auto& [cell, area] : assignments) {
        if (area.empty()) {
            throw Error(ErrorCode::InvalidGrid, "sector " + sector_id_for(cell.first, cell.second) +
                                                    " has no assigned area");
        }
        if (!areas.empty() && std::none_of(areas.begin(), areas.end(),
                                           [&](const StudyArea& a) { return a.area_id == area; })) {
            throw Error(ErrorCode::UnknownArea, "sector " + sector_id_for(cell.first, cell.second) +
                                                    " assigned to unknown area '" + area + "'");
        }
        grid.sectors.push_back({sector_id_for(cell.first, cell.second), cell.first, cell.second, area});
    }
    return grid;
}

ValidationReport check_map_extent(double declared_extent_m, double sector_size_m,
                                  int declared_sector_count) {
    ValidationReport r;
    if (!(declared_extent_m > 0) || !(sector_size_m > 0) || declared_sector_count <= 0) {
        r.add(Severity::Error, "map_extent", "replica_map", "extent, sector size and count must be positive");
        return r;
    }
    double per_side = declared_extent_m / sector_size_m;
    r.derived["sectors_per_side"] = per_side;
    auto side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(declared_sector_count))));
    bool square = side * side == declared_sector_count;
    if (square) r.derived["implied_extent_m"] = side * sector_size_m;
    bool consistent = square && std::fabs(per_side - side) < 1e-9;
    if (!consistent) {
        std::string msg = "declared extent " + num(declared_extent_m) + " m / sector " +
                          num(sector_size_m) + " m = " + num(per_side) + " sectors per side, but " +
                          std::to_string(declared_sector_count) + " sectors were declared";
        if (square) {
            msg += " (implies " + std::to_string(side) + "x" + std::to_string(side) + " = " +
                   num(side * sector_size_m) + " m)";
        }
        r.add(Severity::Warning, "map_extent", "replica_map", msg);
    }
    return r;
}

std::map<std::string, double> assign_heights(const SectorGrid& grid,
                                             const std::map<std::string, HeightLimits>& zone_limits,
                                             std::uint64_t seed) {
    for (const auto& s : grid.sectors) {
        auto it = zone_limits.find(s.assigned_area_id);
        if (it == zone_limits.end()) {
            throw Error(ErrorCode::InvalidZoneLimits, "missing zone limits for '" + s.assigned_area_id + "'");
        }
        const auto& lim = it->second;
        if (!(lim.min_m > 0) || !(lim.max_m > 0) || lim.min_m > lim.max_m) {
            throw Error(ErrorCode::InvalidZoneLimits,
                        "invalid zone limits for '" + s.assigned_area_id + "': [" + num(lim.min_m) +
                            ", " + num(lim.max_m) + "]");
        }
    }
    std::map<std::string, double> heights;
    for (const auto& s : grid.sectors) {
        const auto& lim = zone_limits.at(s.assigned_area_id);
        std::uint64_t bits = splitmix64(seed ^ splitmix64(fnv1a(s.sector_id)));
        double u = static_cast<double>(bits >> 11) * 0x1.0p-53;  // [0, 1)
        heights[s.sector_id] = lim.min_m + u * (lim.max_m - lim.min_m);
    }
    return heights;
}

// --- evaluation schedule and instrument -------------------------------------

ValidationReport validate_schedule(const PhaseSchedule& s) {
    ValidationReport r;
    const std::pair<const char*, int> fields[] = {
        {"pre_viewing_min", s.pre_viewing_min},
        {"familiarization_min", s.familiarization_min},
        {"familiarization_loops", s.familiarization_loops},
        {"in_depth_min", s.in_depth_min},
        {"in_depth_loops_per_sequence", s.in_depth_loops_per_sequence}};
    for (const auto& [name, value] : fields) {
        if (value <= 0) {
            r.add(Severity::Error, name, "schedule",
                  std::string(name) + " must be positive (observed " + std::to_string(value) + ")");
        }
    }
    return r;
}

std::string_view to_string(AnalyticalRole role) {
    switch (role) {
    case AnalyticalRole::FamiliarityRate: return "familiarity_rate";
    case AnalyticalRole::AccuracyRate: return "accuracy_rate";
    case AnalyticalRole::SemanticAnalysis: return "semantic_analysis";
    }
    return "semantic_analysis";
}

AnalyticalRole parse_analytical_role(std::string_view text) {
    if (text == "familiarity_rate") return AnalyticalRole::FamiliarityRate;
    if (text == "accuracy_rate") return AnalyticalRole::AccuracyRate;
    if (text == "semantic_analysis") return AnalyticalRole::SemanticAnalysis;
    throw Error(ErrorCode::SchemaViolation, "unknown analytical role '" + std::string(text) + "'");
}

QuestionnaireInstrument default_instrument() {
    using R = AnalyticalRole;
    return {{
        {0, R::FamiliarityRate,
         "For each area, choose how well you know it: not familiar, quick visits, regular "
         "attendance, or continuous residence."},
        {1, R::AccuracyRate, "Which area is this sequence showing?"},
        {2, R::SemanticAnalysis, "Why did you choose this area? What felt familiar?"},
        {3, R::SemanticAnalysis, "Which visual elements or features led you to your answer?"},
        {4, R::SemanticAnalysis, "Does anything look wrong or out of place?"},
        {5, R::SemanticAnalysis, "What could be changed or added to make the area easier to recognize?"},
    }};
}

ValidationReport validate_instrument(const QuestionnaireInstrument& instrument) {
    ValidationReport r;
    std::set<int> seen;
    for (const auto& item : instrument.items) {
        const std::string subj = "item " + std::to_string(item.item_no);
        if (item.item_no < 0 || item.item_no > 5) {
            r.add(Severity::Error, "item_no", subj, "item_no must be within 0..5");
            continue;
        }
        if (!seen.insert(item.item_no).second) {
            r.add(Severity::Error, "item_no", subj, "duplicate item");
        }
        AnalyticalRole expected = item.item_no == 0   ? AnalyticalRole::FamiliarityRate
                                  : item.item_no == 1 ? AnalyticalRole::AccuracyRate
                                                      : AnalyticalRole::SemanticAnalysis;
        if (item.role != expected) {
            r.add(Severity::Error, "role", subj,
                  "role " + std::string(to_string(item.role)) + ", expected " +
                      std::string(to_string(expected)));
        }
        if (item.prompt_text.empty()) r.add(Severity::Warning, "prompt_text", subj, "empty prompt");
    }
    for (int i = 0; i <= 5; ++i) {
        if (!seen.contains(i)) {
            r.add(Severity::Error, "item_no", "item " + std::to_string(i), "item missing");
        }
    }
    return r;
}

// --- study definition -------------------------------------------------------

const StudyArea* StudyDefinition::find_area(std::string_view area_id) const {
    for (const auto& a : areas) {
        if (a.area_id == area_id) return &a;
    }
    return nullptr;
}

const StimulusManifest* StudyDefinition::find_sequence(std::string_view sequence_id) const {
    for (const auto& s : sequences) {
        if (s.sequence_id == sequence_id) return &s;
    }
    return nullptr;
}

std::map<std::string, std::string> answer_key(const StudyDefinition& study) {
    std::map<std::string, std::string> key;
    for (const auto& s : study.sequences) key[s.sequence_id] = s.area_id;
    return key;
}

namespace {

void merge_with(ValidationReport& into, const ValidationReport& from, Strictness strictness) {
    for (auto f : from.findings) {
        if (strictness == Strictness::Lenient && f.severity == Severity::Error) {
            f.severity = Severity::Warning;
        }
        into.findings.push_back(std::move(f));
    }
    for (const auto& [k, v] : from.derived) into.derived[k] = v;
}

}  // namespace

ValidationReport validate_study(const StudyDefinition& study, Strictness strictness) {
    ValidationReport r;
    if (study.study_id.empty()) r.add(Severity::Error, "study_id", "study", "study_id must not be empty");
    if (study.areas.empty()) r.add(Severity::Error, "areas", "study", "no areas declared");

    std::set<std::string_view> area_ids;
    std::vector<int> ranks;
    for (const auto& a : study.areas) {
        if (a.area_id.empty()) r.add(Severity::Error, "area_id", "study", "empty area_id");
        if (!area_ids.insert(a.area_id).second) {
            r.add(Severity::Error, "duplicate_area", a.area_id, "duplicate area_id '" + a.area_id + "'");
        }
        ranks.push_back(a.origin_rank);
    }
    std::sort(ranks.begin(), ranks.end());
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        if (ranks[i] != static_cast<int>(i) + 1) {
            r.add(Severity::Error, "origin_rank", "study",
                  "origin ranks must be a permutation of 1.." + std::to_string(ranks.size()));
            break;
        }
    }

    std::set<std::string_view> seq_ids;
    std::set<std::string_view> covered;
    for (const auto& s : study.sequences) {
        if (!seq_ids.insert(s.sequence_id).second) {
            r.add(Severity::Error, "duplicate_sequence", s.sequence_id,
                  "duplicate sequence_id '" + s.sequence_id + "'");
        }
        if (!area_ids.contains(s.area_id)) {
            r.add(Severity::Error, "unknown_area", s.sequence_id,
                  "sequence references unknown area '" + s.area_id + "'");
        }
        covered.insert(s.area_id);
        auto m = validate_sequence_manifest(s, study.fps_tolerance);
        if (m.derived.contains("fps")) r.derived["fps." + s.sequence_id] = m.derived.at("fps");
        m.derived.clear();
        merge_with(r, m, strictness);
    }
    if (study.sequences.empty()) r.add(Severity::Error, "sequences", "study", "no sequences declared");
    for (const auto& a : study.areas) {
        if (!covered.contains(a.area_id)) {
            r.add(Severity::Warning, "uncovered_area", a.area_id, "area has no stimulus sequence");
        }
    }

    r.merge(validate_schedule(study.schedule));
    r.merge(validate_instrument(study.instrument));

    for (const auto& d : study.datasets) {
        if (!area_ids.contains(d.area_id)) {
            r.add(Severity::Error, "unknown_area", d.area_id, "dataset references unknown area");
        }
        auto dr = validate_dataset_composition(d, study.composition_tolerance_pp);
        dr.derived.clear();
        merge_with(r, dr, strictness);
    }
    if (study.lora) merge_with(r, validate_lora_config(*study.lora), strictness);

    if (study.replica_map) {
        const auto& map = *study.replica_map;
        if (map.declared_extent_m && map.declared_sector_count) {
            merge_with(r, check_map_extent(*map.declared_extent_m, map.sector_size_m,
                                           *map.declared_sector_count),
                       strictness);
        }
        try {
            auto grid = build_sector_grid(map.extent_m, map.sector_size_m, map.assignments, study.areas);
            r.derived["sectors"] = static_cast<double>(grid.sectors.size());
            if (!map.zone_limits.empty()) assign_heights(grid, map.zone_limits, map.height_seed);
        } catch (const Error& e) {
            ValidationReport g;
            g.add(Severity::Error, std::string(vu::to_string(e.code())), "replica_map", e.what());
            merge_with(r, g, strictness);
        }
    }
    return r;
}

}  // namespace vu::design
