#include "vu/serialize.hpp"

#include <fstream>

namespace vu {

namespace {

template <class T>
std::optional<T> opt(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<T>();
}

template <class T>
T value_or(const json& j, const char* key, T fallback) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return fallback;
    return it->get<T>();
}

}  // namespace

void to_json(json& j, const StudyArea& a) {
    j = json{{"area_id", a.area_id}, {"display_name", a.display_name}, {"origin_rank", a.origin_rank}};
}

void from_json(const json& j, StudyArea& a) {
    a.area_id = j.at("area_id").get<std::string>();
    a.display_name = value_or<std::string>(j, "display_name", a.area_id);
    a.origin_rank = j.at("origin_rank").get<int>();
}

json familiarity_to_json(const FamiliarityProfile& profile) {
    json j = json::object();
    for (const auto& [area, level] : profile) j[area] = std::string(to_string(level));
    return j;
}

FamiliarityProfile familiarity_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorCode::SchemaViolation, "familiarity map must be an object");
    FamiliarityProfile profile;
    for (const auto& [area, level] : j.items()) {
        profile[area] = parse_familiarity_level(level.get<std::string>());
    }
    return profile;
}

void to_json(json& j, const ParticipantRecord& p) {
    j = json{{"participant_id", p.participant_id}, {"group", std::string(to_string(p.group))}};
    j["age"] = p.age ? json(*p.age) : json(nullptr);
    j["residence"] = p.residence ? json(std::string(to_string(*p.residence))) : json(nullptr);
    j["profession"] = p.profession ? json(*p.profession) : json(nullptr);
    j["ai_familiarity"] = p.ai_familiarity ? json(*p.ai_familiarity) : json(nullptr);
    j["familiarity"] = familiarity_to_json(p.familiarity_profile);
}

void from_json(const json& j, ParticipantRecord& p) {
    p.participant_id = j.at("participant_id").get<std::string>();
    if (p.participant_id.empty()) throw Error(ErrorCode::SchemaViolation, "empty participant_id");
    p.group = parse_participant_group(j.at("group").get<std::string>());
    p.age = opt<int>(j, "age");
    auto residence = opt<std::string>(j, "residence");
    p.residence = residence ? std::optional(parse_residence_bucket(*residence)) : std::nullopt;
    p.profession = opt<std::string>(j, "profession");
    p.ai_familiarity = opt<std::string>(j, "ai_familiarity");
    auto fam = j.find("familiarity");
    p.familiarity_profile = fam != j.end() && !fam->is_null() ? familiarity_from_json(*fam) : FamiliarityProfile{};
}

void to_json(json& j, const SequenceResponse& r) {
    j = json{{"participant_id", r.participant_id},
             {"sequence_id", r.sequence_id},
             {"guessed_area_id", r.guessed_area_id ? json(*r.guessed_area_id) : json(nullptr)},
             {"q2", r.q2_text},
             {"q3", r.q3_text},
             {"q4", r.q4_text},
             {"q5", r.q5_text},
             {"submitted_at", r.submitted_at},
             {"loops_viewed", r.loops_viewed}};
}

void from_json(const json& j, SequenceResponse& r) {
    r.participant_id = j.at("participant_id").get<std::string>();
    r.sequence_id = j.at("sequence_id").get<std::string>();
    auto guess = opt<std::string>(j, "guessed_area_id");
    r.guessed_area_id = guess && !guess->empty() ? guess : std::nullopt;
    r.q2_text = value_or<std::string>(j, "q2", "");
    r.q3_text = value_or<std::string>(j, "q3", "");
    r.q4_text = value_or<std::string>(j, "q4", "");
    r.q5_text = value_or<std::string>(j, "q5", "");
    r.submitted_at = value_or<std::int64_t>(j, "submitted_at", 0);
    r.loops_viewed = value_or<int>(j, "loops_viewed", 0);
    if (r.loops_viewed < 0) throw Error(ErrorCode::SchemaViolation, "loops_viewed must be non-negative");
}

}  // namespace vu

namespace vu::design {

namespace {

template <class T>
T value_or(const json& j, const char* key, T fallback) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return fallback;
    return it->get<T>();
}

}  // namespace

void to_json(json& j, const Finding& f) {
    j = json{{"severity", std::string(to_string(f.severity))},
             {"code", f.code},
             {"subject", f.subject},
             {"message", f.message}};
}

void to_json(json& j, const ValidationReport& r) {
    j = json{{"passed", r.passed()}, {"findings", r.findings}, {"derived", r.derived}};
}

void to_json(json& j, const StimulusManifest& m) {
    j = json{{"sequence_id", m.sequence_id},     {"area_id", m.area_id},
             {"media_uri", m.media_uri},         {"duration_s", m.duration_s},
             {"frame_count", m.frame_count},     {"nominal_fps", m.nominal_fps},
             {"denoising_strength", m.denoising_strength}};
}

void from_json(const json& j, StimulusManifest& m) {
    m.sequence_id = j.at("sequence_id").get<std::string>();
    m.area_id = j.at("area_id").get<std::string>();
    m.media_uri = value_or<std::string>(j, "media_uri", "");
    m.duration_s = j.at("duration_s").get<double>();
    m.frame_count = j.at("frame_count").get<std::int64_t>();
    m.nominal_fps = j.at("nominal_fps").get<double>();
    m.denoising_strength = j.at("denoising_strength").get<double>();
}

void to_json(json& j, const ImageRecord& r) {
    j = json{{"image_id", r.image_id},
             {"typology", std::string(to_string(r.typology))},
             {"width_px", r.width_px},
             {"height_px", r.height_px}};
}

void from_json(const json& j, ImageRecord& r) {
    r.image_id = j.at("image_id").get<std::string>();
    r.typology = parse_typology(j.at("typology").get<std::string>());
    r.width_px = value_or<int>(j, "width_px", 0);
    r.height_px = value_or<int>(j, "height_px", 0);
}

void to_json(json& j, const DatasetManifest& d) {
    j = json{{"area_id", d.area_id},
             {"image_records", d.image_records},
             {"target_composition",
              {{"street", d.target_composition.street},
               {"facade", d.target_composition.facade},
               {"detail", d.target_composition.detail}}},
             {"size_range", {d.size_min, d.size_max}}};
}

void from_json(const json& j, DatasetManifest& d) {
    d.area_id = j.at("area_id").get<std::string>();
    d.image_records = j.at("image_records").get<std::vector<ImageRecord>>();
    if (auto it = j.find("target_composition"); it != j.end()) {
        d.target_composition.street = it->at("street").get<double>();
        d.target_composition.facade = it->at("facade").get<double>();
        d.target_composition.detail = it->at("detail").get<double>();
    }
    if (auto it = j.find("size_range"); it != j.end()) {
        d.size_min = it->at(0).get<int>();
        d.size_max = it->at(1).get<int>();
    }
}

void to_json(json& j, const LoRATrainConfig& c) {
    j = json{{"max_resolution_px", c.max_resolution_px},
             {"epochs", c.epochs},
             {"batch_size", c.batch_size},
             {"learning_rate", c.learning_rate}};
}

void from_json(const json& j, LoRATrainConfig& c) {
    c.max_resolution_px = j.at("max_resolution_px").get<int>();
    c.epochs = j.at("epochs").get<int>();
    c.batch_size = j.at("batch_size").get<int>();
    c.learning_rate = j.at("learning_rate").get<double>();
}

void to_json(json& j, const PhaseSchedule& s) {
    j = json{{"pre_viewing_min", s.pre_viewing_min},
             {"familiarization_min", s.familiarization_min},
             {"familiarization_loops", s.familiarization_loops},
             {"in_depth_min", s.in_depth_min},
             {"in_depth_loops_per_sequence", s.in_depth_loops_per_sequence}};
}

void from_json(const json& j, PhaseSchedule& s) {
    PhaseSchedule d;
    s.pre_viewing_min = value_or(j, "pre_viewing_min", d.pre_viewing_min);
    s.familiarization_min = value_or(j, "familiarization_min", d.familiarization_min);
    s.familiarization_loops = value_or(j, "familiarization_loops", d.familiarization_loops);
    s.in_depth_min = value_or(j, "in_depth_min", d.in_depth_min);
    s.in_depth_loops_per_sequence =
        value_or(j, "in_depth_loops_per_sequence", d.in_depth_loops_per_sequence);
}

void to_json(json& j, const QuestionnaireInstrument& q) {
    j = json::array();
    for (const auto& item : q.items) {
        j.push_back({{"item_no", item.item_no},
                     {"role", std::string(to_string(item.role))},
                     {"prompt", item.prompt_text}});
    }
}

void from_json(const json& j, QuestionnaireInstrument& q) {
    q.items.clear();
    for (const auto& item : j) {
        q.items.push_back({item.at("item_no").get<int>(),
                           parse_analytical_role(item.at("role").get<std::string>()),
                           value_or<std::string>(item, "prompt", "")});
    }
}

void to_json(json& j, const ReplicaMap& m) {
    j = json::object();
    if (m.declared_extent_m) j["declared_extent_m"] = *m.declared_extent_m;
    if (m.declared_sector_count) j["declared_sector_count"] = *m.declared_sector_count;
    j["extent_m"] = m.extent_m;
    j["sector_size_m"] = m.sector_size_m;
    json cells = json::array();
    for (const auto& [cell, area] : m.assignments) {
        cells.push_back({{"row", cell.first}, {"col", cell.second}, {"area_id", area}});
    }
    j["assignments"] = cells;
    json limits = json::object();
    for (const auto& [area, lim] : m.zone_limits) limits[area] = {lim.min_m, lim.max_m};
    j["zone_limits"] = limits;
    j["height_seed"] = m.height_seed;
}

void from_json(const json& j, ReplicaMap& m) {
    if (auto it = j.find("declared_extent_m"); it != j.end()) m.declared_extent_m = it->get<double>();
    if (auto it = j.find("declared_sector_count"); it != j.end()) m.declared_sector_count = it->get<int>();
    m.extent_m = j.at("extent_m").get<double>();
    m.sector_size_m = j.at("sector_size_m").get<double>();
    m.assignments.clear();
    for (const auto& c : j.at("assignments")) {
        Cell cell{c.at("row").get<int>(), c.at("col").get<int>()};
        if (!m.assignments.emplace(cell, c.at("area_id").get<std::string>()).second) {
            throw Error(ErrorCode::SchemaViolation, "duplicate assignment for sector " +
                                                        sector_id_for(cell.first, cell.second));
        }
    }
    m.zone_limits.clear();
    if (auto it = j.find("zone_limits"); it != j.end()) {
        for (const auto& [area, lim] : it->items()) {
            m.zone_limits[area] = {lim.at(0).get<double>(), lim.at(1).get<double>()};
        }
    }
    m.height_seed = value_or<std::uint64_t>(j, "height_seed", 0);
}

void to_json(json& j, const SectorGrid& g) {
    json sectors = json::array();
    for (const auto& s : g.sectors) {
        sectors.push_back({{"sector_id", s.sector_id}, {"row", s.row}, {"col", s.col},
                           {"area_id", s.assigned_area_id}});
    }
    j = json{{"extent_m", g.extent_m}, {"sector_size_m", g.sector_size_m}, {"rows", g.rows},
             {"cols", g.cols}, {"sectors", sectors}};
}

void to_json(json& j, const StudyDefinition& s) {
    j = json{{"study_id", s.study_id},
             {"title", s.title},
             {"areas", s.areas},
             {"sequences", s.sequences},
             {"schedule", s.schedule},
             {"instrument", s.instrument},
             {"datasets", s.datasets},
             {"fps_tolerance", s.fps_tolerance},
             {"composition_tolerance_pp", s.composition_tolerance_pp},
             {"presentation_seed", s.presentation_seed}};
    if (s.lora) j["lora"] = *s.lora;
    if (s.replica_map) j["replica_map"] = *s.replica_map;
}

void from_json(const json& j, StudyDefinition& s) {
    s.study_id = j.at("study_id").get<std::string>();
    s.title = value_or<std::string>(j, "title", "");
    s.areas = j.at("areas").get<std::vector<StudyArea>>();
    s.sequences = j.at("sequences").get<std::vector<StimulusManifest>>();
    s.schedule = j.contains("schedule") ? j.at("schedule").get<PhaseSchedule>() : PhaseSchedule{};
    s.instrument = j.contains("instrument") ? j.at("instrument").get<QuestionnaireInstrument>()
                                            : default_instrument();
    s.datasets = j.contains("datasets") ? j.at("datasets").get<std::vector<DatasetManifest>>()
                                        : std::vector<DatasetManifest>{};
    s.lora = j.contains("lora") && !j.at("lora").is_null()
                 ? std::optional(j.at("lora").get<LoRATrainConfig>())
                 : std::nullopt;
    s.replica_map = j.contains("replica_map") && !j.at("replica_map").is_null()
                        ? std::optional(j.at("replica_map").get<ReplicaMap>())
                        : std::nullopt;
    s.fps_tolerance = value_or(j, "fps_tolerance", kDefaultFpsTolerance);
    s.composition_tolerance_pp = value_or(j, "composition_tolerance_pp", kDefaultCompositionTolerancePp);
    s.presentation_seed = value_or<std::uint64_t>(j, "presentation_seed", 0);
}

void to_json(json& j, const TokenFrequencyReport& r) {
    json tokens = json::object();
    for (const auto& [tok, st] : r.tokens) {
        tokens[tok] = {{"occurrences", st.occurrences},
                       {"captions_containing", st.captions_containing},
                       {"repetition_ratio", st.repetition_ratio}};
    }
    j = json{{"caption_count", r.caption_count}, {"empty_captions", r.empty_captions}, {"tokens", tokens}};
}

StudyDefinition parse_study_definition(const json& j) {
    return with_schema_errors("study definition", [&] { return j.get<StudyDefinition>(); });
}

StudyDefinition load_study_definition(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::SchemaViolation, path + ": " + e.what());
    }
    return parse_study_definition(j);
}

}  // namespace vu::design
