#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vu/model.hpp"

namespace vu::design {

enum class Severity { Error, Warning, Info };

std::string_view to_string(Severity severity);

struct Finding {
    Severity severity = Severity::Error;
    std::string code;     // stable identifier, e.g. "denoising_strength"
    std::string subject;  // what was checked, e.g. a sequence or area id
    std::string message;  // observed vs. allowed, human readable

    bool operator==(const Finding&) const = default;
};

struct ValidationReport {
    std::vector<Finding> findings;
    std::map<std::string, double> derived;  // e.g. "fps" -> 12.83

    bool passed() const;
    std::size_t count(Severity severity) const;
    void add(Severity severity, std::string code, std::string subject, std::string message);
    void merge(const ValidationReport& other);

    bool operator==(const ValidationReport&) const = default;
};

// --- stimulus sequences -----------------------------------------------------

inline constexpr double kMaxDenoisingStrength = 0.68;
inline constexpr double kDefaultFpsTolerance = 0.5;

struct StimulusManifest {
    std::string sequence_id;
    std::string area_id;
    std::string media_uri;
    double duration_s = 0.0;
    std::int64_t frame_count = 0;
    double nominal_fps = 0.0;
    double denoising_strength = 0.0;

    bool operator==(const StimulusManifest&) const = default;
};

ValidationReport validate_sequence_manifest(const StimulusManifest& m,
                                            double fps_tolerance = kDefaultFpsTolerance);

// --- training datasets ------------------------------------------------------

enum class Typology { StreetView, Facade, Detail };

std::string_view to_string(Typology t);
Typology parse_typology(std::string_view text);

struct ImageRecord {
    std::string image_id;
    Typology typology = Typology::StreetView;
    int width_px = 0;
    int height_px = 0;

    bool operator==(const ImageRecord&) const = default;
};

struct CompositionTarget {
    double street = 63.0;
    double facade = 35.0;
    double detail = 2.0;

    bool operator==(const CompositionTarget&) const = default;
};

struct DatasetManifest {
    std::string area_id;
    std::vector<ImageRecord> image_records;
    CompositionTarget target_composition;
    int size_min = 60;
    int size_max = 66;

    bool operator==(const DatasetManifest&) const = default;
};

inline constexpr double kDefaultCompositionTolerancePp = 3.0;

ValidationReport validate_dataset_composition(const DatasetManifest& d,
                                              double tolerance_pp = kDefaultCompositionTolerancePp);

// --- captions ---------------------------------------------------------------

struct TokenStat {
    std::size_t occurrences = 0;
    std::size_t captions_containing = 0;
    double repetition_ratio = 0.0;  // occurrences / captions_containing
};

struct TokenFrequencyReport {
    std::size_t caption_count = 0;
    std::size_t empty_captions = 0;
    std::map<std::string, TokenStat> tokens;
};

/// Throws BadRequest on an empty caption list.
TokenFrequencyReport caption_token_stats(std::span<const std::string> captions);

// --- fine-tuning config -----------------------------------------------------

struct LoRATrainConfig {
    int max_resolution_px = 768;
    int epochs = 12;
    int batch_size = 2;
    double learning_rate = 0.00002;

    bool operator==(const LoRATrainConfig&) const = default;
};

/// Reference configuration used by the pilot study.
inline constexpr LoRATrainConfig kReferenceLoRAConfig{};

ValidationReport validate_lora_config(const LoRATrainConfig& c);

// --- replica map ------------------------------------------------------------

struct Sector {
    std::string sector_id;
    int row = 0;
    int col = 0;
    std::string assigned_area_id;

    bool operator==(const Sector&) const = default;
};

struct SectorGrid {
    double extent_m = 0.0;
    double sector_size_m = 0.0;
    int rows = 0;
    int cols = 0;
    std::vector<Sector> sectors;  // row-major

    bool operator==(const SectorGrid&) const = default;
};

using Cell = std::pair<int, int>;  // (row, col)

std::string sector_id_for(int row, int col);

/// Builds a square grid. Throws InvalidGrid when extent/sector is not a
/// positive integer (message carries the remainder) or when assignments miss
/// or exceed grid cells. When `areas` is non-empty every assigned area must
/// be declared there (UnknownArea otherwise).
SectorGrid build_sector_grid(double extent_m, double sector_size_m,
                             const std::map<Cell, std::string>& assignments,
                             std::span<const StudyArea> areas = {});

/// Flags a declared extent that cannot be tiled into the declared number of
/// sectors (the pilot's map has this property; both figures are kept).
ValidationReport check_map_extent(double declared_extent_m, double sector_size_m,
                                  int declared_sector_count);

struct HeightLimits {
    double min_m = 0.0;
    double max_m = 0.0;

    bool operator==(const HeightLimits&) const = default;
};

/// Uniform height per sector drawn from its zone's limits. The draw for a
/// sector depends only on (seed, sector_id). Throws InvalidZoneLimits.
std::map<std::string, double> assign_heights(const SectorGrid& grid,
                                             const std::map<std::string, HeightLimits>& zone_limits,
                                             std::uint64_t seed);

// --- evaluation schedule and instrument -------------------------------------

struct PhaseSchedule {
    int pre_viewing_min = 5;
    int familiarization_min = 15;
    int familiarization_loops = 2;
    int in_depth_min = 60;
    int in_depth_loops_per_sequence = 5;

    bool operator==(const PhaseSchedule&) const = default;
};

ValidationReport validate_schedule(const PhaseSchedule& s);

enum class AnalyticalRole { FamiliarityRate, AccuracyRate, SemanticAnalysis };

std::string_view to_string(AnalyticalRole role);
AnalyticalRole parse_analytical_role(std::string_view text);

struct QuestionnaireItem {
    int item_no = 0;
    AnalyticalRole role = AnalyticalRole::SemanticAnalysis;
    std::string prompt_text;

    bool operator==(const QuestionnaireItem&) const = default;
};

struct QuestionnaireInstrument {
    std::vector<QuestionnaireItem> items;

    bool operator==(const QuestionnaireInstrument&) const = default;
};

/// Six-item instrument: item 0 familiarity, item 1 area guess, items 2-5 free text.
QuestionnaireInstrument default_instrument();

ValidationReport validate_instrument(const QuestionnaireInstrument& instrument);

// --- study definition -------------------------------------------------------

struct ReplicaMap {
    std::optional<double> declared_extent_m;
    std::optional<int> declared_sector_count;
    double extent_m = 0.0;
    double sector_size_m = 0.0;
    std::map<Cell, std::string> assignments;
    std::map<std::string, HeightLimits> zone_limits;
    std::uint64_t height_seed = 0;

    bool operator==(const ReplicaMap&) const = default;
};

struct StudyDefinition {
    std::string study_id;
    std::string title;
    std::vector<StudyArea> areas;
    std::vector<StimulusManifest> sequences;
    PhaseSchedule schedule;
    QuestionnaireInstrument instrument = default_instrument();
    std::vector<DatasetManifest> datasets;
    std::optional<LoRATrainConfig> lora;
    std::optional<ReplicaMap> replica_map;
    double fps_tolerance = kDefaultFpsTolerance;
    double composition_tolerance_pp = kDefaultCompositionTolerancePp;
    std::uint64_t presentation_seed = 0;

    const StudyArea* find_area(std::string_view area_id) const;
    const StimulusManifest* find_sequence(std::string_view sequence_id) const;

    bool operator==(const StudyDefinition&) const = default;
};

/// sequence_id -> true area_id
std::map<std::string, std::string> answer_key(const StudyDefinition& study);

enum class Strictness { Lenient, Strict };

/// Runs every validator over the definition. Structural problems (duplicate
/// areas, broken references, non-permutation origin ranks) are always errors.
/// Sequence-manifest failures are errors in Strict mode, warnings otherwise.
ValidationReport validate_study(const StudyDefinition& study,
                                Strictness strictness = Strictness::Strict);

}  // namespace vu::design
