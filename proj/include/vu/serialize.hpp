#pragma once

#include <string>

#include "json.hpp"
#include "vu/error.hpp"
#include "vu/design.hpp"
#include "vu/model.hpp"

namespace vu {

using json = nlohmann::json;

void to_json(json& j, const StudyArea& a);
void from_json(const json& j, StudyArea& a);
void to_json(json& j, const ParticipantRecord& p);
void from_json(const json& j, ParticipantRecord& p);
void to_json(json& j, const SequenceResponse& r);
void from_json(const json& j, SequenceResponse& r);

json familiarity_to_json(const FamiliarityProfile& profile);
FamiliarityProfile familiarity_from_json(const json& j);

/// Runs `fn`, converting JSON type/key errors into vu::Error(SchemaViolation)
/// prefixed with `what`.
template <class Fn>
auto with_schema_errors(const std::string& what, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::SchemaViolation, what + ": " + e.what());
    }
}

}  // namespace vu

namespace vu::design {

void to_json(json& j, const Finding& f);
void to_json(json& j, const ValidationReport& r);
void to_json(json& j, const StimulusManifest& m);
void from_json(const json& j, StimulusManifest& m);
void to_json(json& j, const ImageRecord& r);
void from_json(const json& j, ImageRecord& r);
void to_json(json& j, const DatasetManifest& d);
void from_json(const json& j, DatasetManifest& d);
void to_json(json& j, const LoRATrainConfig& c);
void from_json(const json& j, LoRATrainConfig& c);
void to_json(json& j, const PhaseSchedule& s);
void from_json(const json& j, PhaseSchedule& s);
void to_json(json& j, const QuestionnaireInstrument& q);
void from_json(const json& j, QuestionnaireInstrument& q);
void to_json(json& j, const ReplicaMap& m);
void from_json(const json& j, ReplicaMap& m);
void to_json(json& j, const SectorGrid& g);
void to_json(json& j, const StudyDefinition& s);
void from_json(const json& j, StudyDefinition& s);
void to_json(json& j, const TokenFrequencyReport& r);

StudyDefinition parse_study_definition(const json& j);
StudyDefinition load_study_definition(const std::string& path);

}  // namespace vu::design
