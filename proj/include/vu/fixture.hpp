#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "vu/design.hpp"
#include "vu/model.hpp"
#include "vu/semantic.hpp"
#include "vu/serialize.hpp"

namespace vu::fixture {

/// Reference dataset for the 36-participant pilot: nine areas, 20 local and
/// 16 foreign participants, one response per (participant, sequence) and a
/// free-text corpus. Built by constraint search from fixed aggregate
/// targets. The seed changes sequence labels, presentation seed and filler
/// text only; every computed metric is seed independent.
struct Fixture {
    design::StudyDefinition study;
    std::vector<ParticipantRecord> participants;
    std::vector<SequenceResponse> responses;
    semantic::Lexicon lexicon;
    std::vector<std::string> notes;  // targets the search could not meet exactly
    json manifest;
};

Fixture generate(std::uint64_t seed = 1);

/// Writes study.json, participants.csv, responses.csv, responses.jsonl,
/// lexicon.csv and fixture_manifest.json into `dir` (created if needed).
void write(const Fixture& fixture, const std::filesystem::path& dir);

// --- search building blocks, exposed for testing ---------------------------

/// 0/1 matrix with the given row and column sums (Gale-Ryser greedy).
/// Throws Unsatisfiable when no such matrix exists.
std::vector<std::vector<int>> zero_one_matrix(const std::vector<int>& row_sums,
                                              const std::vector<int>& col_sums);

/// Level counts (not, quick, regular, continuous) for `respondents` whose
/// weights sum to `tenths`, as balanced as possible. Empty when impossible.
std::optional<std::array<int, 4>> familiarity_counts(int respondents, int tenths);

/// Sizes 60-66 paired with (street, facade, detail) counts whose shares sit
/// within the tolerance of 63/35/2.
std::map<int, std::array<int, 3>> dataset_splits(double tolerance_pp = 3.0);

}  // namespace vu::fixture
