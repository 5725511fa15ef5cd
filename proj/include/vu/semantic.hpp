#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vu/model.hpp"

namespace vu::semantic {

// Seven labels as used in the published element table. The five-theme view
// folds Quality, Characteristic and Material into one theme.
enum class ThematicGroup { Element, Environment, Typology, Color, Quality, Characteristic, Material };

enum class Theme { Elements, Environment, Typology, Color, QualitativeCharacteristics };

inline constexpr std::array<ThematicGroup, 7> kThematicGroups = {
    ThematicGroup::Element,  ThematicGroup::Environment,    ThematicGroup::Typology,
    ThematicGroup::Color,    ThematicGroup::Quality,        ThematicGroup::Characteristic,
    ThematicGroup::Material};

Theme project_theme(ThematicGroup group);

std::string_view to_string(ThematicGroup group);
std::string_view to_string(Theme theme);
ThematicGroup parse_thematic_group(std::string_view text);

struct LexiconEntry {
    std::string canonical_term;
    ThematicGroup group = ThematicGroup::Element;

    bool operator==(const LexiconEntry&) const = default;
};

class Lexicon;

/// Case-folds ASCII, strips punctuation and splits on whitespace. Runs of
/// CJK/kana characters are segmented by longest match against the lexicon's
/// surface forms; characters that match nothing become one-character tokens.
std::vector<std::string> normalize_tokens(std::string_view text, const Lexicon* lexicon = nullptr);

class Lexicon {
public:
    Lexicon() = default;
    explicit Lexicon(std::string version) : version_(std::move(version)) {}

    /// The surface form is normalized (tokens joined by one space). Throws
    /// SchemaViolation on an empty canonical term, an empty surface form, or
    /// a surface form that normalizes to one already present.
    void add(std::string_view surface, std::string canonical_term, ThematicGroup group);

    const LexiconEntry* find(std::string_view normalized_surface) const;

    const std::string& version() const { return version_; }
    std::size_t size() const { return entries_.size(); }
    std::size_t max_phrase_tokens() const { return max_phrase_tokens_; }
    const std::map<std::string, LexiconEntry>& entries() const { return entries_; }

    /// Single-token surface forms written in a non-spaced script, used for
    /// segmentation by normalize_tokens.
    const std::set<std::string>& unspaced_forms() const { return unspaced_forms_; }
    std::size_t max_unspaced_codepoints() const { return max_unspaced_codepoints_; }

    /// CSV with header "surface,canonical_term,group". Lines starting with
    /// '#' carry metadata ("# version: ...") or comments.
    static Lexicon parse(std::istream& in);
    static Lexicon load(const std::string& path);
    void write(std::ostream& out) const;

    bool operator==(const Lexicon&) const = default;

private:
    std::string version_;
    std::map<std::string, LexiconEntry> entries_;
    std::set<std::string> unspaced_forms_;
    std::size_t max_phrase_tokens_ = 0;
    std::size_t max_unspaced_codepoints_ = 0;
};

/// Starter lexicon: every published element term plus a handful of
/// secondary cues, with English and Japanese surface variants.
const Lexicon& starter_lexicon();

struct TermHit {
    std::string canonical_term;
    ThematicGroup group = ThematicGroup::Element;

    bool operator==(const TermHit&) const = default;
};

struct TermMapping {
    std::vector<TermHit> hits;
    std::size_t matched_tokens = 0;
    std::size_t unmatched_tokens = 0;
};

/// Greedy longest-phrase match over the token stream.
TermMapping map_terms(std::span<const std::string> tokens, const Lexicon& lexicon);

struct ElementCount {
    ThematicGroup group = ThematicGroup::Element;
    std::string canonical_term;
    std::size_t count = 0;

    bool operator==(const ElementCount&) const = default;
};

struct AreaTermStats {
    std::size_t correct_responses = 0;
    std::size_t hits = 0;
    std::size_t matched_tokens = 0;
    std::size_t unmatched_tokens = 0;
    std::size_t total_tokens = 0;

    bool operator==(const AreaTermStats&) const = default;
};

struct ElementFrequencyTable {
    std::map<std::string, std::vector<ElementCount>> by_area;
    std::map<std::string, AreaTermStats> stats;

    bool operator==(const ElementFrequencyTable&) const = default;
};

/// Count desc, then group order, then term.
bool element_order(const ElementCount& a, const ElementCount& b);

struct FrequencyOptions {
    std::array<bool, 4> include_items = {true, true, true, true};  // Q2..Q5
    // When set, only responses from participants in this view are used.
    std::optional<GroupView> group;
};

/// Per-area term counts over free text of correctly identified sequences.
/// `areas` lists every area that gets a (possibly empty) row; `answer_key`
/// maps sequence_id to its true area. `groups` is consulted only when
/// options.group is set.
ElementFrequencyTable element_frequencies(std::span<const SequenceResponse> responses,
                                          std::span<const StudyArea> areas,
                                          const std::map<std::string, std::string>& answer_key,
                                          const Lexicon& lexicon,
                                          const FrequencyOptions& options = {},
                                          const std::map<std::string, ParticipantGroup>* groups = nullptr);

/// Throws BadRequest when k < 1.
ElementFrequencyTable top_k_elements(const ElementFrequencyTable& table, int k = 3);

}  // namespace vu::semantic
