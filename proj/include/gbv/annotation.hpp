#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gbv/lexicon.hpp"

namespace gbv::ann {

// Open-text fields of an encounter record.
enum class Field {
    subjective,
    objective,
    assessment,
    plan,
    referral_reason,
    complement,
    observation,
    icd_description,
};

Field parse_field(std::string_view s);
std::string_view to_string(Field f);

// Half-open character span, indexed over code points.
struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;
    auto operator<=>(const Span&) const = default;
};

struct Sentence {
    std::string record_id;
    Field field = Field::subjective;
    int index = 0; // ordinal within field
    std::string text;
};

struct FeSpan {
    std::string fe;
    Span span;
};

struct AnnotationSet {
    std::size_t sentence = 0; // position in the owning record's sentence list
    Span target;
    std::string frame;
    std::string lemma;            // target lemma as delivered by the parser
    std::optional<std::string> lu; // resolved lexicon lemma_pos
    std::vector<FeSpan> fe_spans;
};

struct AnnotatedRecord {
    std::string record_id;
    std::vector<Sentence> sentences;
    std::vector<AnnotationSet> sets;
};

// Lowercases and strips surrounding punctuation from the lemma part,
// keeping the ".pos" suffix as delivered.
std::string normalize_lemma(std::string_view lemma);

std::vector<AnnotatedRecord> parse_annotations(const std::string& path, const lex::Lexicon& lexicon);
std::vector<AnnotatedRecord> parse_annotations_text(std::string_view jsonl, const lex::Lexicon& lexicon);
std::string serialize_annotations(std::span<const AnnotatedRecord> records);
void save_annotations(std::span<const AnnotatedRecord> records, const std::string& path);

struct ResolutionReport {
    std::size_t resolved = 0;
    std::size_t total = 0;
    double rate() const { return total == 0 ? 0.0 : static_cast<double>(resolved) / static_cast<double>(total); }
};

// Attaches lexicon LUs to annotation sets whose normalized lemma matches a
// lexicon entry evoking the same frame. Non-resolution is data, not failure.
AnnotatedRecord resolve_lexical_units(AnnotatedRecord rec, const lex::Lexicon& lexicon,
                                      ResolutionReport* report = nullptr);

// One unordered frame-element co-occurrence, components canonically ordered
// by (frame name, then FE name).
struct CoOccurrence {
    std::string frame_a, fe_a, frame_b, fe_b;

    static CoOccurrence make(std::string fr1, std::string fe1, std::string fr2, std::string fe2);
    std::string key() const; // "co:FrameA.FEx|FrameB.FEy"
    auto operator<=>(const CoOccurrence&) const = default;
};

// Multiset of FE-instance pairs across annotation sets in the same sentence
// that evoke different frames, at least one of which is in the Healthcare or
// Violence domain.
std::map<CoOccurrence, int> fe_cooccurrences(const AnnotatedRecord& rec, const lex::Lexicon& lexicon);

} // namespace gbv::ann
