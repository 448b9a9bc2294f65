#pragma once

#include <regex>
#include <span>
#include <string>
#include <vector>

#include "gbv/annotation.hpp"
#include "gbv/lexicon.hpp"

namespace gbv::anon {

enum class PiiKind { Date, Id, Phone, Place, NameCandidate };
enum class Action { Redact, Flag };

std::string_view to_string(PiiKind k);
std::string_view placeholder(PiiKind k); // "[DATE]", "[ID]", ...

struct PiiMatch {
    ann::Span span; // code points
    PiiKind kind = PiiKind::Date;
    std::string text;
    double confidence = 1.0;
    Action action = Action::Redact;
};

// Compiled regex patterns per PII kind. Pattern files hold one
// "<kind><TAB><regex>" per line; '#' lines are comments.
class PatternSet {
public:
    static PatternSet load(const std::string& path);
    static PatternSet parse(std::string_view text);
    static PatternSet defaults();

    const std::vector<std::pair<PiiKind, std::regex>>& patterns() const { return patterns_; }

private:
    std::vector<std::pair<PiiKind, std::regex>> patterns_;
};

// Place names, pre-normalized (lowercase, accent-folded).
class Gazetteer {
public:
    static Gazetteer load(const std::string& path);
    static Gazetteer from_entries(std::vector<std::string> entries);

    const std::vector<std::string>& entries() const { return entries_; }
    std::size_t max_entry_tokens() const { return max_tokens_; }

private:
    std::vector<std::string> entries_;
    std::size_t max_tokens_ = 0;
};

// Non-overlapping leftmost-longest regex matches; confidence 1.0.
std::vector<PiiMatch> regex_scrub(const std::string& text, const PatternSet& patterns);

// Token n-gram sliding window against the gazetteer with normalized
// Levenshtein similarity 1 - d/max(len); emits matches at or above threshold.
std::vector<PiiMatch> fuzzy_place_match(const std::string& text, const Gazetteer& gaz, double threshold = 0.85);

// Edit distance over code points.
std::size_t levenshtein(std::span<const char32_t> a, std::span<const char32_t> b);
std::size_t levenshtein(std::string_view a, std::string_view b);

struct FlaggedCandidate {
    std::size_t sentence = 0; // index into the corpus sentence list
    PiiMatch match;
};

// Two-phase frequency pass over the corpus: capitalized non-sentence-initial
// tokens with corpus frequency <= max_freq whose lowercased form is not a
// lexicon LU lemma are flagged for manual review (never auto-redacted).
std::vector<FlaggedCandidate> frequency_name_candidates(std::span<const ann::Sentence> corpus,
                                                        const lex::Lexicon& lexicon, int max_freq = 5);

struct AuditEntry {
    std::vector<PiiKind> kinds; // placeholder kinds only, never original text
};

// Replaces Redact matches with kind placeholders; Flag matches are left
// intact. Matches must be non-overlapping.
std::string apply_redactions(const std::string& text, std::vector<PiiMatch> matches, AuditEntry* audit = nullptr);

} // namespace gbv::anon
