#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gbv::lex {

enum class Domain { Healthcare, Violence, General };

Domain parse_domain(std::string_view s);
std::string_view to_string(Domain d);

struct Frame {
    std::string name;
    Domain domain = Domain::General;
    std::vector<std::string> elements; // sorted, unique, non-empty
};

struct FrameElement {
    std::string frame;
    std::string name;
};

struct LexicalUnit {
    std::string lemma_pos; // "lemma.pos", e.g. "diagnosticar.v"
    std::string frame;     // the single frame it evokes
};

struct QualiaRelation {
    std::string lu_a;
    std::string relation;
    std::string lu_b;
};

// Immutable after construction; safe for concurrent reads.
class Lexicon {
public:
    std::string format_version = "1";

    static Lexicon build(std::vector<Frame> frames,
                         std::vector<FrameElement> frame_elements,
                         std::vector<LexicalUnit> lexical_units,
                         std::vector<QualiaRelation> qualia_relations,
                         std::string format_version = "1");

    const std::vector<Frame>& frames() const { return frames_; }
    const std::vector<LexicalUnit>& lexical_units() const { return lus_; }
    const std::vector<QualiaRelation>& qualia_relations() const { return qualia_; }

    std::size_t frame_count() const { return frames_.size(); }
    std::size_t frame_element_count() const;
    std::size_t lexical_unit_count() const { return lus_.size(); }
    std::size_t qualia_count() const { return qualia_.size(); }

    const Frame* find_frame(std::string_view name) const;
    // Exact, case-sensitive lemma_pos lookup.
    const LexicalUnit* find_lu(std::string_view lemma_pos) const;
    bool frame_has_element(std::string_view frame, std::string_view fe) const;

    // All frames with the given domain, sorted by name.
    std::vector<const Frame*> frames_in_domain(Domain d) const;

    // All (relation label, partner) pairs where lu appears on either side,
    // ordered by (relation label, partner lemma). Throws UnknownLexicalUnit.
    std::vector<std::pair<std::string, const LexicalUnit*>>
    qualia_neighbors(std::string_view lemma_pos) const;

    // Lowercased lemma parts (without ".pos") of every LU, for the anonymizer.
    const std::vector<std::string>& lemma_set() const { return lemmas_; }

private:
    std::vector<Frame> frames_;
    std::vector<LexicalUnit> lus_;
    std::vector<QualiaRelation> qualia_;
    std::vector<std::string> lemmas_;
    std::map<std::string, std::size_t, std::less<>> frame_index_;
    std::map<std::string, std::size_t, std::less<>> lu_index_;
};

Lexicon load_lexicon(const std::string& path);
Lexicon parse_lexicon(std::string_view json_text);
std::string serialize_lexicon(const Lexicon& lex);
void save_lexicon(const Lexicon& lex, const std::string& path);

} // namespace gbv::lex
