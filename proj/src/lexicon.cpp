#include "gbv/lexicon.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "gbv/errors.hpp"
#include "gbv/util.hpp"

namespace gbv::lex {

using nlohmann::json;

Domain parse_domain(std::string_view s) {
    if (s == "Healthcare") return Domain::Healthcare;
    if (s == "Violence") return Domain::Violence;
    if (s == "General") return Domain::General;
    throw ParseError("unknown domain: " + std::string(s));
}

std::string_view to_string(Domain d) {
    switch (d) {
        case Domain::Healthcare: return "Healthcare";
        case Domain::Violence: return "Violence";
        case Domain::General: return "General";
    }
    return "General";
}

namespace {

// Identifier charset shared by frame names, FE names, relation labels and
// lemma_pos strings. Keeping '.', '|', ',', '(' and ')' out of names makes
// the canonical feature-key strings unambiguous.
void check_identifier(std::string_view s, std::string_view what, bool allow_dot = false) {
    if (s.empty()) throw IntegrityError(std::string(what) + " must be non-empty");
    for (char c : s) {
        if (c == '|' || c == ',' || c == '(' || c == ')' || c == '\n' || c == '\t')
            throw IntegrityError(std::string(what) + " '" + std::string(s) + "' contains reserved character '" +
                                 std::string(1, c) + "'");
        if (c == '.' && !allow_dot)
            throw IntegrityError(std::string(what) + " '" + std::string(s) + "' contains reserved character '.'");
    }
}

} // namespace

Lexicon Lexicon::build(std::vector<Frame> frames,
                       std::vector<FrameElement> frame_elements,
                       std::vector<LexicalUnit> lexical_units,
                       std::vector<QualiaRelation> qualia_relations,
                       std::string format_version) {
    Lexicon lex;
    lex.format_version = std::move(format_version);
    lex.frames_ = std::move(frames);
    lex.lus_ = std::move(lexical_units);
    lex.qualia_ = std::move(qualia_relations);

    for (std::size_t i = 0; i < lex.frames_.size(); ++i) {
        const Frame& f = lex.frames_[i];
        check_identifier(f.name, "frame name");
        if (!lex.frame_index_.emplace(f.name, i).second)
            throw IntegrityError("duplicate frame: " + f.name);
    }

    // Attach frame elements to their frames.
    for (const FrameElement& fe : frame_elements) {
        check_identifier(fe.name, "frame element name");
        auto it = lex.frame_index_.find(fe.frame);
        if (it == lex.frame_index_.end())
            throw IntegrityError("frame element '" + fe.name + "' references unknown frame '" + fe.frame + "'");
        lex.frames_[it->second].elements.push_back(fe.name);
    }
    for (Frame& f : lex.frames_) {
        std::sort(f.elements.begin(), f.elements.end());
        auto dup = std::adjacent_find(f.elements.begin(), f.elements.end());
        if (dup != f.elements.end())
            throw IntegrityError("duplicate frame element '" + *dup + "' in frame '" + f.name + "'");
        if (f.elements.empty())
            throw IntegrityError("frame '" + f.name + "' has no frame elements");
    }

    for (std::size_t i = 0; i < lex.lus_.size(); ++i) {
        const LexicalUnit& lu = lex.lus_[i];
        check_identifier(lu.lemma_pos, "lexical unit", /*allow_dot=*/true);
        if (lu.lemma_pos.find('.') == std::string::npos)
            throw IntegrityError("lexical unit '" + lu.lemma_pos + "' is not of the form lemma.pos");
        if (!lex.frame_index_.count(lu.frame))
            throw IntegrityError("lexical unit '" + lu.lemma_pos + "' references unknown frame '" + lu.frame + "'");
        if (!lex.lu_index_.emplace(lu.lemma_pos, i).second)
            throw IntegrityError("lexical unit '" + lu.lemma_pos + "' declared more than once (one frame per LU)");
    }

    std::set<std::tuple<std::string, std::string, std::string>> seen;
    for (const QualiaRelation& q : lex.qualia_) {
        check_identifier(q.relation, "qualia relation label");
        if (!lex.lu_index_.count(q.lu_a))
            throw IntegrityError("qualia relation references unknown lexical unit '" + q.lu_a + "'");
        if (!lex.lu_index_.count(q.lu_b))
            throw IntegrityError("qualia relation references unknown lexical unit '" + q.lu_b + "'");
        if (q.lu_a == q.lu_b)
            throw IntegrityError("qualia relation links '" + q.lu_a + "' to itself");
        if (!seen.insert({q.lu_a, q.relation, q.lu_b}).second)
            throw IntegrityError("duplicate qualia relation (" + q.lu_a + ", " + q.relation + ", " + q.lu_b + ")");
    }

    std::set<std::string> lemmas;
    for (const LexicalUnit& lu : lex.lus_) {
        auto dot = lu.lemma_pos.rfind('.');
        lemmas.insert(utf8_to_lower(lu.lemma_pos.substr(0, dot)));
    }
    lex.lemmas_.assign(lemmas.begin(), lemmas.end());
    return lex;
}

std::size_t Lexicon::frame_element_count() const {
    std::size_t n = 0;
    for (const Frame& f : frames_) n += f.elements.size();
    return n;
}

const Frame* Lexicon::find_frame(std::string_view name) const {
    auto it = frame_index_.find(name);
    return it == frame_index_.end() ? nullptr : &frames_[it->second];
}

const LexicalUnit* Lexicon::find_lu(std::string_view lemma_pos) const {
    auto it = lu_index_.find(lemma_pos);
    return it == lu_index_.end() ? nullptr : &lus_[it->second];
}

bool Lexicon::frame_has_element(std::string_view frame, std::string_view fe) const {
    const Frame* f = find_frame(frame);
    if (!f) return false;
    return std::binary_search(f->elements.begin(), f->elements.end(), fe,
                              [](const auto& a, const auto& b) { return std::string_view(a) < std::string_view(b); });
}

std::vector<const Frame*> Lexicon::frames_in_domain(Domain d) const {
    std::vector<const Frame*> out;
    for (const Frame& f : frames_)
        if (f.domain == d) out.push_back(&f);
    std::sort(out.begin(), out.end(), [](const Frame* a, const Frame* b) { return a->name < b->name; });
    return out;
}

std::vector<std::pair<std::string, const LexicalUnit*>>
Lexicon::qualia_neighbors(std::string_view lemma_pos) const {
    const LexicalUnit* lu = find_lu(lemma_pos);
    if (!lu) throw UnknownLexicalUnit("unknown lexical unit: " + std::string(lemma_pos));
    std::vector<std::pair<std::string, const LexicalUnit*>> out;
    for (const QualiaRelation& q : qualia_) {
        if (q.lu_a == lu->lemma_pos)
            out.emplace_back(q.relation, find_lu(q.lu_b));
        else if (q.lu_b == lu->lemma_pos)
            out.emplace_back(q.relation, find_lu(q.lu_a));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second->lemma_pos < b.second->lemma_pos;
    });
    return out;
}

namespace {

const json* get_array(const json& doc, const char* name) {
    auto it = doc.find(name);
    if (it == doc.end() || !it->is_array())
        throw ParseError(std::string("lexicon document missing array '") + name + "'");
    return &*it;
}

std::string get_string(const json& obj, const char* field, const char* ctx) {
    auto it = obj.find(field);
    if (it == obj.end() || !it->is_string())
        throw ParseError(std::string(ctx) + " entry missing string field '" + field + "'");
    return it->get<std::string>();
}

} // namespace

Lexicon parse_lexicon(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed lexicon file: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("lexicon file must contain a JSON object");

    std::vector<Frame> frames;
    for (const auto& jf : *get_array(doc, "frames")) {
        Frame f;
        f.name = get_string(jf, "name", "frame");
        try {
            f.domain = parse_domain(get_string(jf, "domain", "frame"));
        } catch (const ParseError&) {
            throw ParseError("frame '" + f.name + "' has an unknown domain");
        }
        frames.push_back(std::move(f));
    }
    std::vector<FrameElement> fes;
    for (const auto& je : *get_array(doc, "frame_elements"))
        fes.push_back({get_string(je, "frame", "frame element"), get_string(je, "name", "frame element")});
    std::vector<LexicalUnit> lus;
    for (const auto& jl : *get_array(doc, "lexical_units"))
        lus.push_back({get_string(jl, "lemma_pos", "lexical unit"), get_string(jl, "frame", "lexical unit")});
    std::vector<QualiaRelation> qualia;
    for (const auto& jq : *get_array(doc, "qualia_relations"))
        qualia.push_back({get_string(jq, "lu_a", "qualia relation"), get_string(jq, "relation", "qualia relation"),
                          get_string(jq, "lu_b", "qualia relation")});

    std::string version = doc.value("format_version", "1");
    return Lexicon::build(std::move(frames), std::move(fes), std::move(lus), std::move(qualia), version);
}

Lexicon load_lexicon(const std::string& path) {
    return parse_lexicon(read_file(path));
}

std::string serialize_lexicon(const Lexicon& lex) {
    json doc;
    doc["format_version"] = lex.format_version;
    doc["frames"] = json::array();
    doc["frame_elements"] = json::array();
    for (const Frame& f : lex.frames()) {
        doc["frames"].push_back({{"name", f.name}, {"domain", std::string(to_string(f.domain))}});
        for (const std::string& fe : f.elements)
            doc["frame_elements"].push_back({{"frame", f.name}, {"name", fe}});
    }
    doc["lexical_units"] = json::array();
    for (const LexicalUnit& lu : lex.lexical_units())
        doc["lexical_units"].push_back({{"lemma_pos", lu.lemma_pos}, {"frame", lu.frame}});
    doc["qualia_relations"] = json::array();
    for (const QualiaRelation& q : lex.qualia_relations())
        doc["qualia_relations"].push_back({{"lu_a", q.lu_a}, {"relation", q.relation}, {"lu_b", q.lu_b}});
    return doc.dump(2) + "\n";
}

void save_lexicon(const Lexicon& lex, const std::string& path) {
    write_file(path, serialize_lexicon(lex));
}

} // namespace gbv::lex
