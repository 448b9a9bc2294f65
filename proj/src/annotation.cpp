#include "gbv/annotation.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gbv/errors.hpp"
#include "gbv/util.hpp"

namespace gbv::ann {

using nlohmann::json;

namespace {

constexpr std::pair<Field, std::string_view> kFields[] = {
    {Field::subjective, "subjective"},
    {Field::objective, "objective"},
    {Field::assessment, "assessment"},
    {Field::plan, "plan"},
    {Field::referral_reason, "referral_reason"},
    {Field::complement, "complement"},
    {Field::observation, "observation"},
    {Field::icd_description, "icd_description"},
};

} // namespace

Field parse_field(std::string_view s) {
    for (auto [f, name] : kFields)
        if (name == s) return f;
    throw ParseError("unknown sentence field: " + std::string(s));
}

std::string_view to_string(Field f) {
    for (auto [field, name] : kFields)
        if (field == f) return name;
    return "subjective";
}

std::string normalize_lemma(std::string_view lemma) {
    std::string lowered = utf8_to_lower(lemma);
    std::string_view body = lowered;
    std::string suffix;
    if (auto dot = lowered.rfind('.'); dot != std::string::npos) {
        suffix = lowered.substr(dot);
        body = std::string_view(lowered).substr(0, dot);
    }
    auto cps = utf8_decode(body);
    std::size_t b = 0, e = cps.size();
    auto is_word = [](char32_t c) { return cp_is_letter(c) || (c >= U'0' && c <= U'9'); };
    while (b < e && !is_word(cps[b])) ++b;
    while (e > b && !is_word(cps[e - 1])) --e;
    return utf8_encode(std::span(cps).subspan(b, e - b)) + suffix;
}

namespace {

Span parse_span(const json& j, std::size_t text_len, const std::string& record_id, std::size_t sent_index,
                const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
        throw ParseError("record " + record_id + ": " + what + " span must be an integer pair");
    long long b = j[0].get<long long>(), e = j[1].get<long long>();
    if (b < 0 || e <= b || static_cast<std::size_t>(e) > text_len)
        throw SpanError("record " + record_id + ", sentence " + std::to_string(sent_index) + ": " + what +
                        " span [" + std::to_string(b) + ", " + std::to_string(e) + ") out of bounds for length " +
                        std::to_string(text_len));
    return Span{static_cast<std::size_t>(b), static_cast<std::size_t>(e)};
}

AnnotatedRecord parse_record(const json& doc, const lex::Lexicon& lexicon, std::size_t line_no) {
    if (!doc.is_object()) throw ParseError("line " + std::to_string(line_no) + ": record must be a JSON object");
    AnnotatedRecord rec;
    if (!doc.contains("record_id") || !doc["record_id"].is_string())
        throw ParseError("line " + std::to_string(line_no) + ": missing record_id");
    rec.record_id = doc["record_id"].get<std::string>();

    std::map<std::pair<std::string, int>, std::size_t> sentence_index;
    if (!doc.contains("sentences") || !doc["sentences"].is_array())
        throw ParseError("record " + rec.record_id + ": missing sentences array");
    for (const auto& js : doc["sentences"]) {
        Sentence s;
        s.record_id = rec.record_id;
        s.field = parse_field(js.value("field", ""));
        s.index = js.value("index", -1);
        s.text = js.value("text", "");
        if (s.index < 0) throw ParseError("record " + rec.record_id + ": sentence missing index");
        if (s.text.empty()) throw ParseError("record " + rec.record_id + ": sentence text must be non-empty");
        utf8_decode(s.text); // validate encoding up front
        auto key = std::make_pair(std::string(to_string(s.field)), s.index);
        if (!sentence_index.emplace(key, rec.sentences.size()).second)
            throw ParseError("record " + rec.record_id + ": duplicate sentence (" + key.first + ", " +
                             std::to_string(s.index) + ")");
        rec.sentences.push_back(std::move(s));
    }

    if (doc.contains("annotation_sets")) {
        if (!doc["annotation_sets"].is_array())
            throw ParseError("record " + rec.record_id + ": annotation_sets must be an array");
        for (const auto& ja : doc["annotation_sets"]) {
            AnnotationSet set;
            const auto& jref = ja.at("sentence");
            if (!jref.is_array() || jref.size() != 2)
                throw ParseError("record " + rec.record_id + ": annotation set sentence ref must be [field, index]");
            auto key = std::make_pair(jref[0].get<std::string>(), jref[1].get<int>());
            auto it = sentence_index.find(key);
            if (it == sentence_index.end())
                throw ParseError("record " + rec.record_id + ": annotation set references missing sentence (" +
                                 key.first + ", " + std::to_string(key.second) + ")");
            set.sentence = it->second;
            const Sentence& sent = rec.sentences[set.sentence];
            const std::size_t text_len = utf8_length(sent.text);

            set.frame = ja.value("frame", "");
            const lex::Frame* frame = lexicon.find_frame(set.frame);
            if (!frame)
                throw UnknownFrame("record " + rec.record_id + ": annotation set evokes unknown frame '" +
                                   set.frame + "'");
            set.target = parse_span(ja.at("target"), text_len, rec.record_id, set.sentence, "target");
            if (!ja.contains("lemma") || !ja["lemma"].is_string() || ja["lemma"].get<std::string>().empty())
                throw ParseError("record " + rec.record_id + ": annotation set missing target lemma");
            set.lemma = ja["lemma"].get<std::string>();
            if (ja.contains("lu") && ja["lu"].is_string()) set.lu = ja["lu"].get<std::string>();

            if (ja.contains("fe_spans")) {
                for (const auto& jf : ja["fe_spans"]) {
                    if (!jf.is_array() || jf.size() != 3)
                        throw ParseError("record " + rec.record_id + ": fe span must be [fe, begin, end]");
                    FeSpan fs;
                    fs.fe = jf[0].get<std::string>();
                    if (!lexicon.frame_has_element(set.frame, fs.fe))
                        throw ForeignFrameElement("record " + rec.record_id + ": frame element '" + fs.fe +
                                                  "' does not belong to frame '" + set.frame + "'");
                    json span_pair = json::array({jf[1], jf[2]});
                    fs.span = parse_span(span_pair, text_len, rec.record_id, set.sentence, "frame element");
                    set.fe_spans.push_back(std::move(fs));
                }
            }
            rec.sets.push_back(std::move(set));
        }
    }
    return rec;
}

} // namespace

std::vector<AnnotatedRecord> parse_annotations_text(std::string_view jsonl, const lex::Lexicon& lexicon) {
    std::vector<AnnotatedRecord> out;
    std::set<std::string> seen_ids;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= jsonl.size()) {
        std::size_t nl = jsonl.find('\n', start);
        std::string_view line = jsonl.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        start = nl == std::string_view::npos ? jsonl.size() + 1 : nl + 1;
        ++line_no;
        if (trim(line).empty()) continue;
        json doc;
        try {
            doc = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
        auto rec = parse_record(doc, lexicon, line_no);
        if (!seen_ids.insert(rec.record_id).second)
            throw ParseError("duplicate record_id: " + rec.record_id);
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<AnnotatedRecord> parse_annotations(const std::string& path, const lex::Lexicon& lexicon) {
    return parse_annotations_text(read_file(path), lexicon);
}

std::string serialize_annotations(std::span<const AnnotatedRecord> records) {
    std::string out;
    for (const AnnotatedRecord& rec : records) {
        json doc;
        doc["record_id"] = rec.record_id;
        doc["sentences"] = json::array();
        for (const Sentence& s : rec.sentences)
            doc["sentences"].push_back(
                {{"field", std::string(to_string(s.field))}, {"index", s.index}, {"text", s.text}});
        doc["annotation_sets"] = json::array();
        for (const AnnotationSet& set : rec.sets) {
            const Sentence& sent = rec.sentences[set.sentence];
            json ja;
            ja["sentence"] = json::array({std::string(to_string(sent.field)), sent.index});
            ja["target"] = json::array({set.target.begin, set.target.end});
            ja["frame"] = set.frame;
            ja["lemma"] = set.lemma;
            if (set.lu) ja["lu"] = *set.lu;
            ja["fe_spans"] = json::array();
            for (const FeSpan& fs : set.fe_spans)
                ja["fe_spans"].push_back(json::array({fs.fe, fs.span.begin, fs.span.end}));
            doc["annotation_sets"].push_back(std::move(ja));
        }
        out += doc.dump();
        out += '\n';
    }
    return out;
}

void save_annotations(std::span<const AnnotatedRecord> records, const std::string& path) {
    write_file(path, serialize_annotations(records));
}

AnnotatedRecord resolve_lexical_units(AnnotatedRecord rec, const lex::Lexicon& lexicon, ResolutionReport* report) {
    ResolutionReport local;
    for (AnnotationSet& set : rec.sets) {
        ++local.total;
        if (!set.lu) {
            std::string norm = normalize_lemma(set.lemma);
            const lex::LexicalUnit* lu = lexicon.find_lu(norm);
            if (lu && lu->frame == set.frame) set.lu = lu->lemma_pos;
        }
        if (set.lu) ++local.resolved;
    }
    if (report) {
        report->resolved += local.resolved;
        report->total += local.total;
    }
    return rec;
}

CoOccurrence CoOccurrence::make(std::string fr1, std::string fe1, std::string fr2, std::string fe2) {
    if (std::tie(fr2, fe2) < std::tie(fr1, fe1)) {
        std::swap(fr1, fr2);
        std::swap(fe1, fe2);
    }
    return CoOccurrence{std::move(fr1), std::move(fe1), std::move(fr2), std::move(fe2)};
}

std::string CoOccurrence::key() const {
    return "co:" + frame_a + "." + fe_a + "|" + frame_b + "." + fe_b;
}

std::map<CoOccurrence, int> fe_cooccurrences(const AnnotatedRecord& rec, const lex::Lexicon& lexicon) {
    std::map<CoOccurrence, int> out;
    // Group annotation sets by sentence; co-occurrence scope is the sentence.
    std::map<std::size_t, std::vector<const AnnotationSet*>> by_sentence;
    for (const AnnotationSet& set : rec.sets) by_sentence[set.sentence].push_back(&set);

    auto modeled = [&](const std::string& frame) {
        const lex::Frame* f = lexicon.find_frame(frame);
        return f && (f->domain == lex::Domain::Healthcare || f->domain == lex::Domain::Violence);
    };

    for (const auto& [sent, sets] : by_sentence) {
        for (std::size_t i = 0; i < sets.size(); ++i) {
            for (std::size_t j = i + 1; j < sets.size(); ++j) {
                const AnnotationSet& a = *sets[i];
                const AnnotationSet& b = *sets[j];
                if (a.frame == b.frame) continue;
                if (!modeled(a.frame) && !modeled(b.frame)) continue;
                for (const FeSpan& fa : a.fe_spans)
                    for (const FeSpan& fb : b.fe_spans)
                        out[CoOccurrence::make(a.frame, fa.fe, b.frame, fb.fe)] += 1;
            }
        }
    }
    return out;
}

} // namespace gbv::ann
