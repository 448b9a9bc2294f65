#include "gbv/featurize.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gbv/errors.hpp"
#include "gbv/util.hpp"

namespace gbv::feat {

std::string_view to_string(KeyKind k) {
    switch (k) {
        case KeyKind::Frame: return "frame";
        case KeyKind::Fe: return "fe";
        case KeyKind::Lu: return "lu";
        case KeyKind::Co: return "co";
        case KeyKind::Qualia: return "qualia";
        case KeyKind::Cat: return "cat";
    }
    return "frame";
}

FeatureKey::FeatureKey(KeyKind kind, std::vector<std::string> parts) : kind_(kind), parts_(std::move(parts)) {
    switch (kind_) {
        case KeyKind::Frame: str_ = "frame:" + parts_[0]; break;
        case KeyKind::Fe: str_ = "fe:" + parts_[0] + "." + parts_[1]; break;
        case KeyKind::Lu: str_ = "lu:" + parts_[0]; break;
        case KeyKind::Co: str_ = "co:" + parts_[0] + "." + parts_[1] + "|" + parts_[2] + "." + parts_[3]; break;
        case KeyKind::Qualia: str_ = "qualia:" + parts_[0] + "(" + parts_[1] + "," + parts_[2] + ")"; break;
        case KeyKind::Cat: str_ = "cat:" + parts_[0] + "=" + parts_[1]; break;
    }
}

FeatureKey FeatureKey::frame(std::string name) { return FeatureKey(KeyKind::Frame, {std::move(name)}); }
FeatureKey FeatureKey::fe(std::string frame, std::string fe) {
    return FeatureKey(KeyKind::Fe, {std::move(frame), std::move(fe)});
}
FeatureKey FeatureKey::lu(std::string lemma_pos) { return FeatureKey(KeyKind::Lu, {std::move(lemma_pos)}); }
FeatureKey FeatureKey::co(const ann::CoOccurrence& c) {
    return FeatureKey(KeyKind::Co, {c.frame_a, c.fe_a, c.frame_b, c.fe_b});
}
FeatureKey FeatureKey::qualia(std::string relation, std::string lu_a, std::string lu_b) {
    return FeatureKey(KeyKind::Qualia, {std::move(relation), std::move(lu_a), std::move(lu_b)});
}
FeatureKey FeatureKey::cat(std::string field, std::string value) {
    return FeatureKey(KeyKind::Cat, {std::move(field), std::move(value)});
}

FeatureKey FeatureKey::parse(std::string_view s) {
    auto colon = s.find(':');
    if (colon == std::string_view::npos) throw ParseError("malformed feature key: " + std::string(s));
    std::string_view kind = s.substr(0, colon);
    std::string_view rest = s.substr(colon + 1);
    auto require = [&](bool ok) {
        if (!ok) throw ParseError("malformed feature key: " + std::string(s));
    };
    if (kind == "frame") {
        require(!rest.empty());
        return frame(std::string(rest));
    }
    if (kind == "fe") {
        auto dot = rest.find('.');
        require(dot != std::string_view::npos);
        return fe(std::string(rest.substr(0, dot)), std::string(rest.substr(dot + 1)));
    }
    if (kind == "lu") {
        require(!rest.empty());
        return lu(std::string(rest));
    }
    if (kind == "co") {
        auto bar = rest.find('|');
        require(bar != std::string_view::npos);
        std::string_view a = rest.substr(0, bar), b = rest.substr(bar + 1);
        auto da = a.find('.'), db = b.find('.');
        require(da != std::string_view::npos && db != std::string_view::npos);
        return FeatureKey(KeyKind::Co, {std::string(a.substr(0, da)), std::string(a.substr(da + 1)),
                                        std::string(b.substr(0, db)), std::string(b.substr(db + 1))});
    }
    if (kind == "qualia") {
        auto open = rest.find('(');
        require(open != std::string_view::npos && rest.back() == ')');
        std::string_view inner = rest.substr(open + 1, rest.size() - open - 2);
        auto comma = inner.find(',');
        require(comma != std::string_view::npos);
        return qualia(std::string(rest.substr(0, open)), std::string(inner.substr(0, comma)),
                      std::string(inner.substr(comma + 1)));
    }
    if (kind == "cat") {
        auto eq = rest.find('=');
        require(eq != std::string_view::npos);
        return cat(std::string(rest.substr(0, eq)), std::string(rest.substr(eq + 1)));
    }
    throw ParseError("unknown feature key kind: " + std::string(s));
}

void MappingTable::add(std::string field, std::string value, MappingEntry entry) {
    table_[{std::move(field), std::move(value)}] = std::move(entry);
}

const MappingEntry* MappingTable::find(const std::string& field, const std::string& value) const {
    auto it = table_.find({field, value});
    return it == table_.end() ? nullptr : &it->second;
}

MappingTable MappingTable::load(const std::string& path) {
    MappingTable table;
    std::string content = read_file(path);
    std::size_t line_no = 0;
    for (const std::string& raw : split(content, '\n')) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        auto parts = split(line, '\t');
        if (parts.size() != 4)
            throw ParseError("mapping table line " + std::to_string(line_no) +
                             ": expected 4 tab-separated fields (field, value, frame, lemma_pos)");
        table.add(parts[0], parts[1], {parts[2], parts[3]});
    }
    return table;
}

void FeaturizerConfig::validate() const {
    if (frame_min_count < 0 || lu_min_count < 0) throw ConfigError("feature min counts must be >= 0");
    if (!(qualia_weight > 0.0 && qualia_weight <= 1.0))
        throw ConfigError("qualia_weight must be in (0, 1], got " + format_double(qualia_weight, 6));
}

CountMap count_features(const ann::AnnotatedRecord& rec, const lex::Lexicon& lexicon, const FeaturizerConfig& cfg) {
    cfg.validate();
    CountMap counts;
    for (const ann::AnnotationSet& set : rec.sets) {
        counts[FeatureKey::frame(set.frame)] += 1.0;
        for (const ann::FeSpan& fs : set.fe_spans) counts[FeatureKey::fe(set.frame, fs.fe)] += 1.0;
        if (set.lu) counts[FeatureKey::lu(*set.lu)] += 1.0;
    }
    for (const auto& [co, n] : ann::fe_cooccurrences(rec, lexicon)) counts[FeatureKey::co(co)] += n;
    return counts;
}

void add_qualia_features(CountMap& counts, const lex::Lexicon& lexicon, const FeaturizerConfig& cfg) {
    cfg.validate();
    CountMap added;
    for (const lex::QualiaRelation& q : lexicon.qualia_relations()) {
        auto a = counts.find(FeatureKey::lu(q.lu_a));
        auto b = counts.find(FeatureKey::lu(q.lu_b));
        if (a == counts.end() || b == counts.end()) continue;
        added[FeatureKey::qualia(q.relation, q.lu_a, q.lu_b)] =
            cfg.qualia_weight * std::min(a->second, b->second);
    }
    for (auto& [k, v] : added) counts[k] = v;
}

CountMap map_parameterized(const cohort::HealthRecord& rec, const FeaturizerConfig& cfg, CoverageReport* coverage) {
    if (!cfg.include_parameterized)
        throw ConfigError("map_parameterized requires include_parameterized = true");
    CountMap counts;
    for (const auto& [field, value] : rec.parameterized) {
        const MappingEntry* entry = cfg.mapping.find(field, value);
        if (!entry) {
            if (coverage) {
                ++coverage->unmapped;
                ++coverage->unmapped_by_field[field];
            }
            continue;
        }
        if (coverage) ++coverage->mapped;
        counts[FeatureKey::frame(entry->frame)] += 1.0;
        counts[FeatureKey::lu(entry->lemma_pos)] += 1.0;
    }
    return counts;
}

void merge_counts(CountMap& into, const CountMap& other) {
    for (const auto& [k, v] : other) into[k] += v;
}

double SparseVector::l1_norm() const {
    double s = 0.0;
    for (const auto& [i, v] : items) s += std::fabs(v);
    return s;
}

FeatureRegistry::FeatureRegistry(std::vector<FeatureKey> keys) : keys_(std::move(keys)) {
    std::sort(keys_.begin(), keys_.end());
    keys_.erase(std::unique(keys_.begin(), keys_.end()), keys_.end());
    for (std::size_t i = 0; i < keys_.size(); ++i) index_.emplace(keys_[i], i);
}

std::optional<std::size_t> FeatureRegistry::index(const FeatureKey& k) const {
    auto it = index_.find(k);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

SparseVector FeatureRegistry::vectorize(const CountMap& counts) const {
    SparseVector v;
    v.dim = keys_.size();
    for (const auto& [key, value] : counts) {
        auto it = index_.find(key);
        if (it != index_.end() && value != 0.0) v.items.emplace_back(it->second, value);
    }
    std::sort(v.items.begin(), v.items.end());
    return v;
}

std::string FeatureRegistry::serialize() const {
    std::string out;
    for (const FeatureKey& k : keys_) {
        out += k.str();
        out += '\n';
    }
    return out;
}

std::uint64_t FeatureRegistry::hash() const { return fnv1a64(serialize()); }

FeatureRegistry fit_registry(std::span<const CountMap> corpus, const FeaturizerConfig& cfg) {
    cfg.validate();
    if (corpus.empty()) throw EmptyRegistryError("cannot fit a registry on an empty corpus");

    std::map<std::string, double> frame_totals; // total evocations per frame
    std::map<std::string, double> lu_totals;
    std::set<FeatureKey> observed;
    for (const CountMap& counts : corpus) {
        for (const auto& [key, value] : counts) {
            observed.insert(key);
            if (key.kind() == KeyKind::Frame) frame_totals[key.part(0)] += value;
            else if (key.kind() == KeyKind::Lu) lu_totals[key.part(0)] += value;
        }
    }

    auto frame_passes = [&](const std::string& frame) {
        auto it = frame_totals.find(frame);
        return it != frame_totals.end() && it->second >= cfg.frame_min_count;
    };
    auto lu_passes = [&](const std::string& lu) {
        auto it = lu_totals.find(lu);
        return it != lu_totals.end() && it->second >= cfg.lu_min_count;
    };

    std::vector<FeatureKey> kept;
    for (const FeatureKey& key : observed) {
        bool keep = false;
        switch (key.kind()) {
            case KeyKind::Frame: keep = frame_passes(key.part(0)); break;
            case KeyKind::Fe: keep = frame_passes(key.part(0)); break;
            case KeyKind::Co: keep = frame_passes(key.part(0)) && frame_passes(key.part(2)); break;
            case KeyKind::Lu: keep = lu_passes(key.part(0)); break;
            case KeyKind::Qualia: keep = lu_passes(key.part(1)) && lu_passes(key.part(2)); break;
            case KeyKind::Cat: keep = true; break;
        }
        if (keep) kept.push_back(key);
    }
    if (kept.empty()) throw EmptyRegistryError("all features pruned by min-count thresholds");
    return FeatureRegistry(std::move(kept));
}

std::string TfidfModel::serialize() const {
    std::string out = "N=" + std::to_string(corpus_size) + "\n";
    for (std::size_t i = 0; i < df.size(); ++i)
        out += std::to_string(i) + "\t" + std::to_string(df[i]) + "\t" + format_double(idf[i], 12) + "\n";
    return out;
}

std::uint64_t TfidfModel::hash() const { return fnv1a64(serialize()); }

TfidfModel tfidf_fit(std::span<const SparseVector> vectors, const FeatureRegistry& registry) {
    TfidfModel m;
    m.corpus_size = vectors.size();
    m.df.assign(registry.dimension(), 0);
    for (const SparseVector& v : vectors) {
        if (v.dim != registry.dimension())
            throw ShapeError("vector dimension " + std::to_string(v.dim) + " does not match registry dimension " +
                             std::to_string(registry.dimension()));
        for (const auto& [i, value] : v.items)
            if (value != 0.0) ++m.df[i];
    }
    m.idf.resize(m.df.size());
    const double n = static_cast<double>(m.corpus_size);
    for (std::size_t i = 0; i < m.df.size(); ++i)
        m.idf[i] = std::log((1.0 + n) / (1.0 + static_cast<double>(m.df[i]))) + 1.0;
    return m;
}

SparseVector tfidf_transform(const TfidfModel& model, const SparseVector& v) {
    if (v.dim != model.idf.size())
        throw ShapeError("vector dimension " + std::to_string(v.dim) + " does not match model dimension " +
                         std::to_string(model.idf.size()));
    SparseVector out;
    out.dim = v.dim;
    out.items.reserve(v.items.size());
    double l1 = 0.0;
    for (const auto& [i, value] : v.items) {
        double w = value * model.idf[i];
        out.items.emplace_back(i, w);
        l1 += std::fabs(w);
    }
    if (l1 > 0.0)
        for (auto& [i, w] : out.items) w /= l1;
    return out;
}

FeatureRegistry one_hot_fit(std::span<const cohort::HealthRecord* const> records,
                            std::span<const std::string> fields) {
    if (fields.empty()) throw ConfigError("one-hot encoding requires a non-empty field list");
    std::vector<FeatureKey> keys;
    std::set<std::pair<std::string, std::string>> seen;
    for (const std::string& field : fields)
        for (const cohort::HealthRecord* rec : records) {
            auto it = rec->parameterized.find(field);
            if (it != rec->parameterized.end() && !it->second.empty() && seen.emplace(field, it->second).second)
                keys.push_back(FeatureKey::cat(field, it->second));
        }
    return FeatureRegistry(std::move(keys));
}

std::vector<double> one_hot_row(const cohort::HealthRecord& rec, const FeatureRegistry& registry) {
    std::vector<double> row(registry.dimension(), 0.0);
    for (const auto& [field, value] : rec.parameterized) {
        auto idx = registry.index(FeatureKey::cat(field, value));
        if (idx) row[*idx] = 1.0;
    }
    return row;
}

OneHotResult one_hot_encode(std::span<const cohort::HealthRecord* const> records,
                            std::span<const std::string> fields) {
    FeatureRegistry registry = one_hot_fit(records, fields);
    std::vector<std::vector<double>> matrix;
    matrix.reserve(records.size());
    for (const cohort::HealthRecord* rec : records) matrix.push_back(one_hot_row(*rec, registry));
    return OneHotResult{std::move(registry), std::move(matrix)};
}

std::string to_triplets(std::span<const SparseVector> vectors) {
    std::string out;
    for (std::size_t r = 0; r < vectors.size(); ++r)
        for (const auto& [c, v] : vectors[r].items)
            out += std::to_string(r) + "\t" + std::to_string(c) + "\t" + format_double(v, 12) + "\n";
    return out;
}

} // namespace gbv::feat
