#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gbv/annotation.hpp"
#include "gbv/cohort.hpp"
#include "gbv/lexicon.hpp"

namespace gbv::feat {

enum class KeyKind { Frame, Fe, Lu, Co, Qualia, Cat };

std::string_view to_string(KeyKind k);

// One feature-space key. Ordering is (kind, canonical string), which is also
// the registry column order.
class FeatureKey {
public:
    static FeatureKey frame(std::string name);
    static FeatureKey fe(std::string frame, std::string fe);
    static FeatureKey lu(std::string lemma_pos);
    static FeatureKey co(const ann::CoOccurrence& c);
    static FeatureKey qualia(std::string relation, std::string lu_a, std::string lu_b);
    static FeatureKey cat(std::string field, std::string value);

    static FeatureKey parse(std::string_view s);

    KeyKind kind() const { return kind_; }
    const std::string& str() const { return str_; } // canonical, e.g. "fe:Diagnosing.Patient"
    const std::string& part(std::size_t i) const { return parts_[i]; }

    // Ordered by kind, then component-wise lexicographically; this keeps
    // cat: columns in field-then-value order regardless of field charset.
    bool operator<(const FeatureKey& o) const {
        if (kind_ != o.kind_) return kind_ < o.kind_;
        return parts_ < o.parts_;
    }
    bool operator==(const FeatureKey& o) const { return kind_ == o.kind_ && parts_ == o.parts_; }

private:
    FeatureKey(KeyKind kind, std::vector<std::string> parts);
    KeyKind kind_;
    std::vector<std::string> parts_;
    std::string str_;
};

using CountMap = std::map<FeatureKey, double>;

struct MappingEntry {
    std::string frame;
    std::string lemma_pos;
};

// field=value -> (frame, lemma_pos) table for the mixed setup.
class MappingTable {
public:
    void add(std::string field, std::string value, MappingEntry entry);
    const MappingEntry* find(const std::string& field, const std::string& value) const;
    std::size_t size() const { return table_.size(); }

    static MappingTable load(const std::string& path); // TSV: field, value, frame, lemma_pos

private:
    std::map<std::pair<std::string, std::string>, MappingEntry> table_;
};

struct FeaturizerConfig {
    int frame_min_count = 50;
    int lu_min_count = 25;
    double qualia_weight = 0.1;
    bool use_tfidf = true;
    bool include_parameterized = false;
    MappingTable mapping;

    void validate() const; // throws ConfigError
};

struct CoverageReport {
    std::size_t mapped = 0;
    std::size_t unmapped = 0;
    std::map<std::string, std::size_t> unmapped_by_field;
};

// Raw per-record counts of frame, FE, LU and co-occurrence keys.
CountMap count_features(const ann::AnnotatedRecord& rec, const lex::Lexicon& lexicon, const FeaturizerConfig& cfg);

// Adds weighted qualia keys for relations whose both endpoint LUs occur.
void add_qualia_features(CountMap& counts, const lex::Lexicon& lexicon, const FeaturizerConfig& cfg);

// Pseudo-counts from mapped parameterized fields.
CountMap map_parameterized(const cohort::HealthRecord& rec, const FeaturizerConfig& cfg,
                           CoverageReport* coverage = nullptr);

// Additive merge of two count maps.
void merge_counts(CountMap& into, const CountMap& other);

struct SparseVector {
    std::size_t dim = 0;
    std::vector<std::pair<std::size_t, double>> items; // indices strictly increasing

    double l1_norm() const;
};

// Frozen key -> column mapping.
class FeatureRegistry {
public:
    explicit FeatureRegistry(std::vector<FeatureKey> keys);

    std::size_t dimension() const { return keys_.size(); }
    const FeatureKey& key(std::size_t i) const { return keys_[i]; }
    std::optional<std::size_t> index(const FeatureKey& k) const;

    SparseVector vectorize(const CountMap& counts) const;

    std::string serialize() const; // one key per line, column order
    std::uint64_t hash() const;

private:
    std::vector<FeatureKey> keys_;
    std::map<FeatureKey, std::size_t> index_;
};

// Prunes rare features by corpus totals: frame/FE/co keys by their frame's
// total evocation count, LU/qualia keys by LU totals.
FeatureRegistry fit_registry(std::span<const CountMap> corpus, const FeaturizerConfig& cfg);

struct TfidfModel {
    std::size_t corpus_size = 0;
    std::vector<std::size_t> df;
    std::vector<double> idf;

    std::string serialize() const;
    std::uint64_t hash() const;
};

TfidfModel tfidf_fit(std::span<const SparseVector> vectors, const FeatureRegistry& registry);
// count * idf followed by L1 normalization; zero vectors stay zero.
SparseVector tfidf_transform(const TfidfModel& model, const SparseVector& v);

// One-hot encoding of parameterized fields. Columns are cat:<field>=<value>
// keys ordered by field then value; records missing a field (or carrying an
// unseen value at transform time) get all-zero columns for that field.
struct OneHotResult {
    FeatureRegistry registry;
    std::vector<std::vector<double>> matrix; // dense binary, row per record
};

FeatureRegistry one_hot_fit(std::span<const cohort::HealthRecord* const> records,
                            std::span<const std::string> fields);
std::vector<double> one_hot_row(const cohort::HealthRecord& rec, const FeatureRegistry& registry);
OneHotResult one_hot_encode(std::span<const cohort::HealthRecord* const> records,
                            std::span<const std::string> fields);

// Sparse triplet export: "row\tcol\tvalue" lines.
std::string to_triplets(std::span<const SparseVector> vectors);

} // namespace gbv::feat
