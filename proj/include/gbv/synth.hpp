#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gbv/annotation.hpp"
#include "gbv/cohort.hpp"
#include "gbv/lexicon.hpp"

namespace gbv::synth {

struct SynthConfig {
    std::uint64_t seed = 42;
    std::size_t n_records = 800;
    double violence_fraction = 0.2;
    // Probability mass moved from the base frame distribution toward
    // violence-correlated frames in positive records.
    double signal_strength = 0.7;
    // Correlation of parameterized fields with the label.
    double demographic_informativeness = 0.1;
    int sentences_per_record = 4;

    void validate() const; // throws ConfigError
};

struct DemoField {
    std::string name;
    std::vector<std::string> values;
};

// Fixed 20-field schema totaling 142 distinct values.
const std::vector<DemoField>& demographic_schema();

struct SynthCorpus {
    std::vector<cohort::HealthRecord> records;
    std::vector<cohort::ViolenceNotification> notifications;
    std::vector<cohort::DeathRecord> deaths;
    std::vector<ann::AnnotatedRecord> annotations;
    std::vector<std::pair<std::string, cohort::Label>> truth; // ground-truth labels
};

// Deterministic per seed. Positive records receive linkage evidence
// (aggression ICD, tight-window notification, or aggression death record)
// such that the cohort labeling rules reconstruct the ground truth exactly.
SynthCorpus generate_corpus(const SynthConfig& cfg, const lex::Lexicon& lexicon);

// Writes records.csv, notifications.csv, deaths.csv, annotations.jsonl and
// labels_truth.csv into the directory.
void write_corpus(const SynthCorpus& corpus, const std::string& dir);

} // namespace gbv::synth
