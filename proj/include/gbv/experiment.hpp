#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "gbv/cohort.hpp"
#include "gbv/pipeline.hpp"

namespace gbv::experiment {

struct ExperimentPaths {
    std::string lexicon;
    std::string annotations;
    std::string records;
    std::string notifications;
    std::string deaths;
    std::string mapping;   // optional: field=value -> (frame, lemma_pos) table
    std::string overrides; // optional: expert review file
};

struct ExperimentConfig {
    ExperimentPaths paths;
    std::vector<std::string> aggression_icd = {"X85-Y09"};
    std::vector<std::string> non_violence_icd = {"U07", "Q00-Q99", "Z00-Z39", "H25-H28"};
    int tight_window_days = 2;
    int likely_window_days = 30;
    cohort::DatasetConfig dataset;
    std::uint64_t dataset_seed = 42;
    pipeline::PipelineConfig pipeline;

    static ExperimentConfig load(const std::string& path);
    static ExperimentConfig parse(std::string_view json_text);
    std::string canonical_json() const; // effective config echo, sorted keys
    std::uint64_t config_hash() const;
    cohort::LabelConfig label_config() const;
};

struct SetupOutcome {
    pipeline::CvResult cv;
};

struct ExperimentResult {
    std::string run_dir;
    std::uint64_t config_hash = 0;
    std::map<pipeline::Setup, pipeline::CvResult> results;
    std::map<std::string, std::size_t> provenance_histogram;
    std::size_t violence_before = 0, nonviolence_before = 0;
    std::size_t violence_after = 0, nonviolence_after = 0;
};

// Runs the full workflow (label, undersample, featurize, cross-validate) for
// the requested setups and writes all reports plus the run manifest into
// out_dir/<config-hash>/. Inputs are never mutated.
ExperimentResult run_experiment(const ExperimentConfig& cfg, std::span<const pipeline::Setup> setups,
                                const std::string& out_dir);

} // namespace gbv::experiment
