#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gbv::cohort {

// Calendar date with day-count arithmetic (proleptic Gregorian).
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    static Date parse(std::string_view iso); // "YYYY-MM-DD", validated
    std::string to_string() const;
    long to_days() const; // days since 1970-01-01
    static Date from_days(long days);
    auto operator<=>(const Date&) const = default;
};

bool is_valid_date(int year, int month, int day);

struct HealthRecord {
    std::string record_id;
    std::string person_id;
    Date encounter_date;
    std::vector<std::string> icd_codes;
    std::map<std::string, std::string> parameterized; // field name -> categorical value
};

struct ViolenceNotification {
    std::string notification_id;
    std::string person_id;
    Date notification_date;
    bool is_violence_positive = false;
    std::string observation_text;
};

struct DeathRecord {
    std::string person_id;
    Date death_date;
    std::string cause_icd;
};

enum class Label { Violence, NonViolence, LikelyViolence, Unknown };
enum class Provenance {
    IcdAggression,
    NotificationWindow,
    SimWindow,
    NonViolenceIcd,
    LikelyWindow,
    Default,
    ExpertReview,
};

Label parse_label(std::string_view s);
std::string_view to_string(Label l);
std::string_view to_string(Provenance p);

struct LabeledCase {
    std::string record_id;
    Label label = Label::Unknown;
    Provenance provenance = Provenance::Default;
};

// Set of ICD-10 blocks, configured as single blocks ("X85") or inclusive
// ranges ("X85-Y09"). Membership tests a code's three-character block.
class IcdSet {
public:
    static IcdSet parse(std::span<const std::string> specs);
    bool contains(std::string_view code) const;
    bool empty() const { return ranges_.empty(); }
    std::vector<std::string> specs() const { return specs_; }

private:
    std::vector<std::pair<std::string, std::string>> ranges_;
    std::vector<std::string> specs_;
};

// Validates an ICD-10-shaped code: letter, two digits, optional subcode.
bool is_valid_icd(std::string_view code);
std::string icd_block(std::string_view code);

struct LabelConfig {
    IcdSet aggression;    // default X85-Y09
    IcdSet non_violence;  // codes with small probability of violence
    int tight_window_days = 2;
    int likely_window_days = 30;

    static LabelConfig defaults();
    void validate() const; // throws ConfigError
};

// Immutable per-person index; safe for concurrent reads.
class NotificationIndex {
public:
    explicit NotificationIndex(std::span<const ViolenceNotification> notes);
    std::span<const ViolenceNotification> for_person(std::string_view person_id) const;

private:
    std::vector<ViolenceNotification> sorted_;
    std::map<std::string, std::pair<std::size_t, std::size_t>, std::less<>> by_person_;
};

class DeathIndex {
public:
    explicit DeathIndex(std::span<const DeathRecord> deaths);
    std::span<const DeathRecord> for_person(std::string_view person_id) const;

private:
    std::vector<DeathRecord> sorted_;
    std::map<std::string, std::pair<std::size_t, std::size_t>, std::less<>> by_person_;
};

// Applies the four labeling rules in strict precedence.
LabeledCase assign_label(const HealthRecord& rec, const NotificationIndex& notes, const DeathIndex& deaths,
                         const LabelConfig& cfg);

// Expert reclassification of LikelyViolence cases; overrides may assign
// Violence or NonViolence only.
std::vector<LabeledCase> apply_expert_review(std::vector<LabeledCase> cases,
                                             std::span<const std::pair<std::string, Label>> overrides);

struct DatasetConfig {
    double max_majority_ratio = 4.0;
};

struct Dataset {
    std::vector<LabeledCase> cases; // Violence and NonViolence only
    std::size_t violence_before = 0, nonviolence_before = 0;
    std::size_t violence_after = 0, nonviolence_after = 0;
};

// Keeps Violence/NonViolence cases and undersamples the majority class to
// floor(ratio * |minority|) with the seeded generator.
Dataset build_dataset(std::span<const LabeledCase> cases, const DatasetConfig& cfg, std::uint64_t seed);

// --- tabular IO ---
std::vector<HealthRecord> read_records_csv(const std::string& path);
std::vector<ViolenceNotification> read_notifications_csv(const std::string& path);
std::vector<DeathRecord> read_deaths_csv(const std::string& path);
void write_records_csv(std::span<const HealthRecord> records, const std::string& path);
void write_notifications_csv(std::span<const ViolenceNotification> notes, const std::string& path);
void write_deaths_csv(std::span<const DeathRecord> deaths, const std::string& path);
std::vector<std::pair<std::string, Label>> read_overrides_csv(const std::string& path);
void write_labeled_cases_csv(std::span<const LabeledCase> cases, const std::string& path);
std::vector<LabeledCase> read_labeled_cases_csv(const std::string& path);

} // namespace gbv::cohort
