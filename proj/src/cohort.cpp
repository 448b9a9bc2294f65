#include "gbv/cohort.hpp"

#include <algorithm>
#include <cstdio>

#include "gbv/csv.hpp"
#include "gbv/errors.hpp"
#include "gbv/util.hpp"

namespace gbv::cohort {

bool is_valid_date(int y, int m, int d) {
    if (m < 1 || m > 12 || d < 1) return false;
    static const int mdays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int len = mdays[m - 1];
    if (m == 2 && ((y % 4 == 0 && y % 100 != 0) || y % 400 == 0)) len = 29;
    return d <= len;
}

Date Date::parse(std::string_view iso) {
    int y = 0, m = 0, d = 0;
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-' ||
        std::sscanf(std::string(iso).c_str(), "%d-%d-%d", &y, &m, &d) != 3 || !is_valid_date(y, m, d))
        throw ParseError("invalid date: '" + std::string(iso) + "' (expected YYYY-MM-DD)");
    return Date{y, m, d};
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

long Date::to_days() const {
    // Howard Hinnant's days_from_civil.
    int y = year - (month <= 2);
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (month + (month > 2 ? -3 : 9)) + 2) / 5 + day - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097L + static_cast<long>(doe) - 719468L;
}

Date Date::from_days(long z) {
    z += 719468;
    const long era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long y = static_cast<long>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

Label parse_label(std::string_view s) {
    if (s == "Violence") return Label::Violence;
    if (s == "NonViolence") return Label::NonViolence;
    if (s == "LikelyViolence") return Label::LikelyViolence;
    if (s == "Unknown") return Label::Unknown;
    throw ParseError("unknown label: " + std::string(s));
}

std::string_view to_string(Label l) {
    switch (l) {
        case Label::Violence: return "Violence";
        case Label::NonViolence: return "NonViolence";
        case Label::LikelyViolence: return "LikelyViolence";
        case Label::Unknown: return "Unknown";
    }
    return "Unknown";
}

std::string_view to_string(Provenance p) {
    switch (p) {
        case Provenance::IcdAggression: return "IcdAggression";
        case Provenance::NotificationWindow: return "NotificationWindow";
        case Provenance::SimWindow: return "SimWindow";
        case Provenance::NonViolenceIcd: return "NonViolenceIcd";
        case Provenance::LikelyWindow: return "LikelyWindow";
        case Provenance::Default: return "Default";
        case Provenance::ExpertReview: return "ExpertReview";
    }
    return "Default";
}

bool is_valid_icd(std::string_view code) {
    if (code.size() < 3) return false;
    if (code[0] < 'A' || code[0] > 'Z') return false;
    if (!std::isdigit(static_cast<unsigned char>(code[1])) || !std::isdigit(static_cast<unsigned char>(code[2])))
        return false;
    for (std::size_t i = 3; i < code.size(); ++i) {
        char c = code[i];
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.') return false;
    }
    return true;
}

std::string icd_block(std::string_view code) {
    return std::string(code.substr(0, 3));
}

IcdSet IcdSet::parse(std::span<const std::string> specs) {
    IcdSet set;
    for (const std::string& spec : specs) {
        std::string lo, hi;
        if (auto dash = spec.find('-'); dash != std::string::npos) {
            lo = spec.substr(0, dash);
            hi = spec.substr(dash + 1);
        } else {
            lo = hi = spec;
        }
        if (lo.size() != 3 || hi.size() != 3 || !is_valid_icd(lo) || !is_valid_icd(hi) || hi < lo)
            throw ConfigError("invalid ICD block spec: '" + spec + "'");
        set.ranges_.emplace_back(lo, hi);
        set.specs_.push_back(spec);
    }
    return set;
}

bool IcdSet::contains(std::string_view code) const {
    std::string block = icd_block(code);
    for (const auto& [lo, hi] : ranges_)
        if (block >= lo && block <= hi) return true;
    return false;
}

LabelConfig LabelConfig::defaults() {
    LabelConfig cfg;
    std::vector<std::string> aggr = {"X85-Y09"};
    std::vector<std::string> nonv = {"U07", "Q00-Q99", "Z00-Z39", "H25-H28"};
    cfg.aggression = IcdSet::parse(aggr);
    cfg.non_violence = IcdSet::parse(nonv);
    return cfg;
}

void LabelConfig::validate() const {
    if (aggression.empty()) throw ConfigError("aggression ICD set must be non-empty");
    if (tight_window_days < 0 || likely_window_days < 0) throw ConfigError("label windows must be non-negative");
    if (tight_window_days > likely_window_days)
        throw ConfigError("tight window (" + std::to_string(tight_window_days) + ") exceeds likely window (" +
                          std::to_string(likely_window_days) + ")");
}

namespace {

template <typename T, typename DateOf>
void build_person_index(std::vector<T>& sorted,
                        std::map<std::string, std::pair<std::size_t, std::size_t>, std::less<>>& index,
                        DateOf date_of) {
    std::stable_sort(sorted.begin(), sorted.end(), [&](const T& a, const T& b) {
        if (a.person_id != b.person_id) return a.person_id < b.person_id;
        return date_of(a).to_days() < date_of(b).to_days();
    });
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j].person_id == sorted[i].person_id) ++j;
        index.emplace(sorted[i].person_id, std::make_pair(i, j));
        i = j;
    }
}

} // namespace

NotificationIndex::NotificationIndex(std::span<const ViolenceNotification> notes)
    : sorted_(notes.begin(), notes.end()) {
    build_person_index(sorted_, by_person_, [](const ViolenceNotification& n) { return n.notification_date; });
}

std::span<const ViolenceNotification> NotificationIndex::for_person(std::string_view person_id) const {
    auto it = by_person_.find(person_id);
    if (it == by_person_.end()) return {};
    return std::span(sorted_).subspan(it->second.first, it->second.second - it->second.first);
}

DeathIndex::DeathIndex(std::span<const DeathRecord> deaths) : sorted_(deaths.begin(), deaths.end()) {
    build_person_index(sorted_, by_person_, [](const DeathRecord& d) { return d.death_date; });
}

std::span<const DeathRecord> DeathIndex::for_person(std::string_view person_id) const {
    auto it = by_person_.find(person_id);
    if (it == by_person_.end()) return {};
    return std::span(sorted_).subspan(it->second.first, it->second.second - it->second.first);
}

LabeledCase assign_label(const HealthRecord& rec, const NotificationIndex& notes, const DeathIndex& deaths,
                         const LabelConfig& cfg) {
    cfg.validate();
    const long rec_days = rec.encounter_date.to_days();
    auto within = [&](const Date& d, int window) { return std::labs(d.to_days() - rec_days) <= window; };

    // Rule 1: Violence.
    for (const std::string& code : rec.icd_codes)
        if (cfg.aggression.contains(code)) return {rec.record_id, Label::Violence, Provenance::IcdAggression};
    bool positive_in_likely_window = false;
    for (const ViolenceNotification& n : notes.for_person(rec.person_id)) {
        if (!n.is_violence_positive) continue;
        if (within(n.notification_date, cfg.tight_window_days))
            return {rec.record_id, Label::Violence, Provenance::NotificationWindow};
        if (within(n.notification_date, cfg.likely_window_days)) positive_in_likely_window = true;
    }
    for (const DeathRecord& d : deaths.for_person(rec.person_id))
        if (cfg.aggression.contains(d.cause_icd) && within(d.death_date, cfg.tight_window_days))
            return {rec.record_id, Label::Violence, Provenance::SimWindow};

    // Rule 2: NonViolence — at least one ICD code and all in the low-risk set.
    if (!rec.icd_codes.empty()) {
        bool all_nonviolence = true;
        for (const std::string& code : rec.icd_codes)
            if (!cfg.non_violence.contains(code)) all_nonviolence = false;
        if (all_nonviolence) return {rec.record_id, Label::NonViolence, Provenance::NonViolenceIcd};
    }

    // Rule 3: LikelyViolence.
    if (positive_in_likely_window) return {rec.record_id, Label::LikelyViolence, Provenance::LikelyWindow};

    // Rule 4: Unknown.
    return {rec.record_id, Label::Unknown, Provenance::Default};
}

std::vector<LabeledCase> apply_expert_review(std::vector<LabeledCase> cases,
                                             std::span<const std::pair<std::string, Label>> overrides) {
    std::map<std::string, std::size_t> by_id;
    for (std::size_t i = 0; i < cases.size(); ++i) by_id.emplace(cases[i].record_id, i);
    for (const auto& [record_id, label] : overrides) {
        if (label != Label::Violence && label != Label::NonViolence)
            throw OverrideTargetError("expert review may assign Violence or NonViolence only (record " + record_id +
                                      ")");
        auto it = by_id.find(record_id);
        if (it == by_id.end()) throw OverrideTargetError("override targets unknown record: " + record_id);
        LabeledCase& c = cases[it->second];
        if (c.label != Label::LikelyViolence)
            throw OverrideTargetError("override targets non-LikelyViolence case: " + record_id + " (" +
                                      std::string(to_string(c.label)) + ")");
        c.label = label;
        c.provenance = Provenance::ExpertReview;
    }
    return cases;
}

Dataset build_dataset(std::span<const LabeledCase> cases, const DatasetConfig& cfg, std::uint64_t seed) {
    if (cfg.max_majority_ratio < 1.0) throw ConfigError("max_majority_ratio must be >= 1");
    Dataset ds;
    std::vector<std::size_t> violence, nonviolence;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        if (cases[i].label == Label::Violence) violence.push_back(i);
        else if (cases[i].label == Label::NonViolence) nonviolence.push_back(i);
    }
    ds.violence_before = violence.size();
    ds.nonviolence_before = nonviolence.size();
    if (violence.empty() || nonviolence.empty())
        throw EmptyClassError("both Violence and NonViolence cases are required (got " +
                              std::to_string(violence.size()) + " / " + std::to_string(nonviolence.size()) + ")");

    // Violence cases are never dropped; only the non-violence majority is
    // subsampled, to floor(ratio * |violence|).
    const std::size_t cap = static_cast<std::size_t>(cfg.max_majority_ratio * static_cast<double>(violence.size()));
    if (nonviolence.size() > cap) {
        Rng rng(seed);
        rng.shuffle(nonviolence);
        nonviolence.resize(cap);
        std::sort(nonviolence.begin(), nonviolence.end()); // keep original record order
    }

    std::vector<std::size_t> kept;
    kept.reserve(violence.size() + nonviolence.size());
    kept.insert(kept.end(), violence.begin(), violence.end());
    kept.insert(kept.end(), nonviolence.begin(), nonviolence.end());
    std::sort(kept.begin(), kept.end());
    for (std::size_t i : kept) {
        ds.cases.push_back(cases[i]);
        if (cases[i].label == Label::Violence) ++ds.violence_after;
        else ++ds.nonviolence_after;
    }
    return ds;
}

// --- tabular IO ---

namespace {

const char* kRecordCore[] = {"record_id", "person_id", "encounter_date", "icd_codes"};

bool is_core_record_column(const std::string& name) {
    for (const char* c : kRecordCore)
        if (name == c) return true;
    return false;
}

} // namespace

std::vector<HealthRecord> read_records_csv(const std::string& path) {
    CsvTable t = read_csv(path);
    std::size_t c_id = t.col("record_id"), c_person = t.col("person_id");
    std::size_t c_date = t.col("encounter_date"), c_icd = t.col("icd_codes");
    std::vector<HealthRecord> out;
    for (const auto& row : t.rows) {
        HealthRecord r;
        r.record_id = row[c_id];
        r.person_id = row[c_person];
        r.encounter_date = Date::parse(row[c_date]);
        if (!row[c_icd].empty()) {
            for (auto& code : split(row[c_icd], ';')) {
                std::string trimmed{trim(code)};
                if (trimmed.empty()) continue;
                if (!is_valid_icd(trimmed))
                    throw ParseError("record " + r.record_id + ": invalid ICD code '" + trimmed + "'");
                r.icd_codes.push_back(trimmed);
            }
        }
        for (std::size_t i = 0; i < t.header.size(); ++i)
            if (!is_core_record_column(t.header[i]) && !row[i].empty()) r.parameterized[t.header[i]] = row[i];
        out.push_back(std::move(r));
    }
    return out;
}

void write_records_csv(std::span<const HealthRecord> records, const std::string& path) {
    CsvTable t;
    t.header = {"record_id", "person_id", "encounter_date", "icd_codes"};
    std::vector<std::string> param_fields;
    {
        std::map<std::string, bool> seen;
        for (const HealthRecord& r : records)
            for (const auto& [k, v] : r.parameterized) seen.emplace(k, true);
        for (const auto& [k, v] : seen) param_fields.push_back(k);
    }
    t.header.insert(t.header.end(), param_fields.begin(), param_fields.end());
    for (const HealthRecord& r : records) {
        std::vector<std::string> row = {r.record_id, r.person_id, r.encounter_date.to_string(),
                                        join(r.icd_codes, ";")};
        for (const std::string& f : param_fields) {
            auto it = r.parameterized.find(f);
            row.push_back(it == r.parameterized.end() ? "" : it->second);
        }
        t.rows.push_back(std::move(row));
    }
    write_csv(path, t);
}

std::vector<ViolenceNotification> read_notifications_csv(const std::string& path) {
    CsvTable t = read_csv(path);
    std::size_t c_id = t.col("notification_id"), c_person = t.col("person_id");
    std::size_t c_date = t.col("notification_date"), c_pos = t.col("is_violence_positive");
    std::size_t c_obs = t.col("observation_text");
    std::vector<ViolenceNotification> out;
    for (const auto& row : t.rows) {
        ViolenceNotification n;
        n.notification_id = row[c_id];
        n.person_id = row[c_person];
        n.notification_date = Date::parse(row[c_date]);
        n.is_violence_positive = row[c_pos] == "1" || row[c_pos] == "true";
        n.observation_text = row[c_obs];
        out.push_back(std::move(n));
    }
    return out;
}

void write_notifications_csv(std::span<const ViolenceNotification> notes, const std::string& path) {
    CsvTable t;
    t.header = {"notification_id", "person_id", "notification_date", "is_violence_positive", "observation_text"};
    for (const ViolenceNotification& n : notes)
        t.rows.push_back({n.notification_id, n.person_id, n.notification_date.to_string(),
                          n.is_violence_positive ? "1" : "0", n.observation_text});
    write_csv(path, t);
}

std::vector<DeathRecord> read_deaths_csv(const std::string& path) {
    CsvTable t = read_csv(path);
    std::size_t c_person = t.col("person_id"), c_date = t.col("death_date"), c_cause = t.col("cause_icd");
    std::vector<DeathRecord> out;
    for (const auto& row : t.rows) {
        DeathRecord d;
        d.person_id = row[c_person];
        d.death_date = Date::parse(row[c_date]);
        d.cause_icd = row[c_cause];
        if (!is_valid_icd(d.cause_icd))
            throw ParseError("death record for person " + d.person_id + ": invalid ICD code '" + d.cause_icd + "'");
        out.push_back(std::move(d));
    }
    return out;
}

void write_deaths_csv(std::span<const DeathRecord> deaths, const std::string& path) {
    CsvTable t;
    t.header = {"person_id", "death_date", "cause_icd"};
    for (const DeathRecord& d : deaths) t.rows.push_back({d.person_id, d.death_date.to_string(), d.cause_icd});
    write_csv(path, t);
}

std::vector<std::pair<std::string, Label>> read_overrides_csv(const std::string& path) {
    CsvTable t = read_csv(path);
    std::size_t c_id = t.col("record_id"), c_label = t.col("label");
    std::vector<std::pair<std::string, Label>> out;
    for (const auto& row : t.rows) out.emplace_back(row[c_id], parse_label(row[c_label]));
    return out;
}

void write_labeled_cases_csv(std::span<const LabeledCase> cases, const std::string& path) {
    CsvTable t;
    t.header = {"record_id", "label", "provenance"};
    for (const LabeledCase& c : cases)
        t.rows.push_back({c.record_id, std::string(to_string(c.label)), std::string(to_string(c.provenance))});
    write_csv(path, t);
}

std::vector<LabeledCase> read_labeled_cases_csv(const std::string& path) {
    CsvTable t = read_csv(path);
    std::size_t c_id = t.col("record_id"), c_label = t.col("label"), c_prov = t.col("provenance");
    std::vector<LabeledCase> out;
    for (const auto& row : t.rows) {
        LabeledCase c;
        c.record_id = row[c_id];
        c.label = parse_label(row[c_label]);
        std::string_view prov = row[c_prov];
        for (Provenance p : {Provenance::IcdAggression, Provenance::NotificationWindow, Provenance::SimWindow,
                             Provenance::NonViolenceIcd, Provenance::LikelyWindow, Provenance::Default,
                             Provenance::ExpertReview})
            if (to_string(p) == prov) c.provenance = p;
        out.push_back(std::move(c));
    }
    return out;
}

} // namespace gbv::cohort
