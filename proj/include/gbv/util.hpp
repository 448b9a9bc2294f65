#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gbv {

// Seeded RNG wrapper. All randomness in the pipeline goes through this class
// so that results are byte-reproducible: the standard distributions are
// implementation-defined, so bounded draws and shuffles are done by hand.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Unbiased draw in [0, n) via rejection sampling.
    std::size_t below(std::size_t n);

    // Uniform double in [0, 1) with 53 bits of precision.
    double u01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    // Index draw from unnormalized non-negative weights.
    std::size_t pick_weighted(std::span<const double> weights);

private:
    std::mt19937_64 gen_;
};

// Streaming FNV-1a 64-bit hash, used for config hashes and artifact digests.
class Fnv64 {
public:
    void add_bytes(const void* data, std::size_t len);
    void add(std::string_view s) { add_bytes(s.data(), s.size()); }
    void add_u64(std::uint64_t v);
    void add_double(double v);
    std::uint64_t value() const { return h_; }

private:
    std::uint64_t h_ = 14695981039346656037ull;
};

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

// --- string helpers ---

std::vector<std::string> split(std::string_view s, char delim);
std::string join(std::span<const std::string> parts, std::string_view sep);
std::string_view trim(std::string_view s);
bool starts_with(std::string_view s, std::string_view prefix);

// Fixed-precision decimal formatting (no locale surprises).
std::string format_double(double v, int decimals);

// --- UTF-8 ---
// Spans in the annotation layer are indexed over code points, not bytes.

// Decodes UTF-8 into code points; throws ParseError on malformed input.
std::vector<char32_t> utf8_decode(std::string_view s);
std::string utf8_encode(std::span<const char32_t> cps);
std::size_t utf8_length(std::string_view s);
// Byte offset of each code point, plus one entry for the end of the string.
std::vector<std::size_t> utf8_offsets(std::string_view s);
// Substring by code-point range [begin, end).
std::string utf8_substr(std::string_view s, std::size_t begin, std::size_t end);

// Case and accent handling for the Latin-1 range (covers Portuguese).
char32_t cp_to_lower(char32_t c);
bool cp_is_upper(char32_t c);
bool cp_is_letter(char32_t c);
char32_t cp_fold_accent(char32_t c);

std::string utf8_to_lower(std::string_view s);
std::string utf8_fold(std::string_view s); // lowercase + accent fold

// --- file helpers ---
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

} // namespace gbv
