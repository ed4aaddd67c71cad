#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace htelog {

// Civil date-time without timezone. Bare clock values ("10:20") sit on the
// epoch day, so differences against a bare origin like "00:00" are elapsed
// wall-clock time.
struct CalendarTime {
    int year = 1970;
    int month = 1;
    int day = 1;
    int hour = 0;
    int minute = 0;
    int second = 0;
    bool bare_time = false;

    // Accepts "HH:MM[:SS]", "YYYY-MM-DD" and "YYYY-MM-DD[T ]HH:MM[:SS]".
    static CalendarTime parse(std::string_view text);
    static CalendarTime from_seconds(std::int64_t seconds_since_epoch, bool bare);

    std::int64_t to_seconds() const;
    std::string to_string() const;
};

enum class MappingMode { Numeric, Timestamp, AlphaWord, AlphaSymbol };
enum class TimeUnit { Minutes, Seconds };

struct MappingSpec {
    MappingMode mode = MappingMode::Numeric;
    std::optional<CalendarTime> time_origin;  // Timestamp mode only
    TimeUnit time_unit = TimeUnit::Minutes;
    // Extension beyond the reference mapping: space maps to 27 and digits
    // 0-9 to 28-37. The reference mapping only defines alphabetical order,
    // so this is off by default.
    bool extended_alphabet = false;
};

struct PaddedVector {
    std::vector<double> values;   // length N = 2^l, trailing pad entries are 0
    std::size_t payload_len = 0;  // actual data count N-bar

    std::size_t pad_len() const { return values.size() - payload_len; }
};

// Decrypted values must round to integers within this tolerance; a larger
// residual signals corruption (e.g. a wrong key slipped past the id check).
constexpr double kIntegrityTolerance = 1e-6;

// Elapsed whole time units (minutes or seconds) since the origin.
double map_timestamp(const CalendarTime& ts, const MappingSpec& spec);

// Case-insensitive a=1 .. z=26, zero padded to the next power of two.
PaddedVector map_word(std::string_view word, const MappingSpec& spec = {});

// Alphabet position of a single letter (A=1, case-insensitive).
double map_activity_symbol(std::string_view cell);

// Zero-pads to `block` (a power of two >= length) or to the least power of
// two >= length. The minimum block is 2: H_2 is the smallest matrix here.
PaddedVector pad_to_block(std::vector<double> x, std::optional<std::size_t> block = {});

// Scalar mapping of one log cell under the spec (Numeric, Timestamp or
// AlphaSymbol; AlphaWord cells map to whole vectors via map_word).
double map_scalar_cell(std::string_view cell, const MappingSpec& spec);

// Inverse mapping of a decrypted vector: verifies every entry rounds to an
// integer within kIntegrityTolerance and pad entries round to zero, drops the
// padding, then renders per mode. AlphaWord yields one string (the word);
// the scalar modes yield one string per payload entry.
std::vector<std::string> unmap(std::span<const double> values, const MappingSpec& spec,
                               std::size_t payload_len);

// Nearest integer, throwing when the residual exceeds kIntegrityTolerance.
long long checked_round(double v);

}  // namespace htelog
