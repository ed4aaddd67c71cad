#include "htelog/codec.hpp"

#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "htelog/error.hpp"

namespace htelog {

namespace {

// Howard Hinnant's civil-date algorithms.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
    y = static_cast<int>(yy + (m <= 2));
}

int days_in_month(int y, int m) {
    static const int table[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && (y % 4 == 0 && (y % 100 != 0 || y % 400 == 0))) return 29;
    return table[m - 1];
}

bool parse_int(std::string_view text, int& out) {
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

// fields separated at fixed positions: "HH:MM", "HH:MM:SS"
bool parse_clock(std::string_view text, int& h, int& mi, int& s) {
    s = 0;
    if (text.size() == 5 && text[2] == ':')
        return parse_int(text.substr(0, 2), h) && parse_int(text.substr(3, 2), mi);
    if (text.size() == 8 && text[2] == ':' && text[5] == ':')
        return parse_int(text.substr(0, 2), h) && parse_int(text.substr(3, 2), mi) &&
               parse_int(text.substr(6, 2), s);
    return false;
}

bool parse_date(std::string_view text, int& y, int& m, int& d) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return false;
    return parse_int(text.substr(0, 4), y) && parse_int(text.substr(5, 2), m) &&
           parse_int(text.substr(8, 2), d);
}

int letter_value(char c, bool extended) {
    if (c >= 'a' && c <= 'z') return c - 'a' + 1;
    if (c >= 'A' && c <= 'Z') return c - 'A' + 1;
    if (extended) {
        if (c == ' ') return 27;
        if (c >= '0' && c <= '9') return c - '0' + 28;
    }
    return 0;
}

char value_letter(long long v, bool extended, bool upper) {
    if (v >= 1 && v <= 26) return static_cast<char>((upper ? 'A' : 'a') + v - 1);
    if (extended) {
        if (v == 27) return ' ';
        if (v >= 28 && v <= 37) return static_cast<char>('0' + v - 28);
    }
    throw ValidationError("value " + std::to_string(v) + " is outside the alphabet range");
}

}  // namespace

CalendarTime CalendarTime::parse(std::string_view text) {
    CalendarTime t;
    if (text.empty()) throw ValidationError("empty timestamp");
    if (text.find(':') != std::string_view::npos && text.find('-') == std::string_view::npos) {
        if (!parse_clock(text, t.hour, t.minute, t.second))
            throw ValidationError("unparseable clock time: " + std::string(text));
        t.bare_time = true;
    } else {
        std::string_view date = text.substr(0, 10);
        if (!parse_date(date, t.year, t.month, t.day))
            throw ValidationError("unparseable date: " + std::string(text));
        if (text.size() > 10) {
            if (text[10] != 'T' && text[10] != ' ')
                throw ValidationError("unparseable timestamp: " + std::string(text));
            if (!parse_clock(text.substr(11), t.hour, t.minute, t.second))
                throw ValidationError("unparseable timestamp: " + std::string(text));
        }
    }
    if (t.month < 1 || t.month > 12 || t.day < 1 || t.day > days_in_month(t.year, t.month) ||
        t.hour < 0 || t.hour > 23 || t.minute < 0 || t.minute > 59 || t.second < 0 ||
        t.second > 59)
        throw ValidationError("timestamp field out of range: " + std::string(text));
    return t;
}

CalendarTime CalendarTime::from_seconds(std::int64_t seconds, bool bare) {
    CalendarTime t;
    std::int64_t days = seconds >= 0 ? seconds / 86400 : (seconds - 86399) / 86400;
    std::int64_t rem = seconds - days * 86400;
    civil_from_days(days, t.year, t.month, t.day);
    t.hour = static_cast<int>(rem / 3600);
    t.minute = static_cast<int>(rem % 3600 / 60);
    t.second = static_cast<int>(rem % 60);
    t.bare_time = bare && days == 0;
    return t;
}

std::int64_t CalendarTime::to_seconds() const {
    return days_from_civil(year, month, day) * 86400 + hour * 3600 + minute * 60 + second;
}

std::string CalendarTime::to_string() const {
    char buf[32];
    if (bare_time && year == 1970 && month == 1 && day == 1) {
        if (second != 0)
            std::snprintf(buf, sizeof buf, "%02d:%02d:%02d", hour, minute, second);
        else
            std::snprintf(buf, sizeof buf, "%02d:%02d", hour, minute);
    } else {
        std::snprintf(buf, sizeof buf, "%04d-%02d-%02d %02d:%02d:%02d", year, month, day, hour,
                      minute, second);
    }
    return buf;
}

double map_timestamp(const CalendarTime& ts, const MappingSpec& spec) {
    if (spec.mode != MappingMode::Timestamp || !spec.time_origin)
        throw ValidationError("timestamp mapping requires a time origin");
    const std::int64_t diff = ts.to_seconds() - spec.time_origin->to_seconds();
    if (diff < 0)
        throw ValidationError("timestamp " + ts.to_string() + " precedes the origin " +
                              spec.time_origin->to_string());
    return static_cast<double>(spec.time_unit == TimeUnit::Minutes ? diff / 60 : diff);
}

PaddedVector map_word(std::string_view word, const MappingSpec& spec) {
    if (word.empty()) throw ValidationError("empty word");
    std::vector<double> values;
    values.reserve(word.size());
    for (char c : word) {
        int v = letter_value(c, spec.extended_alphabet);
        if (v == 0)
            throw ValidationError("character '" + std::string(1, c) +
                                  "' is outside the alphabet (strict mode)");
        values.push_back(v);
    }
    return pad_to_block(std::move(values));
}

double map_activity_symbol(std::string_view cell) {
    if (cell.size() != 1 || letter_value(cell[0], false) == 0)
        throw ValidationError("activity symbol must be a single letter, got \"" +
                              std::string(cell) + "\"");
    return letter_value(cell[0], false);
}

PaddedVector pad_to_block(std::vector<double> x, std::optional<std::size_t> block) {
    if (x.empty()) throw ValidationError("cannot pad an empty vector");
    std::size_t n = std::max<std::size_t>(2, std::bit_ceil(x.size()));
    if (block) {
        if (!std::has_single_bit(*block) || *block < x.size() || *block < 2)
            throw ValidationError("block must be a power of two >= the data length");
        n = *block;
    }
    PaddedVector out;
    out.payload_len = x.size();
    out.values = std::move(x);
    out.values.resize(n, 0.0);
    return out;
}

double map_scalar_cell(std::string_view cell, const MappingSpec& spec) {
    switch (spec.mode) {
        case MappingMode::Numeric: {
            long long v = 0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc() || ptr != cell.data() + cell.size())
                throw ValidationError("numeric cell is not an integer: \"" + std::string(cell) +
                                      "\"");
            return static_cast<double>(v);
        }
        case MappingMode::Timestamp:
            return map_timestamp(CalendarTime::parse(cell), spec);
        case MappingMode::AlphaSymbol:
            return map_activity_symbol(cell);
        case MappingMode::AlphaWord:
            throw ValidationError("word cells map to vectors, not scalars");
    }
    throw ValidationError("unknown mapping mode");
}

long long checked_round(double v) {
    const double r = std::nearbyint(v);
    if (std::abs(v - r) > kIntegrityTolerance)
        throw ValidationError("decrypted value " + std::to_string(v) +
                              " does not round to an integer (corruption?)");
    return static_cast<long long>(r);
}

std::vector<std::string> unmap(std::span<const double> values, const MappingSpec& spec,
                               std::size_t payload_len) {
    if (payload_len > values.size())
        throw ValidationError("payload length exceeds the vector length");
    std::vector<long long> ints(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) ints[i] = checked_round(values[i]);
    for (std::size_t i = payload_len; i < values.size(); ++i)
        if (ints[i] != 0)
            throw ValidationError("pad entry " + std::to_string(i) + " is nonzero after decrypt");

    std::vector<std::string> out;
    switch (spec.mode) {
        case MappingMode::AlphaWord: {
            std::string word;
            for (std::size_t i = 0; i < payload_len; ++i)
                word += value_letter(ints[i], spec.extended_alphabet, false);
            out.push_back(std::move(word));
            break;
        }
        case MappingMode::AlphaSymbol:
            for (std::size_t i = 0; i < payload_len; ++i)
                out.emplace_back(1, value_letter(ints[i], false, true));
            break;
        case MappingMode::Numeric:
            for (std::size_t i = 0; i < payload_len; ++i) out.push_back(std::to_string(ints[i]));
            break;
        case MappingMode::Timestamp: {
            if (!spec.time_origin) throw ValidationError("timestamp unmapping requires an origin");
            const std::int64_t unit = spec.time_unit == TimeUnit::Minutes ? 60 : 1;
            for (std::size_t i = 0; i < payload_len; ++i) {
                if (ints[i] < 0) throw ValidationError("negative elapsed time after decrypt");
                auto t = CalendarTime::from_seconds(spec.time_origin->to_seconds() + ints[i] * unit,
                                                    spec.time_origin->bare_time);
                out.push_back(t.to_string());
            }
            break;
        }
    }
    return out;
}

}  // namespace htelog
