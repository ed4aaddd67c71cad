#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <random>

#include "htelog/codec.hpp"
#include "htelog/error.hpp"

using namespace htelog;

namespace {

MappingSpec minutes_spec(const char* origin) {
    MappingSpec spec;
    spec.mode = MappingMode::Timestamp;
    spec.time_origin = CalendarTime::parse(origin);
    spec.time_unit = TimeUnit::Minutes;
    return spec;
}

}  // namespace

TEST_CASE("timestamp mapping from a time origin") {
    auto spec = minutes_spec("00:00");
    CHECK(map_timestamp(CalendarTime::parse("10:20"), spec) == 620.0);
    CHECK(map_timestamp(CalendarTime::parse("00:00"), spec) == 0.0);
    CHECK(map_timestamp(CalendarTime::parse("19:24"), spec) == 1164.0);
    CHECK(map_timestamp(CalendarTime::parse("11:31"), spec) == 691.0);

    CHECK_THROWS_AS(map_timestamp(CalendarTime::parse("2020-01-01 00:00"),
                                  minutes_spec("2020-01-02 00:00")),
                    ValidationError);

    auto seconds = minutes_spec("00:00");
    seconds.time_unit = TimeUnit::Seconds;
    CHECK(map_timestamp(CalendarTime::parse("00:01:30"), seconds) == 90.0);
}

TEST_CASE("calendar time parsing and rendering") {
    auto t = CalendarTime::parse("2024-02-29T13:05:07");
    CHECK(t.year == 2024);
    CHECK(t.second == 7);
    CHECK(t.to_string() == "2024-02-29 13:05:07");

    CHECK(CalendarTime::parse("10:20").to_string() == "10:20");
    CHECK_THROWS_AS(CalendarTime::parse("2023-02-29"), ValidationError);
    CHECK_THROWS_AS(CalendarTime::parse("25:00"), ValidationError);
    CHECK_THROWS_AS(CalendarTime::parse("not a time"), ValidationError);

    // roundtrip through seconds
    CHECK(CalendarTime::from_seconds(t.to_seconds(), false).to_string() == t.to_string());
}

TEST_CASE("word mapping with zero padding") {
    auto tom = map_word("Tom");
    CHECK(tom.values == std::vector<double>{20, 15, 13, 0});
    CHECK(tom.payload_len == 3);
    CHECK(tom.pad_len() == 1);

    auto anna = map_word("Anna");
    CHECK(anna.values == std::vector<double>{1, 14, 14, 1});
    CHECK(anna.payload_len == 4);

    auto a = map_word("A");
    CHECK(a.values == std::vector<double>{1, 0});  // promoted to the minimum order 2

    CHECK_THROWS_AS(map_word("", {}), ValidationError);
    CHECK_THROWS_AS(map_word("T0m", {}), ValidationError);
    CHECK_THROWS_AS(map_word("two words", {}), ValidationError);

    MappingSpec extended;
    extended.mode = MappingMode::AlphaWord;
    extended.extended_alphabet = true;
    auto spaced = map_word("a 1", extended);
    CHECK(spaced.values == std::vector<double>{1, 27, 29, 0});
}

TEST_CASE("activity symbol mapping") {
    CHECK(map_activity_symbol("A") == 1.0);
    CHECK(map_activity_symbol("E") == 5.0);
    CHECK(map_activity_symbol("a") == 1.0);
    CHECK_THROWS_AS(map_activity_symbol("AB"), ValidationError);
    CHECK_THROWS_AS(map_activity_symbol("?"), ValidationError);
}

TEST_CASE("padding to a power-of-two block") {
    auto five = pad_to_block(std::vector<double>{1, 2, 3, 4, 5});
    CHECK(five.values.size() == 8);
    CHECK(five.pad_len() == 3);

    auto eight = pad_to_block(std::vector<double>(8, 1.0));
    CHECK(eight.values.size() == 8);
    CHECK(eight.pad_len() == 0);

    auto three = pad_to_block(std::vector<double>{1, 2, 3}, 8);
    CHECK(three.values.size() == 8);
    CHECK(three.pad_len() == 5);

    CHECK_THROWS_AS(pad_to_block({}), ValidationError);
    CHECK_THROWS_AS(pad_to_block(std::vector<double>{1, 2, 3}, 6), ValidationError);
    CHECK_THROWS_AS(pad_to_block(std::vector<double>{1, 2, 3}, 2), ValidationError);
}

TEST_CASE("inverse mapping") {
    MappingSpec word_spec;
    word_spec.mode = MappingMode::AlphaWord;
    const std::vector<double> tomish = {20.0000001, 15, 13, 0};
    CHECK(unmap(tomish, word_spec, 3) == std::vector<std::string>{"tom"});

    const std::vector<double> minutes = {620};
    CHECK(unmap(minutes, minutes_spec("00:00"), 1) == std::vector<std::string>{"10:20"});

    MappingSpec numeric;
    const std::vector<double> ids = {1, 2, 1, 2, 1, 1, 2, 2};
    auto cells = unmap(ids, numeric, 8);
    CHECK(cells.size() == 8);
    CHECK(cells[0] == "1");
    CHECK(cells[7] == "2");

    MappingSpec symbol;
    symbol.mode = MappingMode::AlphaSymbol;
    CHECK(unmap(std::vector<double>{1, 5}, symbol, 2) == std::vector<std::string>{"A", "E"});

    // integrity violations
    CHECK_THROWS_AS(unmap(std::vector<double>{20.5, 15, 13, 0}, word_spec, 3), ValidationError);
    CHECK_THROWS_AS(unmap(std::vector<double>{20, 15, 13, 1}, word_spec, 3), ValidationError);
    CHECK_THROWS_AS(unmap(std::vector<double>{27, 15, 13, 0}, word_spec, 3), ValidationError);
    CHECK_THROWS_AS(unmap(std::vector<double>{-620}, minutes_spec("00:00"), 1), ValidationError);
}

TEST_CASE("scalar cell mapping") {
    MappingSpec numeric;
    CHECK(map_scalar_cell("42", numeric) == 42.0);
    CHECK(map_scalar_cell("-7", numeric) == -7.0);
    CHECK_THROWS_AS(map_scalar_cell("4.5", numeric), ValidationError);
    CHECK_THROWS_AS(map_scalar_cell("abc", numeric), ValidationError);

    CHECK(map_scalar_cell("10:20", minutes_spec("00:00")) == 620.0);

    MappingSpec word;
    word.mode = MappingMode::AlphaWord;
    CHECK_THROWS_AS(map_scalar_cell("tom", word), ValidationError);
}

TEST_CASE("word roundtrip property") {
    std::mt19937_64 rng(19);
    std::uniform_int_distribution<int> len_dist(1, 64);
    std::uniform_int_distribution<int> letter(0, 25);
    MappingSpec spec;
    spec.mode = MappingMode::AlphaWord;
    for (int trial = 0; trial < 300; ++trial) {
        std::string word;
        const int len = len_dist(rng);
        for (int i = 0; i < len; ++i) word += static_cast<char>('a' + letter(rng));
        auto padded = map_word(word, spec);
        CHECK(std::has_single_bit(padded.values.size()));
        CHECK(padded.values.size() >= word.size());
        for (std::size_t i = padded.payload_len; i < padded.values.size(); ++i)
            CHECK(padded.values[i] == 0.0);
        CHECK(unmap(padded.values, spec, padded.payload_len).at(0) == word);
    }
}

TEST_CASE("timestamp roundtrip property") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<long long> elapsed(0, 4'000'000);
    for (int trial = 0; trial < 300; ++trial) {
        auto spec = minutes_spec("2020-01-01 00:00");
        if (trial % 2) spec.time_unit = TimeUnit::Seconds;
        const long long units = elapsed(rng);
        const long long secs = spec.time_unit == TimeUnit::Minutes ? units * 60 : units;
        auto ts = CalendarTime::from_seconds(spec.time_origin->to_seconds() + secs, false);
        CHECK(map_timestamp(ts, spec) == static_cast<double>(units));
        auto cells = unmap(std::vector<double>{static_cast<double>(units)}, spec, 1);
        CHECK(CalendarTime::parse(cells.at(0)).to_seconds() ==
              spec.time_origin->to_seconds() + secs);
    }
}
