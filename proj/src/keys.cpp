#include "htelog/keys.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "htelog/error.hpp"

namespace htelog {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view s, std::string_view full) {
    s = trim(s);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ValidationError("bad key expression: \"" + std::string(full) + "\"");
    return v;
}

double parse_sqrt_term(std::string_view s, std::string_view full) {
    s = trim(s);
    if (!s.starts_with("sqrt(") || !s.ends_with(")"))
        throw ValidationError("bad key expression: \"" + std::string(full) + "\"");
    const double arg = parse_number(s.substr(5, s.size() - 6), full);
    if (arg < 0)
        throw ValidationError("sqrt of a negative number in key expression: \"" +
                              std::string(full) + "\"");
    return std::sqrt(arg);
}

}  // namespace

double parse_key_expression(std::string_view text) {
    std::string_view s = trim(text);
    if (s.empty()) throw ValidationError("empty key expression");
    double value;
    if (auto star = s.find('*'); star != std::string_view::npos)
        value = parse_number(s.substr(0, star), text) * parse_sqrt_term(s.substr(star + 1), text);
    else if (s.find("sqrt") != std::string_view::npos)
        value = parse_sqrt_term(s, text);
    else
        value = parse_number(s, text);
    if (!std::isfinite(value) || value == 0.0)
        throw ValidationError("key value must be finite and nonzero: \"" + std::string(text) +
                              "\"");
    return value;
}

void KeyRing::insert(KeyRecord record) {
    if (record.key_id.empty()) throw ValidationError("key id must not be empty");
    if (keys_.count(record.key_id))
        throw ValidationError("duplicate key id: " + record.key_id);
    keys_.emplace(record.key_id, std::move(record));
}

const KeyRecord& KeyRing::at(const std::string& id) const {
    auto it = keys_.find(id);
    if (it == keys_.end()) throw ValidationError("unknown key id: " + id);
    return it->second;
}

std::vector<std::string> KeyRing::ids() const {
    std::vector<std::string> out;
    out.reserve(keys_.size());
    for (const auto& [id, _] : keys_) out.push_back(id);
    return out;
}

KeyRing KeyRing::subset_for(const std::string& org) const {
    KeyRing out;
    for (const auto& [_, record] : keys_)
        if (record.usable_by(org)) out.insert(record);
    return out;
}

KeyRing KeyRing::parse(const std::string& json_text) {
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("cannot parse key file: ") + e.what());
    }
    if (!doc.contains("keys") || !doc["keys"].is_array())
        throw ValidationError("key file must hold a \"keys\" array");
    KeyRing ring;
    for (const auto& entry : doc["keys"]) {
        KeyRecord record;
        record.key_id = entry.at("id").get<std::string>();
        record.owner = entry.at("owner").get<std::string>();
        record.expression = entry.at("value").get<std::string>();
        record.value = parse_key_expression(record.expression);
        if (entry.contains("granted_to"))
            for (const auto& org : entry["granted_to"])
                record.granted_to.insert(org.get<std::string>());
        ring.insert(std::move(record));
    }
    return ring;
}

KeyRing KeyRing::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open key file: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse(text);
}

std::string KeyRing::dump() const {
    nlohmann::ordered_json doc;
    doc["keys"] = nlohmann::ordered_json::array();
    for (const auto& [_, record] : keys_) {
        nlohmann::ordered_json entry;
        entry["id"] = record.key_id;
        entry["owner"] = record.owner;
        entry["value"] = record.expression;
        entry["granted_to"] = record.granted_to;
        doc["keys"].push_back(std::move(entry));
    }
    return doc.dump(2) + "\n";
}

void KeyRing::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write key file: " + path.string());
    out << dump();
}

}  // namespace htelog
