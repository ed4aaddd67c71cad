#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace htelog {

// Evaluates an exact key expression: "c", "sqrt(d)" or "c*sqrt(d)".
// The result must be finite and nonzero.
double parse_key_expression(std::string_view text);

struct KeyRecord {
    std::string key_id;
    std::string owner;
    double value = 0.0;
    std::string expression;  // as written in the key file
    std::set<std::string> granted_to;

    bool usable_by(const std::string& org) const {
        return org == owner || granted_to.count(org) > 0;
    }
};

class KeyRing {
public:
    void insert(KeyRecord record);

    bool contains(const std::string& id) const { return keys_.count(id) > 0; }
    const KeyRecord& at(const std::string& id) const;
    std::size_t size() const { return keys_.size(); }
    std::vector<std::string> ids() const;

    // Keys this organization owns or was granted.
    KeyRing subset_for(const std::string& org) const;

    static KeyRing load(const std::filesystem::path& path);
    static KeyRing parse(const std::string& json_text);
    void save(const std::filesystem::path& path) const;
    std::string dump() const;

private:
    std::map<std::string, KeyRecord> keys_;
};

}  // namespace htelog
