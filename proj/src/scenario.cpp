#include "htelog/scenario.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>

#include "htelog/error.hpp"

namespace htelog {

namespace {

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

nlohmann::ordered_json load_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path.string());
    try {
        return nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw IoError("cannot parse " + path.string() + ": " + e.what());
    }
}

struct ScenarioState {
    std::map<std::string, Organization> orgs;
    KeyRing keys;
    std::optional<EncryptedLog> log;
    std::string holder;  // organization currently holding the encrypted log

    const Organization& org(const std::string& id) const {
        auto it = orgs.find(id);
        if (it == orgs.end()) throw ValidationError("unknown organization: " + id);
        return it->second;
    }
};

// what an untrusted interface can see: column names and a ciphertext digest
nlohmann::ordered_json relay_observation(const EncryptedLog& log) {
    nlohmann::ordered_json obs;
    auto names = nlohmann::ordered_json::array();
    for (const auto& column : log.columns) names.push_back(column.schema.name);
    obs["columns"] = std::move(names);
    obs["rows"] = log.row_count;
    obs["ciphertext_digest"] = hex64(fnv1a64(log.to_json().dump()));
    return obs;
}

}  // namespace

nlohmann::ordered_json run_scenario(const std::filesystem::path& scenario_file) {
    const auto doc = load_json(scenario_file);
    const auto base = scenario_file.parent_path();

    ScenarioState state;
    std::size_t creators = 0, pm_points = 0;
    for (const auto& oj : doc.at("organizations")) {
        Organization org;
        org.id = oj.at("id").get<std::string>();
        org.role = role_from_string(oj.at("role").get<std::string>());
        if (org.role == Organization::Role::CreatorTrusted) ++creators;
        if (org.role == Organization::Role::PmPointTrusted) ++pm_points;
        if (!state.orgs.emplace(org.id, org).second)
            throw ValidationError("duplicate organization id: " + org.id);
    }
    if (creators != 1 || pm_points != 1)
        throw ValidationError("scenario needs exactly one creator and one PM point");

    state.keys = KeyRing::load(base / doc.at("keys").get<std::string>());
    const LogSchema schema = LogSchema::load(base / doc.at("schema").get<std::string>());
    const EventLog plain = load_log(base / doc.at("log").get<std::string>(), schema);

    nlohmann::ordered_json transcript;
    transcript["version"] = EncryptedLog::kFormatVersion;
    transcript["scenario"] = doc.value("name", scenario_file.stem().string());
    transcript["events"] = nlohmann::ordered_json::array();

    std::size_t step_no = 0;
    for (const auto& step : doc.at("steps")) {
        ++step_no;
        const std::string op = step.at("op").get<std::string>();
        nlohmann::ordered_json event;
        event["step"] = step_no;
        event["op"] = op;

        if (op == "create") {
            const auto& org = state.org(step.at("org").get<std::string>());
            if (org.role != Organization::Role::CreatorTrusted)
                throw ValidationError("step " + std::to_string(step_no) +
                                      ": only the creator may create the log");
            for (const auto& column : schema.columns)
                if (state.keys.at(column.key_id).owner != org.id)
                    throw ValidationError("step " + std::to_string(step_no) + ": creator \"" +
                                          org.id + "\" does not own key \"" + column.key_id +
                                          "\"");
            state.log = encrypt_log(plain, state.keys);
            state.holder = org.id;
            event["org"] = org.id;
            event["encrypted_log"] = state.log->to_json();
        } else if (op == "relay") {
            if (!state.log) throw ValidationError("relay before create");
            const std::string from = step.at("from").get<std::string>();
            const std::string to = step.at("to").get<std::string>();
            state.org(to);
            if (from != state.holder)
                throw ValidationError("step " + std::to_string(step_no) + ": \"" + from +
                                      "\" does not hold the log");
            event["interface"] = step.value("interface", "I?");
            event["from"] = from;
            event["to"] = to;
            event["observed"] = relay_observation(*state.log);
            state.holder = to;
        } else if (op == "append_column") {
            if (!state.log) throw ValidationError("append before create");
            const auto& org = state.org(step.at("org").get<std::string>());
            if (org.id != state.holder)
                throw ValidationError("step " + std::to_string(step_no) + ": \"" + org.id +
                                      "\" does not hold the log");
            const auto& cj = step.at("column");
            const ColumnSchema column = column_from_json(cj.at("schema"));
            std::vector<std::string> cells;
            for (const auto& v : cj.at("values")) cells.push_back(v.get<std::string>());
            state.log = append_column(*state.log, org, cells, column, state.keys);
            event["org"] = org.id;
            event["column"] = column.name;
            event["encrypted_log"] = state.log->to_json();
        } else if (op == "view") {
            if (!state.log) throw ValidationError("view before create");
            const auto& org = state.org(step.at("org").get<std::string>());
            if (org.id != state.holder)
                throw ValidationError("step " + std::to_string(step_no) + ": \"" + org.id +
                                      "\" does not hold the log");
            event["org"] = org.id;
            event["view"] = org_view(*state.log, org, state.keys);
        } else if (op == "pm_decrypt") {
            if (!state.log) throw ValidationError("decrypt before create");
            const auto& org = state.org(step.at("org").get<std::string>());
            if (org.role != Organization::Role::PmPointTrusted)
                throw ValidationError("step " + std::to_string(step_no) +
                                      ": only the PM point decrypts the full log");
            if (org.id != state.holder)
                throw ValidationError("step " + std::to_string(step_no) + ": \"" + org.id +
                                      "\" does not hold the log");
            for (const auto& column : state.log->columns)
                if (!state.keys.at(column.schema.key_id).usable_by(org.id))
                    throw ValidationError("step " + std::to_string(step_no) +
                                          ": PM point lacks key \"" + column.schema.key_id +
                                          "\"");
            const EventLog decrypted = decrypt_log(*state.log, state.keys.subset_for(org.id));
            event["org"] = org.id;
            nlohmann::ordered_json lj;
            auto header = nlohmann::ordered_json::array();
            for (const auto& column : decrypted.schema.columns) header.push_back(column.name);
            lj["columns"] = std::move(header);
            lj["rows"] = decrypted.rows;
            event["log"] = std::move(lj);
        } else {
            throw ValidationError("unknown scenario op: \"" + op + "\"");
        }
        transcript["events"].push_back(std::move(event));
    }
    return transcript;
}

}  // namespace htelog
