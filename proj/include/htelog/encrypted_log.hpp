#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "htelog/eventlog.hpp"
#include "htelog/keys.hpp"
#include "htelog/opcount.hpp"

namespace htelog {

struct Organization {
    enum class Role { CreatorTrusted, IntermediateUntrusted, PmPointTrusted };

    std::string id;
    Role role = Role::IntermediateUntrusted;
};

const char* to_string(Organization::Role role);
Organization::Role role_from_string(std::string_view text);

struct EncryptedColumn {
    ColumnSchema schema;                  // echo; key values are never serialized
    std::vector<CipherVector> payloads;   // exactly one for vector-per-column
};

struct EncryptedLog {
    static constexpr const char* kFormatVersion = "htelog/1";

    std::size_t row_count = 0;
    std::vector<EncryptedColumn> columns;

    const EncryptedColumn& at(const std::string& name) const;
    bool contains(const std::string& name) const;

    nlohmann::ordered_json to_json() const;
    static EncryptedLog from_json(const nlohmann::ordered_json& j);
    void save(const std::filesystem::path& path) const;
    static EncryptedLog load(const std::filesystem::path& path);
};

// Column-level encryption: every column is transformed under its schema key,
// one vector per column or one vector per cell (words).
EncryptedLog encrypt_log(const EventLog& log, const KeyRing& keys, OpCounter* counter = nullptr);

// Full decryption; requires every column key in the ring.
EventLog decrypt_log(const EncryptedLog& enc, const KeyRing& keys);

// Columns whose keys the organization owns or was granted are decrypted;
// everything else passes through as ciphertext. The result is a JSON audit
// view listing per-column access.
nlohmann::ordered_json org_view(const EncryptedLog& enc, const Organization& org,
                                const KeyRing& keys);

// Appends one encrypted column. The organization must own the column's key
// and the cell count must match; existing payloads are not touched.
EncryptedLog append_column(const EncryptedLog& enc, const Organization& org,
                           const std::vector<std::string>& cells, const ColumnSchema& schema,
                           const KeyRing& keys, OpCounter* counter = nullptr);

}  // namespace htelog
