#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "htelog/cipher.hpp"
#include "htelog/codec.hpp"

namespace htelog {

struct ColumnSchema {
    enum class Layout { VectorPerColumn, VectorPerCell };

    std::string name;
    MappingSpec mapping;
    Layout mode = Layout::VectorPerColumn;
    std::string key_id;
    Scheme scheme = Scheme::HTE;

    // VectorPerCell only pairs with AlphaWord; the scalar mappings require
    // VectorPerColumn.
    void validate() const;
};

struct LogSchema {
    std::vector<ColumnSchema> columns;
    bool ascending_timestamps = false;

    const ColumnSchema& at(const std::string& name) const;
    void validate() const;

    static LogSchema load(const std::filesystem::path& path);
};

nlohmann::ordered_json to_json(const MappingSpec& spec);
MappingSpec mapping_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json to_json(const ColumnSchema& column);
ColumnSchema column_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json to_json(const LogSchema& schema);
LogSchema schema_from_json(const nlohmann::ordered_json& j);

struct EventLog {
    LogSchema schema;
    std::vector<std::vector<std::string>> rows;  // cells aligned with schema.columns

    std::size_t row_count() const { return rows.size(); }
    std::vector<std::string> column_cells(std::size_t index) const;
};

// RFC-4180: quoted fields, doubled quotes, CRLF or LF row ends.
std::vector<std::vector<std::string>> parse_csv(std::istream& in);
void write_csv(std::ostream& out, const std::vector<std::vector<std::string>>& rows);

// Reads a CSV whose header names the schema columns (any order), validates
// every cell against its column mapping, and checks the declared ordering.
EventLog load_log(const std::filesystem::path& csv_path, const LogSchema& schema);
EventLog load_log(std::istream& in, const LogSchema& schema);

void save_log_csv(std::ostream& out, const EventLog& log);

}  // namespace htelog
