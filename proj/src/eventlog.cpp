#include "htelog/eventlog.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "htelog/error.hpp"

namespace htelog {

namespace {

const char* mode_name(MappingMode mode) {
    switch (mode) {
        case MappingMode::Numeric: return "numeric";
        case MappingMode::Timestamp: return "timestamp";
        case MappingMode::AlphaWord: return "alpha-word";
        case MappingMode::AlphaSymbol: return "alpha-symbol";
    }
    return "?";
}

MappingMode mode_from_name(const std::string& name) {
    if (name == "numeric") return MappingMode::Numeric;
    if (name == "timestamp") return MappingMode::Timestamp;
    if (name == "alpha-word") return MappingMode::AlphaWord;
    if (name == "alpha-symbol") return MappingMode::AlphaSymbol;
    throw ValidationError("unknown mapping mode: \"" + name + "\"");
}

}  // namespace

void ColumnSchema::validate() const {
    if (name.empty()) throw ValidationError("column name must not be empty");
    if (key_id.empty()) throw ValidationError("column \"" + name + "\" names no key");
    if (mode == Layout::VectorPerCell && mapping.mode != MappingMode::AlphaWord)
        throw ValidationError("column \"" + name + "\": vector-per-cell requires alpha-word");
    if (mode == Layout::VectorPerColumn && mapping.mode == MappingMode::AlphaWord)
        throw ValidationError("column \"" + name + "\": alpha-word cells are vectors, use vector-per-cell");
    if (mapping.mode == MappingMode::Timestamp && !mapping.time_origin)
        throw ValidationError("column \"" + name + "\": timestamp mapping needs a time origin");
}

void LogSchema::validate() const {
    if (columns.empty()) throw ValidationError("schema has no columns");
    for (const auto& column : columns) column.validate();
    for (std::size_t i = 0; i < columns.size(); ++i)
        for (std::size_t j = i + 1; j < columns.size(); ++j)
            if (columns[i].name == columns[j].name)
                throw ValidationError("duplicate column name: " + columns[i].name);
}

const ColumnSchema& LogSchema::at(const std::string& name) const {
    for (const auto& column : columns)
        if (column.name == name) return column;
    throw ValidationError("unknown column: " + name);
}

nlohmann::ordered_json to_json(const MappingSpec& spec) {
    nlohmann::ordered_json j;
    j["mode"] = mode_name(spec.mode);
    if (spec.time_origin) {
        j["time_origin"] = spec.time_origin->to_string();
        j["time_unit"] = spec.time_unit == TimeUnit::Minutes ? "minutes" : "seconds";
    }
    if (spec.extended_alphabet) j["extended_alphabet"] = true;
    return j;
}

MappingSpec mapping_from_json(const nlohmann::ordered_json& j) {
    MappingSpec spec;
    spec.mode = mode_from_name(j.at("mode").get<std::string>());
    if (j.contains("time_origin"))
        spec.time_origin = CalendarTime::parse(j["time_origin"].get<std::string>());
    if (j.contains("time_unit")) {
        const auto unit = j["time_unit"].get<std::string>();
        if (unit == "minutes")
            spec.time_unit = TimeUnit::Minutes;
        else if (unit == "seconds")
            spec.time_unit = TimeUnit::Seconds;
        else
            throw ValidationError("unknown time unit: \"" + unit + "\"");
    }
    if (j.contains("extended_alphabet")) spec.extended_alphabet = j["extended_alphabet"].get<bool>();
    return spec;
}

nlohmann::ordered_json to_json(const ColumnSchema& column) {
    nlohmann::ordered_json j;
    j["name"] = column.name;
    j["mapping"] = to_json(column.mapping);
    j["mode"] = column.mode == ColumnSchema::Layout::VectorPerColumn ? "vector-per-column"
                                                                     : "vector-per-cell";
    j["key_id"] = column.key_id;
    j["scheme"] = to_string(column.scheme);
    return j;
}

ColumnSchema column_from_json(const nlohmann::ordered_json& j) {
    ColumnSchema column;
    column.name = j.at("name").get<std::string>();
    column.mapping = mapping_from_json(j.at("mapping"));
    const auto mode = j.at("mode").get<std::string>();
    if (mode == "vector-per-column")
        column.mode = ColumnSchema::Layout::VectorPerColumn;
    else if (mode == "vector-per-cell")
        column.mode = ColumnSchema::Layout::VectorPerCell;
    else
        throw ValidationError("unknown column mode: \"" + mode + "\"");
    column.key_id = j.at("key_id").get<std::string>();
    column.scheme = scheme_from_string(j.at("scheme").get<std::string>());
    column.validate();
    return column;
}

nlohmann::ordered_json to_json(const LogSchema& schema) {
    nlohmann::ordered_json j;
    j["columns"] = nlohmann::ordered_json::array();
    for (const auto& column : schema.columns) j["columns"].push_back(to_json(column));
    if (schema.ascending_timestamps) j["ascending_timestamps"] = true;
    return j;
}

LogSchema schema_from_json(const nlohmann::ordered_json& j) {
    LogSchema schema;
    if (!j.contains("columns") || !j["columns"].is_array())
        throw ValidationError("schema must hold a \"columns\" array");
    for (const auto& entry : j["columns"]) schema.columns.push_back(column_from_json(entry));
    if (j.contains("ascending_timestamps"))
        schema.ascending_timestamps = j["ascending_timestamps"].get<bool>();
    schema.validate();
    return schema;
}

LogSchema LogSchema::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open schema file: " + path.string());
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("cannot parse schema file: ") + e.what());
    }
    return schema_from_json(doc);
}

std::vector<std::string> EventLog::column_cells(std::size_t index) const {
    std::vector<std::string> cells;
    cells.reserve(rows.size());
    for (const auto& row : rows) cells.push_back(row.at(index));
    return cells;
}

std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!field.empty())
                    throw IoError("stray quote inside unquoted CSV field");
                in_quotes = true;
                field_started = true;
                break;
            case ',': end_field(); break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
                end_row();
                break;
            case '\n': end_row(); break;
            default: field += c; field_started = true; break;
        }
    }
    if (in_quotes) throw IoError("unterminated quote in CSV");
    if (field_started || !row.empty()) end_row();
    return rows;
}

void write_csv(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            const std::string& cell = row[i];
            if (cell.find_first_of(",\"\r\n") != std::string::npos) {
                out << '"';
                for (char c : cell) {
                    if (c == '"') out << '"';
                    out << c;
                }
                out << '"';
            } else {
                out << cell;
            }
        }
        out << '\n';
    }
}

EventLog load_log(std::istream& in, const LogSchema& schema) {
    schema.validate();
    auto rows = parse_csv(in);
    if (rows.empty()) throw ValidationError("event log is empty");

    const auto& header = rows.front();
    std::vector<std::size_t> position(schema.columns.size());
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
        const auto& name = schema.columns[c].name;
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw ValidationError("CSV is missing column \"" + name + "\"");
        position[c] = static_cast<std::size_t>(it - header.begin());
    }

    EventLog log;
    log.schema = schema;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() == 1 && rows[r][0].empty()) continue;  // trailing blank line
        if (rows[r].size() != header.size())
            throw ValidationError("row " + std::to_string(r) + " has " +
                                  std::to_string(rows[r].size()) + " cells, expected " +
                                  std::to_string(header.size()));
        std::vector<std::string> row;
        row.reserve(schema.columns.size());
        for (std::size_t c = 0; c < schema.columns.size(); ++c)
            row.push_back(rows[r][position[c]]);
        log.rows.push_back(std::move(row));
    }
    if (log.rows.empty()) throw ValidationError("event log holds no events");

    // every cell must map under its column spec
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
        const auto& column = schema.columns[c];
        double previous = 0.0;
        for (std::size_t r = 0; r < log.rows.size(); ++r) {
            const std::string& cell = log.rows[r][c];
            double mapped = 0.0;
            if (column.mode == ColumnSchema::Layout::VectorPerCell) {
                map_word(cell, column.mapping);
            } else {
                mapped = map_scalar_cell(cell, column.mapping);
            }
            if (schema.ascending_timestamps && column.mapping.mode == MappingMode::Timestamp) {
                if (r > 0 && mapped < previous)
                    throw ValidationError("timestamps are not ascending at row " +
                                          std::to_string(r));
                previous = mapped;
            }
        }
    }
    return log;
}

EventLog load_log(const std::filesystem::path& csv_path, const LogSchema& schema) {
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw IoError("cannot open log file: " + csv_path.string());
    return load_log(in, schema);
}

void save_log_csv(std::ostream& out, const EventLog& log) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(log.rows.size() + 1);
    std::vector<std::string> header;
    for (const auto& column : log.schema.columns) header.push_back(column.name);
    rows.push_back(std::move(header));
    for (const auto& row : log.rows) rows.push_back(row);
    write_csv(out, rows);
}

}  // namespace htelog
