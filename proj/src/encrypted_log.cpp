#include "htelog/encrypted_log.hpp"

#include <cstdio>
#include <fstream>

#include "htelog/error.hpp"

namespace htelog {

namespace {

// Ciphertext values are written as decimal floats at 12 significant digits;
// re-reading and re-writing a file reproduces it byte for byte.
double quantize12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

nlohmann::ordered_json payload_to_json(const CipherVector& cv) {
    nlohmann::ordered_json j;
    j["l"] = cv.l;
    j["pad_len"] = cv.pad_len;
    auto values = nlohmann::ordered_json::array();
    for (double v : cv.values) values.push_back(quantize12(v));
    j["values"] = std::move(values);
    return j;
}

CipherVector payload_from_json(const nlohmann::ordered_json& j, const ColumnSchema& schema) {
    CipherVector cv;
    cv.l = j.at("l").get<int>();
    cv.pad_len = j.at("pad_len").get<std::size_t>();
    cv.scheme = schema.scheme;
    cv.key_id = schema.key_id;
    for (const auto& v : j.at("values")) cv.values.push_back(v.get<double>());
    if (cv.values.size() != (std::size_t{1} << cv.l))
        throw ValidationError("payload length is not 2^l");
    if (cv.pad_len > cv.values.size())
        throw ValidationError("payload pad length exceeds its vector");
    return cv;
}

EncryptedColumn encrypt_column(const ColumnSchema& schema,
                               const std::vector<std::string>& cells, const KeyRing& keys,
                               OpCounter* counter) {
    schema.validate();
    const KeyRecord& key = keys.at(schema.key_id);
    EncryptedColumn out;
    out.schema = schema;
    if (schema.mode == ColumnSchema::Layout::VectorPerCell) {
        for (const auto& cell : cells)
            out.payloads.push_back(encrypt(map_word(cell, schema.mapping), key, schema.scheme,
                                           counter));
    } else {
        std::vector<double> column;
        column.reserve(cells.size());
        for (const auto& cell : cells) column.push_back(map_scalar_cell(cell, schema.mapping));
        out.payloads.push_back(encrypt(pad_to_block(std::move(column)), key, schema.scheme,
                                       counter));
    }
    return out;
}

std::vector<std::string> decrypt_column(const EncryptedColumn& column, const KeyRecord& key,
                                        std::size_t row_count) {
    std::vector<std::string> cells;
    if (column.schema.mode == ColumnSchema::Layout::VectorPerCell) {
        if (column.payloads.size() != row_count)
            throw ValidationError("column \"" + column.schema.name +
                                  "\" payload count differs from the row count");
        for (const auto& payload : column.payloads) {
            const PaddedVector plain = decrypt(payload, key);
            auto words = unmap(plain.values, column.schema.mapping, plain.payload_len);
            cells.push_back(words.at(0));
        }
    } else {
        if (column.payloads.size() != 1)
            throw ValidationError("column \"" + column.schema.name +
                                  "\" must hold exactly one payload");
        const PaddedVector plain = decrypt(column.payloads.front(), key);
        if (plain.payload_len != row_count)
            throw ValidationError("column \"" + column.schema.name +
                                  "\" payload length differs from the row count");
        cells = unmap(plain.values, column.schema.mapping, plain.payload_len);
    }
    return cells;
}

}  // namespace

const char* to_string(Organization::Role role) {
    switch (role) {
        case Organization::Role::CreatorTrusted: return "creator-trusted";
        case Organization::Role::IntermediateUntrusted: return "intermediate-untrusted";
        case Organization::Role::PmPointTrusted: return "pm-point-trusted";
    }
    return "?";
}

Organization::Role role_from_string(std::string_view text) {
    if (text == "creator-trusted") return Organization::Role::CreatorTrusted;
    if (text == "intermediate-untrusted") return Organization::Role::IntermediateUntrusted;
    if (text == "pm-point-trusted") return Organization::Role::PmPointTrusted;
    throw ValidationError("unknown organization role: \"" + std::string(text) + "\"");
}

const EncryptedColumn& EncryptedLog::at(const std::string& name) const {
    for (const auto& column : columns)
        if (column.schema.name == name) return column;
    throw ValidationError("encrypted log has no column \"" + name + "\"");
}

bool EncryptedLog::contains(const std::string& name) const {
    for (const auto& column : columns)
        if (column.schema.name == name) return true;
    return false;
}

nlohmann::ordered_json EncryptedLog::to_json() const {
    nlohmann::ordered_json doc;
    doc["version"] = kFormatVersion;
    doc["rows"] = row_count;
    doc["columns"] = nlohmann::ordered_json::array();
    for (const auto& column : columns) {
        nlohmann::ordered_json cj = htelog::to_json(column.schema);
        if (column.schema.mode == ColumnSchema::Layout::VectorPerCell) {
            auto payloads = nlohmann::ordered_json::array();
            for (const auto& payload : column.payloads) payloads.push_back(payload_to_json(payload));
            cj["payloads"] = std::move(payloads);
        } else {
            cj["payload"] = payload_to_json(column.payloads.front());
        }
        doc["columns"].push_back(std::move(cj));
    }
    return doc;
}

EncryptedLog EncryptedLog::from_json(const nlohmann::ordered_json& j) {
    if (!j.contains("version") || j["version"].get<std::string>() != kFormatVersion)
        throw ValidationError("unsupported encrypted log version");
    EncryptedLog out;
    out.row_count = j.at("rows").get<std::size_t>();
    for (const auto& cj : j.at("columns")) {
        EncryptedColumn column;
        column.schema = column_from_json(cj);
        if (cj.contains("payloads")) {
            for (const auto& pj : cj["payloads"])
                column.payloads.push_back(payload_from_json(pj, column.schema));
        } else {
            column.payloads.push_back(payload_from_json(cj.at("payload"), column.schema));
        }
        out.columns.push_back(std::move(column));
    }
    return out;
}

void EncryptedLog::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write encrypted log: " + path.string());
    out << to_json().dump(2) << '\n';
}

EncryptedLog EncryptedLog::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open encrypted log: " + path.string());
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("cannot parse encrypted log: ") + e.what());
    }
    return from_json(doc);
}

EncryptedLog encrypt_log(const EventLog& log, const KeyRing& keys, OpCounter* counter) {
    EncryptedLog out;
    out.row_count = log.row_count();
    for (std::size_t c = 0; c < log.schema.columns.size(); ++c)
        out.columns.push_back(
            encrypt_column(log.schema.columns[c], log.column_cells(c), keys, counter));
    return out;
}

EventLog decrypt_log(const EncryptedLog& enc, const KeyRing& keys) {
    EventLog log;
    log.rows.assign(enc.row_count, {});
    for (const auto& column : enc.columns) {
        log.schema.columns.push_back(column.schema);
        auto cells = decrypt_column(column, keys.at(column.schema.key_id), enc.row_count);
        for (std::size_t r = 0; r < enc.row_count; ++r)
            log.rows[r].push_back(std::move(cells[r]));
    }
    return log;
}

nlohmann::ordered_json org_view(const EncryptedLog& enc, const Organization& org,
                                const KeyRing& keys) {
    nlohmann::ordered_json view;
    view["org"] = org.id;
    view["role"] = to_string(org.role);
    view["columns"] = nlohmann::ordered_json::array();
    for (const auto& column : enc.columns) {
        nlohmann::ordered_json cj;
        cj["name"] = column.schema.name;
        const bool held = keys.contains(column.schema.key_id) &&
                          keys.at(column.schema.key_id).usable_by(org.id);
        if (held) {
            cj["access"] = "plaintext";
            cj["cells"] = decrypt_column(column, keys.at(column.schema.key_id), enc.row_count);
        } else {
            cj["access"] = "ciphertext-only";
            auto payloads = nlohmann::ordered_json::array();
            for (const auto& payload : column.payloads) payloads.push_back(payload_to_json(payload));
            cj["ciphertext"] = std::move(payloads);
        }
        view["columns"].push_back(std::move(cj));
    }
    return view;
}

EncryptedLog append_column(const EncryptedLog& enc, const Organization& org,
                           const std::vector<std::string>& cells, const ColumnSchema& schema,
                           const KeyRing& keys, OpCounter* counter) {
    if (cells.size() != enc.row_count)
        throw ValidationError("column \"" + schema.name + "\" has " +
                              std::to_string(cells.size()) + " cells but the log has " +
                              std::to_string(enc.row_count) + " rows");
    const KeyRecord& key = keys.at(schema.key_id);
    if (key.owner != org.id)
        throw ValidationError("organization \"" + org.id + "\" does not own key \"" +
                              schema.key_id + "\"");
    if (enc.contains(schema.name))
        throw ValidationError("column \"" + schema.name + "\" already exists");

    EncryptedLog out = enc;
    out.columns.push_back(encrypt_column(schema, cells, keys, counter));
    return out;
}

}  // namespace htelog
