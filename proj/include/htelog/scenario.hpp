#pragma once

#include <filesystem>

#include <json.hpp>

#include "htelog/encrypted_log.hpp"

namespace htelog {

// Executes a declared multi-organization workflow: the creator encrypts its
// log, hand-offs run through untrusted relays that observe ciphertext only,
// organizations append their own encrypted columns, and the PM point finally
// decrypts. Returns a JSON transcript of every step and view.
//
// Scenario file:
//   {
//     "name": "...",
//     "log": "log.csv", "schema": "schema.json", "keys": "keys.json",
//     "organizations": [{"id": "...", "role": "creator-trusted" | ...}, ...],
//     "steps": [
//       {"op": "create", "org": ...},
//       {"op": "relay", "from": ..., "to": ..., "interface": ...},
//       {"op": "append_column", "org": ..., "column":
//           {"values": [...], "schema": {...column schema...}}},
//       {"op": "view", "org": ...},
//       {"op": "pm_decrypt", "org": ...}
//     ]
//   }
// Relative paths resolve against the scenario file's directory.
nlohmann::ordered_json run_scenario(const std::filesystem::path& scenario_file);

}  // namespace htelog
