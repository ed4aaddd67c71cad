#pragma once

#include <stdexcept>
#include <string>

namespace htelog {

// Validation failures (bad arguments, schema violations, key mismatches).
// The CLI maps these to exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// File and parse failures. The CLI maps these to exit code 2.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace htelog
