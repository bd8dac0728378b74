#pragma once

#include <stdexcept>
#include <string>

namespace netbid {

// Bad user input: malformed config files, out-of-range parameters, IO
// trouble. The CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A protocol or conservation invariant broke. Always indicates a bug in
// the engine, never bad input. The CLI maps this to exit code 2.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace netbid
