#pragma once

#include <stdexcept>
#include <string>

namespace herigraph {

// Base class for every error the engine raises. `module` names the stage
// that failed (schema, features, labels, graph, stats, pipeline).
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& message)
        : std::runtime_error(message), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

// Bad input data or configuration. Maps to exit status 1.
class DataError : public Error {
public:
    using Error::Error;
};

// Missing, unreadable or unwritable file. Maps to exit status 2.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace herigraph
