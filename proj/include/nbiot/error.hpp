#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nbiot {

// Bad names, unparsable files, malformed catalogs.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An operation was called outside its domain (e.g. TBS column out of range).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A file could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ValidationIssue {
    std::string field;
    std::string message;
};

// Collects every violated scenario invariant, not just the first one.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<ValidationIssue> issues)
        : std::runtime_error(render(issues)), issues_(std::move(issues)) {}

    const std::vector<ValidationIssue>& issues() const noexcept { return issues_; }

private:
    static std::string render(const std::vector<ValidationIssue>& issues) {
        std::string out = "invalid scenario:";
        for (const auto& i : issues) {
            out += " [" + i.field + "] " + i.message + ";";
        }
        return out;
    }

    std::vector<ValidationIssue> issues_;
};

}  // namespace nbiot
