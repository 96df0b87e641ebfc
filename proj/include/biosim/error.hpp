#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace biosim {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File or text that could not be parsed. Carries the source path and the
/// 1-based line where the problem was found (0 when not line-specific).
class ParseError : public Error {
public:
    ParseError(std::string source, std::size_t line, const std::string& message)
        : Error(source + ":" + std::to_string(line) + ": " + message),
          source_(std::move(source)), line_(line) {}

    const std::string& source() const { return source_; }
    std::size_t line() const { return line_; }

private:
    std::string source_;
    std::size_t line_;
};

struct ConfigIssue {
    std::string section;
    std::string key;
    std::string message;

    std::string to_string() const { return "[" + section + "] " + key + ": " + message; }
};

/// One or more validation failures, each tagged with the section/key it came from.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<ConfigIssue> issues)
        : Error(join(issues)), issues_(std::move(issues)) {}
    ConfigError(std::string section, std::string key, std::string message)
        : ConfigError(std::vector<ConfigIssue>{{std::move(section), std::move(key), std::move(message)}}) {}

    const std::vector<ConfigIssue>& issues() const { return issues_; }

private:
    static std::string join(const std::vector<ConfigIssue>& issues) {
        std::string out;
        for (const auto& i : issues) {
            if (!out.empty()) out += "\n";
            out += i.to_string();
        }
        return out;
    }

    std::vector<ConfigIssue> issues_;
};

}  // namespace biosim
