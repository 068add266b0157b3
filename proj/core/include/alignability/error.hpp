#pragma once

#include <stdexcept>
#include <string>

namespace alignability {

// Error with a machine-parseable category ("io.line-count-mismatch",
// "config.path-missing", ...). The CLI prints "error: <category>: <what>".
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& message)
        : std::runtime_error(message), category_(std::move(category)) {}

    const std::string& category() const { return category_; }

private:
    std::string category_;
};

[[noreturn]] inline void fail(const std::string& category, const std::string& message) {
    throw Error(category, message);
}

}  // namespace alignability
