#pragma once

#include <stdexcept>
#include <string>

namespace relhom {

// Input file / argument problems. `line` is 0 when not tied to a file line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// A caller violated an operation's stated precondition.
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A configured resource cap was hit. Never silently truncate: throw this.
class CapExceeded : public std::runtime_error {
public:
    CapExceeded(std::string msg, long long partial = -1)
        : std::runtime_error(std::move(msg)), partial_(partial) {}
    // Partial count accumulated before the cap fired, -1 if not meaningful.
    long long partial_count() const { return partial_; }

private:
    long long partial_;
};

// A constructed witness failed its own validation. This signals a bug in the
// construction, not bad user input.
class InternalCheckError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace relhom
