#pragma once

#include <stdexcept>
#include <string>

namespace ssp {

enum class ErrorKind {
    argument,
    division,
    internal,
    invalid_model,
    unsupported,
    overload,
    seed_failure,
    census_incomplete,
    not_comparable,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& what) { throw Error(k, what); }

inline void require(bool cond, ErrorKind k, const char* what) {
    if (!cond) fail(k, what);
}

}  // namespace ssp
