#pragma once

#include <stdexcept>
#include <string>

namespace ncm {

enum class Err {
    InvalidArgument,
    BadParams,
    NonZeroMean,
    NonFinite,
    SingularBlock,
    FirstClassViolation,
    FitFailure,
    Io,
};

class Error : public std::runtime_error {
public:
    Error(Err code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    Err code() const { return code_; }

private:
    Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& msg) { throw Error(code, msg); }

} // namespace ncm
