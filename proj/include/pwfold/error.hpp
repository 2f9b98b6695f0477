#pragma once

#include <stdexcept>
#include <string>

namespace pwfold {

enum class ErrorCode {
    MalformedJson,
    Schema,
    NonFinite,
    DegreeCap,
    EmptyBox,
    Precondition,
    DenominatorZero,
    NotFoldFold,
    Degenerate,
    NoReturn,
    LeftBox,
    TimeOut,
    Integration,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace pwfold
