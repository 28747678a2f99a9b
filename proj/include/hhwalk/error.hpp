#pragma once

#include <stdexcept>
#include <string>

namespace hhwalk {

enum class ErrorCode {
    invalid_argument = 1,
    retries_exhausted,
    template_size_mismatch,
    not_automorphic,
    dead_end,
    degenerate_params,
    singular_system,
    not_converged,
    io,
};

/// Exception carrying one of the library's error categories. The C API maps
/// `code()` directly onto its status values.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, const std::string& what)
{
    if (!cond)
        fail(ErrorCode::invalid_argument, what);
}

} // namespace hhwalk
