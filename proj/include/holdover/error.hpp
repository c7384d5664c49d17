#pragma once

#include <stdexcept>
#include <string>

namespace holdover {

enum class Errc {
    invalid_argument,
    parse,
    out_of_range,
    not_found,
    io,
    insufficient_data,
    internal,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, std::string message)
{
    throw Error(code, std::move(message));
}

} // namespace holdover
