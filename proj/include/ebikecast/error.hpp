#pragma once

#include <stdexcept>
#include <string>

namespace ebikecast {

/// Error categories; the CLI maps these 1:1 onto process exit codes.
enum class errc : int {
    usage = 2,          ///< bad command line
    io_missing = 10,    ///< input file missing or unreadable
    io_write = 11,      ///< output path unwritable
    csv_format = 12,    ///< malformed cell or row
    csv_schema = 13,    ///< wrong header or column count
    bad_value = 14,     ///< out-of-range value, duplicate or missing key
    precondition = 20,  ///< operation called outside its domain
    degenerate = 21,    ///< constant/singular input with no defined result
};

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    errc code() const noexcept { return code_; }
    int exit_code() const noexcept { return static_cast<int>(code_); }

private:
    errc code_;
};

}  // namespace ebikecast
