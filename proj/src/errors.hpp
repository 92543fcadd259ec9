#pragma once

#include <stdexcept>
#include <string>

namespace fkr {

enum class ErrorKind { Generic = 1, Config = 2, Cap = 3, Invariant = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind k, const std::string& msg) : std::runtime_error(msg), kind_(k) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

inline Error config_error(const std::string& m) { return Error(ErrorKind::Config, m); }
inline Error cap_error(const std::string& m) { return Error(ErrorKind::Cap, m); }
inline Error invariant_error(const std::string& m) { return Error(ErrorKind::Invariant, m); }

}  // namespace fkr
