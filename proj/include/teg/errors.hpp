#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace teg {

// Every failure the library reports carries one of these kinds. The CLI maps
// each kind onto a distinct process exit code.
enum class ErrorKind {
    Domain,            // evaluation below a model's valid temperature
    NonPositiveValue,  // a material property evaluated to <= 0
    Range,             // K^-1 argument outside [T_c, K_inf)
    InvalidModel,      // malformed material parameters or geometry
    Degenerate,        // T_h == T_c where a closed form needs Delta T > 0
    ZeroSeebeck,       // alpha_0 == 0 where z is required
    ZeroVoltage,       // V == 0 where the shooting machinery needs V != 0
    NumericalBlowup,   // integrator could not reach the cold-side event
    NonPositiveHotFlux,
    ScanIncomplete,
    Config,
    Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

#define TEG_DEFINE_ERROR(Name)                                                   \
    class Name : public Error {                                                  \
    public:                                                                      \
        explicit Name(const std::string& what) : Error(ErrorKind::Name, what) {} \
    }

// Names follow ErrorKind; DomainError / RangeError get the conventional suffix.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};
class RangeError : public Error {
public:
    explicit RangeError(const std::string& what) : Error(ErrorKind::Range, what) {}
};
class DegenerateError : public Error {
public:
    explicit DegenerateError(const std::string& what) : Error(ErrorKind::Degenerate, what) {}
};
TEG_DEFINE_ERROR(NonPositiveValue);
TEG_DEFINE_ERROR(InvalidModel);
TEG_DEFINE_ERROR(ZeroSeebeck);
TEG_DEFINE_ERROR(ZeroVoltage);
TEG_DEFINE_ERROR(NumericalBlowup);
TEG_DEFINE_ERROR(NonPositiveHotFlux);
TEG_DEFINE_ERROR(ScanIncomplete);
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};
class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

#undef TEG_DEFINE_ERROR

}  // namespace teg
