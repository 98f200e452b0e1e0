#include "teg/errors.hpp"

namespace teg {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Domain: return "DomainError";
        case ErrorKind::NonPositiveValue: return "NonPositiveValue";
        case ErrorKind::Range: return "RangeError";
        case ErrorKind::InvalidModel: return "InvalidModel";
        case ErrorKind::Degenerate: return "DegenerateError";
        case ErrorKind::ZeroSeebeck: return "ZeroSeebeck";
        case ErrorKind::ZeroVoltage: return "ZeroVoltage";
        case ErrorKind::NumericalBlowup: return "NumericalBlowup";
        case ErrorKind::NonPositiveHotFlux: return "NonPositiveHotFlux";
        case ErrorKind::ScanIncomplete: return "ScanIncomplete";
        case ErrorKind::Config: return "ConfigError";
        case ErrorKind::Io: return "IoError";
    }
    return "Error";
}

}  // namespace teg
