#pragma once
#include <stdexcept>
#include <string>

namespace lhdl {

enum class ErrorKind {
    InvalidModel,
    NonConvergence,
    OutOfDomain,
    TooLarge,
    ComplexEigenvalues,
    DegenerateGamma,
    BlowupBeforeT,
    DomainExit,
    SingularStart,
    NoContraction,
    InconsistentOverlap,
    Config,
    Usage,
    Io
};

const char* error_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind k, const std::string& what)
        : std::runtime_error(std::string(error_name(k)) + ": " + what), kind_(k) {}
    ErrorKind kind() const { return kind_; }
private:
    ErrorKind kind_;
};

inline const char* error_name(ErrorKind k)
{
    switch (k) {
    case ErrorKind::InvalidModel: return "InvalidModel";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::ComplexEigenvalues: return "ComplexEigenvalues";
    case ErrorKind::DegenerateGamma: return "DegenerateGamma";
    case ErrorKind::BlowupBeforeT: return "BlowupBeforeT";
    case ErrorKind::DomainExit: return "DomainExit";
    case ErrorKind::SingularStart: return "SingularStart";
    case ErrorKind::NoContraction: return "NoContraction";
    case ErrorKind::InconsistentOverlap: return "InconsistentOverlap";
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::Usage: return "UsageError";
    case ErrorKind::Io: return "IoError";
    }
    return "Error";
}

} // namespace lhdl
