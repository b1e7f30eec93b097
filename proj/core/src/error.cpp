#include "lsqmc/error.hpp"

namespace lsqmc {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::RadicandMismatch: return "RadicandMismatch";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::UnsupportedParams: return "UnsupportedParams";
    case ErrorKind::InvalidDigits: return "InvalidDigits";
    case ErrorKind::ResourceLimit: return "ResourceLimit";
    case ErrorKind::InvalidAnchor: return "InvalidAnchor";
    case ErrorKind::NotInInterval: return "NotInInterval";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::NoRelationFound: return "NoRelationFound";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::UnknownFunction: return "UnknownFunction";
  }
  return "Unknown";
}

}  // namespace lsqmc
