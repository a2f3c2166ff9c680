#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace leaselab {

enum class ErrorKind {
  NonPowerOfTwoDuration,
  EconomyOfScaleViolated,
  EmptyCatalog,
  Disconnected,
  SelfLoop,
  DuplicateEdge,
  BadNodeId,
  NonMonotonicTime,
  RainyDayOutOfHorizon,
  EmptyRequest,
  UncoveredDominator,
  TooLarge,
  BadParams,
  InfeasibleOutput,
  BadInput,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPowerOfTwoDuration: return "NonPowerOfTwoDuration";
    case ErrorKind::EconomyOfScaleViolated: return "EconomyOfScaleViolated";
    case ErrorKind::EmptyCatalog: return "EmptyCatalog";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::DuplicateEdge: return "DuplicateEdge";
    case ErrorKind::BadNodeId: return "BadNodeId";
    case ErrorKind::NonMonotonicTime: return "NonMonotonicTime";
    case ErrorKind::RainyDayOutOfHorizon: return "RainyDayOutOfHorizon";
    case ErrorKind::EmptyRequest: return "EmptyRequest";
    case ErrorKind::UncoveredDominator: return "UncoveredDominator";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::InfeasibleOutput: return "InfeasibleOutput";
    case ErrorKind::BadInput: return "BadInput";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace leaselab
