#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gamowkit {

enum class ErrorKind {
  InvalidArgument,
  NonPositiveRange,
  NonFiniteParameter,
  PoleEvaluation,
  WrongModelKind,
  NonPositiveK,
  NonPositiveTime,
  ZeroOnBoundary,
  NewtonStall,
  AmbiguousOnAxis,
  NotAPole,
  DegenerateNorm,
  ContourTouchesOtherPole,
  UnpairedPoles,
  PoleTooClose,
  NoConvergence,
  UnsupportedTestFunction,
  OutsideInteractionRegion,
  ImproperPoleInExponentialPath,
  EmptySelection,
  NonMeromorphicIntegrand,
  PoleBudgetExceeded,
  PoleOnPath,
  SeriesDiverging,
  BoundaryContamination,
  ConfigParse,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every library failure is reported through this type; kind() is stable and
// what the CLI prints on the diagnostic stream.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return to_string(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace gamowkit
