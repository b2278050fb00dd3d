#include "gamowkit/error.hpp"

namespace gamowkit {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonPositiveRange: return "NonPositiveRange";
    case ErrorKind::NonFiniteParameter: return "NonFiniteParameter";
    case ErrorKind::PoleEvaluation: return "PoleEvaluation";
    case ErrorKind::WrongModelKind: return "WrongModelKind";
    case ErrorKind::NonPositiveK: return "NonPositiveK";
    case ErrorKind::NonPositiveTime: return "NonPositiveTime";
    case ErrorKind::ZeroOnBoundary: return "ZeroOnBoundary";
    case ErrorKind::NewtonStall: return "NewtonStall";
    case ErrorKind::AmbiguousOnAxis: return "AmbiguousOnAxis";
    case ErrorKind::NotAPole: return "NotAPole";
    case ErrorKind::DegenerateNorm: return "DegenerateNorm";
    case ErrorKind::ContourTouchesOtherPole: return "ContourTouchesOtherPole";
    case ErrorKind::UnpairedPoles: return "UnpairedPoles";
    case ErrorKind::PoleTooClose: return "PoleTooClose";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::UnsupportedTestFunction: return "UnsupportedTestFunction";
    case ErrorKind::OutsideInteractionRegion: return "OutsideInteractionRegion";
    case ErrorKind::ImproperPoleInExponentialPath: return "ImproperPoleInExponentialPath";
    case ErrorKind::EmptySelection: return "EmptySelection";
    case ErrorKind::NonMeromorphicIntegrand: return "NonMeromorphicIntegrand";
    case ErrorKind::PoleBudgetExceeded: return "PoleBudgetExceeded";
    case ErrorKind::PoleOnPath: return "PoleOnPath";
    case ErrorKind::SeriesDiverging: return "SeriesDiverging";
    case ErrorKind::BoundaryContamination: return "BoundaryContamination";
    case ErrorKind::ConfigParse: return "ConfigParse";
  }
  return "Unknown";
}

}  // namespace gamowkit
