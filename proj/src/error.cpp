#include "impartial/error.hpp"

namespace impartial {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::BadHeader: return "BadHeader";
    case ErrorKind::NonNumericCell: return "NonNumericCell";
    case ErrorKind::MissingValue: return "MissingValue";
    case ErrorKind::RaggedRow: return "RaggedRow";
    case ErrorKind::TooFewRows: return "TooFewRows";
    case ErrorKind::TooFewColumns: return "TooFewColumns";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::TooFewObservations: return "TooFewObservations";
    case ErrorKind::DegenerateNullSpace: return "DegenerateNullSpace";
    case ErrorKind::SignUndefined: return "SignUndefined";
    case ErrorKind::AmbiguousDirection: return "AmbiguousDirection";
    case ErrorKind::ZeroCoefficient: return "ZeroCoefficient";
    case ErrorKind::NumericalInconsistency: return "NumericalInconsistency";
    case ErrorKind::ExactFit: return "ExactFit";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::AllReplicatesFailed: return "AllReplicatesFailed";
    case ErrorKind::InvalidLevel: return "InvalidLevel";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace impartial
