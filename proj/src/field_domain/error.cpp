#include "streamzk/error.hpp"

namespace streamzk {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kUnsupportedSize: return "UnsupportedSize";
    case Errc::kLengthMismatch: return "LengthMismatch";
    case Errc::kWorkspaceExceeded: return "WorkspaceExceeded";
    case Errc::kPointInDomain: return "PointInDomain";
    case Errc::kConstraintUnsatisfiable: return "ConstraintUnsatisfiable";
    case Errc::kInvalidNode: return "InvalidNode";
    case Errc::kSupportOutOfRange: return "SupportOutOfRange";
    case Errc::kNonHidingMode: return "NonHidingMode";
    case Errc::kModeUnsupported: return "ModeUnsupported";
    case Errc::kZeroDenominator: return "ZeroDenominator";
    case Errc::kInvalidWitness: return "InvalidWitness";
    case Errc::kRemainderNonzero: return "RemainderNonzero";
    case Errc::kBoundaryMismatch: return "BoundaryMismatch";
    case Errc::kHeaderMismatch: return "HeaderMismatch";
    case Errc::kMalformed: return "Malformed";
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kIo: return "Io";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace streamzk
