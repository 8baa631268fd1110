#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace streamzk {

enum class Errc {
  kUnsupportedSize,
  kLengthMismatch,
  kWorkspaceExceeded,
  kPointInDomain,
  kConstraintUnsatisfiable,
  kInvalidNode,
  kSupportOutOfRange,
  kNonHidingMode,
  kModeUnsupported,
  kZeroDenominator,
  kInvalidWitness,
  kRemainderNonzero,
  kBoundaryMismatch,
  kHeaderMismatch,
  kMalformed,
  kInvalidArgument,
  kIo,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

}  // namespace streamzk
