#pragma once

#include <memory>
#include <string>

#include "streamzk/protocol.hpp"

namespace streamzk {

enum class RejectReason {
  kNone,
  kMalformed,
  kHeaderMismatch,
  kTranscriptMismatch,
  kIdentityFailure,
  kBadOpening,
  kModeUnsupported,
};

const char* reason_name(RejectReason r);

struct VerifyResult {
  bool accepted = false;
  RejectReason reason = RejectReason::kNone;
  std::string detail;
};

// Preprocessed verifier data: layout, SRS handle (with the designated
// verifier's trapdoor) and the fixed-column commitments.
struct VerifierKey {
  ProtocolLayout layout;
  std::shared_ptr<const PcsParams> pp;
  FixedCommitments fixed;
};

VerifierKey make_verifier_key(const ProtocolConfig& config);

VerifyResult verify(const VerifierKey& vk, const Statement& statement, const Proof& proof);
// Parses first; malformed bytes give kMalformed.
VerifyResult verify_bytes(const VerifierKey& vk, const Statement& statement, std::span<const uint8_t> bytes);

}  // namespace streamzk
