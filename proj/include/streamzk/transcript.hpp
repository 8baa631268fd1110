#pragma once

// Fiat-Shamir transcript over a SHA-256 chain. Every absorbed item is
// (label, bytes), length-prefixed; challenges are hashed out of the current
// state and absorbed back so consecutive draws differ.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "streamzk/field.hpp"
#include "streamzk/hash.hpp"

namespace streamzk {

struct TranscriptItem {
  std::string label;
  std::vector<uint8_t> bytes;
  bool challenge = false;
  bool operator==(const TranscriptItem&) const = default;
};

class Transcript {
 public:
  explicit Transcript(std::string_view domain = "streamzk/transcript/v1");

  void absorb(std::string_view label, std::span<const uint8_t> bytes);
  void absorb_u64(std::string_view label, uint64_t v);
  void absorb_field(std::string_view label, const Fr& x);
  Fr challenge(std::string_view label);

  const Digest& state() const { return state_; }
  const std::vector<TranscriptItem>& log() const { return log_; }

 private:
  Digest state_{};
  std::vector<TranscriptItem> log_;
};

// Index of the first differing item, or -1 when both logs are identical.
long first_divergence(const std::vector<TranscriptItem>& a, const std::vector<TranscriptItem>& b);

}  // namespace streamzk
