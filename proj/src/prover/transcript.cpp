#include "streamzk/transcript.hpp"

#include <algorithm>

namespace streamzk {

namespace {

void update_labeled(Sha256& h, std::string_view label, std::span<const uint8_t> bytes) {
  h.update_u64(label.size());
  h.update(label);
  h.update_u64(bytes.size());
  h.update(bytes);
}

}  // namespace

Transcript::Transcript(std::string_view domain) {
  Sha256 h;
  h.update("streamzk/init");
  h.update_u64(domain.size());
  h.update(domain);
  state_ = h.finish();
}

void Transcript::absorb(std::string_view label, std::span<const uint8_t> bytes) {
  Sha256 h;
  h.update("absorb");
  h.update(state_);
  update_labeled(h, label, bytes);
  state_ = h.finish();
  log_.push_back({std::string(label), std::vector<uint8_t>(bytes.begin(), bytes.end()), false});
}

void Transcript::absorb_u64(std::string_view label, uint64_t v) {
  uint8_t buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<uint8_t>(v >> (8 * i));
  absorb(label, buf);
}

void Transcript::absorb_field(std::string_view label, const Fr& x) {
  const auto bytes = x.to_bytes();
  absorb(label, bytes);
}

Fr Transcript::challenge(std::string_view label) {
  uint8_t wide[64];
  for (uint8_t half = 0; half < 2; ++half) {
    Sha256 h;
    h.update("challenge");
    h.update(state_);
    h.update_u64(label.size());
    h.update(label);
    h.update(std::span<const uint8_t>(&half, 1));
    const Digest d = h.finish();
    std::copy(d.begin(), d.end(), wide + 32 * half);
  }
  const Fr x = Fr::from_uniform_bytes(wide);
  const auto bytes = x.to_bytes();
  Sha256 h;
  h.update("absorb");
  h.update(state_);
  update_labeled(h, label, bytes);
  state_ = h.finish();
  log_.push_back({std::string(label), std::vector<uint8_t>(bytes.begin(), bytes.end()), true});
  return x;
}

long first_divergence(const std::vector<TranscriptItem>& a, const std::vector<TranscriptItem>& b) {
  const size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    if (!(a[i] == b[i])) return static_cast<long>(i);
  }
  return a.size() == b.size() ? -1 : static_cast<long>(n);
}

}  // namespace streamzk
