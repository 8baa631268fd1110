#include "streamzk/hash.hpp"

#include <openssl/evp.h>

#include "streamzk/error.hpp"

namespace streamzk {

struct Sha256::Ctx {
  EVP_MD_CTX* md = nullptr;
};

Sha256::Sha256() : ctx_(std::make_unique<Ctx>()) {
  ctx_->md = EVP_MD_CTX_new();
  if (ctx_->md == nullptr || EVP_DigestInit_ex(ctx_->md, EVP_sha256(), nullptr) != 1) {
    fail(Errc::kIo, "EVP sha256 init failed");
  }
}

Sha256::~Sha256() { EVP_MD_CTX_free(ctx_->md); }

Sha256& Sha256::update(std::span<const uint8_t> bytes) {
  if (!bytes.empty()) EVP_DigestUpdate(ctx_->md, bytes.data(), bytes.size());
  return *this;
}

Sha256& Sha256::update(std::string_view text) {
  return update(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(text.data()), text.size()));
}

Sha256& Sha256::update_u64(uint64_t v) {
  uint8_t buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<uint8_t>(v >> (8 * i));
  return update(std::span<const uint8_t>(buf, 8));
}

Digest Sha256::finish() {
  Digest out{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx_->md, out.data(), &len);
  EVP_DigestInit_ex(ctx_->md, EVP_sha256(), nullptr);
  return out;
}

Digest Sha256::hash(std::span<const uint8_t> bytes) {
  Sha256 h;
  h.update(bytes);
  return h.finish();
}

std::string to_hex(std::span<const uint8_t> bytes) {
  static const char* kDigits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 15]);
  }
  return out;
}

HashDrbg::HashDrbg(std::string_view seed) {
  Sha256 h;
  h.update("streamzk/drbg").update_u64(seed.size()).update(seed);
  key_ = h.finish();
}

HashDrbg::HashDrbg(std::string_view domain, uint64_t seed) {
  Sha256 h;
  h.update("streamzk/drbg").update_u64(domain.size()).update(domain).update_u64(seed);
  key_ = h.finish();
}

void HashDrbg::refill() {
  Sha256 h;
  h.update(key_).update_u64(counter_++);
  block_ = h.finish();
  used_ = 0;
}

void HashDrbg::fill(std::span<uint8_t> out) {
  for (uint8_t& b : out) {
    if (used_ == block_.size()) refill();
    b = block_[used_++];
  }
}

uint64_t HashDrbg::next_u64() {
  uint8_t buf[8];
  fill(buf);
  uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | buf[i];
  return v;
}

Fr HashDrbg::next_field() {
  std::array<uint8_t, 64> buf{};
  fill(buf);
  return Fr::from_uniform_bytes(buf);
}

}  // namespace streamzk
