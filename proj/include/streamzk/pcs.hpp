#pragma once

// Linear polynomial commitments over BN254 G1: com = sum_i v_i * SRS[offset+i]
// (+ r * H when hiding). The SRS comes in a monomial basis (s^i G) and a
// Lagrange basis over the trace domain (L_i(s) G), both derived from a seed.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "streamzk/curve.hpp"
#include "streamzk/domain.hpp"
#include "streamzk/error.hpp"
#include "streamzk/stream.hpp"

namespace streamzk {

enum class PcsMode : uint8_t { kNonHiding = 0, kHiding = 1, kDesignatedVerifier = 2 };
enum class Basis : uint8_t { kEvaluation = 0, kCoefficient = 1 };

const char* mode_name(PcsMode mode);
std::optional<PcsMode> parse_mode(const std::string& name);

struct Commitment {
  G1 point;

  static Commitment identity() { return Commitment{}; }
  Commitment operator+(const Commitment& o) const { return Commitment{point + o.point}; }
  Commitment& operator+=(const Commitment& o) {
    point += o.point;
    return *this;
  }
  Commitment operator*(const Fr& k) const { return Commitment{point * k}; }
  bool operator==(const Commitment& o) const { return point == o.point; }
  bool operator!=(const Commitment& o) const { return !(point == o.point); }

  std::array<uint8_t, 32> to_bytes() const { return point.to_affine().compress(); }
  static std::optional<Commitment> from_bytes(std::span<const uint8_t> bytes);
};

struct Blinder {
  Fr r;
};

struct OpeningProof {
  Commitment witness;
};

struct PcsParams {
  PcsMode mode = PcsMode::kDesignatedVerifier;
  uint64_t lambda = 128;
  uint64_t max_len = 0;
  std::string seed;
  Domain domain;
  std::vector<G1Affine> monomial;
  std::vector<G1Affine> lagrange;
  // Optional second Lagrange basis (used for an evaluation-basis quotient).
  std::optional<Domain> aux_domain;
  std::vector<G1Affine> aux_lagrange;
  std::optional<G1Affine> hiding_base;
  std::optional<Fr> trapdoor;

  bool hiding() const { return hiding_base.has_value(); }
  const std::vector<G1Affine>& lagrange_for(const Domain& d) const;
};

struct SetupOptions {
  uint64_t lambda = 128;
  uint64_t max_len = 0;
  uint64_t domain_size = 0;
  bool coset = false;
  PcsMode mode = PcsMode::kDesignatedVerifier;
  std::string seed = "streamzk-srs-v1";
  uint64_t aux_domain_size = 0;  // 0: no auxiliary Lagrange basis
};

// Deterministic in the options; results are cached per process.
std::shared_ptr<const PcsParams> setup(const SetupOptions& options);

// Commits a contiguous slice of a vector starting at `offset`, in the given
// basis. Only the slice's positions are touched.
Commitment commit(const PcsParams& pp, Basis basis, std::span<const Fr> values, uint64_t offset = 0,
                  const Fr& blinder = Fr::zero());

// Same, against a Lagrange basis of an explicit domain (trace or auxiliary).
Commitment commit_lagrange(const PcsParams& pp, const Domain& domain, std::span<const Fr> values,
                           uint64_t offset = 0);

// r * H; NonHidingMode if pp has no hiding base and r != 0.
Commitment blinding_term(const PcsParams& pp, const Fr& r);

// Produces count shares of r_base one at a time: the first count-1 are drawn
// from rng, the last is fixed so the shares sum to r_base. O(1) state.
template <class Rng>
class BlinderSplitter {
 public:
  BlinderSplitter(const Fr& r_base, size_t count, Rng& rng) : rest_(r_base), left_(count), rng_(rng) {}
  Fr next();
  size_t remaining() const { return left_; }

 private:
  Fr rest_;
  size_t left_;
  Rng& rng_;
};

template <class Rng>
std::vector<Blinder> split_blinder(const PcsParams& pp, const Blinder& r_base, size_t count, Rng& rng);

void require_hiding(const PcsParams& pp);

// Opening witness for (f(X) - y) / (X - zeta). Evaluation basis: f's values
// over pp.domain in order. Coefficient basis: f's coefficients streamed from
// the highest index down to 0 (n coefficients).
OpeningProof open_stream(const PcsParams& pp, Basis basis, ElementSource& poly, uint64_t n, const Fr& zeta,
                         const Fr& y, size_t b_blk = 256);

// Evaluation-basis opening against the Lagrange basis of `domain`.
OpeningProof open_stream_lagrange(const PcsParams& pp, const Domain& domain, ElementSource& values,
                                  const Fr& zeta, const Fr& y, size_t b_blk = 256);

// Designated-verifier check com - y G - rho H == (s - zeta) proof.
bool verify_open(const PcsParams& pp, const Commitment& com, const Fr& zeta, const Fr& y,
                 const OpeningProof& proof, const Fr& rho = Fr::zero());

template <class Rng>
Fr BlinderSplitter<Rng>::next() {
  if (left_ == 0) fail(Errc::kInvalidArgument, "blinder shares exhausted");
  --left_;
  if (left_ == 0) return rest_;
  const Fr share = Fr::random(rng_);
  rest_ -= share;
  return share;
}

template <class Rng>
std::vector<Blinder> split_blinder(const PcsParams& pp, const Blinder& r_base, size_t count, Rng& rng) {
  require_hiding(pp);
  if (count == 0) fail(Errc::kInvalidArgument, "split into zero shares");
  BlinderSplitter<Rng> splitter(r_base.r, count, rng);
  std::vector<Blinder> out(count);
  for (auto& b : out) b.r = splitter.next();
  return out;
}

}  // namespace streamzk
