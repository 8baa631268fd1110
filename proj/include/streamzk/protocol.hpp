#pragma once

// Pieces shared by both provers and the verifier: the statement, the proof
// layout and its canonical encoding, the constraint combination R and the
// Fiat-Shamir schedule.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "streamzk/accumulators.hpp"
#include "streamzk/air.hpp"
#include "streamzk/pcs.hpp"
#include "streamzk/transcript.hpp"

namespace streamzk {

constexpr size_t kMaxRegisters = 8;
constexpr uint8_t kProofVersion = 1;
constexpr unsigned kMaxPermRetries = 8;

struct ProtocolConfig {
  std::string air_id = "fib";
  uint64_t trace_length = 0;
  bool coset = false;
  Basis quotient_basis = Basis::kCoefficient;
  PcsMode mode = PcsMode::kDesignatedVerifier;
  std::string srs_seed = "streamzk-srs-v1";
  bool operator==(const ProtocolConfig&) const = default;
};

struct Statement {
  ProtocolConfig config;
  std::vector<Fr> publics;  // in the AIR's public_cells order
  bool operator==(const Statement&) const = default;
};

std::string statement_to_json(const Statement& st);
Statement statement_from_json(const std::string& text);  // Malformed on bad input

// Polynomial ids used in evaluation claims.
namespace poly {
constexpr uint8_t kSelector = 0x00;
constexpr uint8_t kSigma = 0x10;  // + register
constexpr uint8_t kWire = 0x20;   // + register
constexpr uint8_t kZ = 0x30;
constexpr uint8_t kZLookup = 0x31;
constexpr uint8_t kQuotient = 0x40;
}  // namespace poly

enum class EvalPoint : uint8_t { kZeta = 0, kZetaOmega = 1 };

struct EvalKey {
  uint8_t poly;
  EvalPoint point;
  bool operator==(const EvalKey&) const = default;
};

// Everything fixed by (AIR, T, config): domains, quotient shape, claim order.
struct ProtocolLayout {
  ProtocolConfig config;
  AirSpec air;
  uint64_t T = 0;
  uint64_t N = 0;
  Domain domain;
  std::vector<Fr> shifts;  // permutation coset shifts
  bool perm = false;
  bool lookup = false;
  unsigned d = 2;          // cosets used to evaluate R; deg R < d N
  uint64_t q_len = 0;      // (d - 1) N quotient coefficients
  Fr quotient_coset;       // g: the quotient cosets are g eta^s <omega>
  std::optional<Domain> q_domain;  // evaluation-basis quotient domain
  std::vector<EvalKey> evals;      // canonical claim order
  std::vector<uint8_t> open_zeta;  // polys batched at zeta, in order
  std::vector<uint8_t> open_zeta_omega;

  size_t eval_index(EvalKey key) const;
  SetupOptions setup_options() const;
};

ProtocolLayout make_layout(const ProtocolConfig& config);

struct ProofHeader {
  ProtocolConfig config;
  uint64_t N = 0;
  bool operator==(const ProofHeader&) const = default;
};

struct Proof {
  ProofHeader header;
  uint8_t perm_retries = 0;
  std::vector<Commitment> wire_coms;
  std::optional<Commitment> z_com;
  std::optional<Commitment> zl_com;
  Commitment q_com;
  std::vector<Fr> evals;  // aligned with layout.evals
  OpeningProof open_zeta;
  OpeningProof open_zeta_omega;
  std::optional<Fr> rho_zeta;  // hiding mode only
  std::optional<Fr> rho_zeta_omega;

  std::vector<uint8_t> serialize() const;
  bool operator==(const Proof& o) const { return serialize() == o.serialize(); }
};

// Strict parse: throws Malformed on any structural problem.
Proof parse_proof(std::span<const uint8_t> bytes);
std::vector<uint8_t> header_bytes(const ProofHeader& header);

// Commitments to the fixed columns (selector, sigma), computed by streaming
// with O(b) workspace and cached per layout.
struct FixedCommitments {
  Commitment selector;
  std::vector<Commitment> sigma;
};
FixedCommitments fixed_commitments(const ProtocolLayout& layout, const PcsParams& pp, size_t b_blk = 256);

// Selector and sigma values at row i.
Fr selector_value(const ProtocolLayout& layout, uint64_t row);
Fr sigma_value(const ProtocolLayout& layout, size_t reg, uint64_t row);

// Values entering R at one point x.
struct PointValues {
  Fr x;
  std::array<Fr, kMaxRegisters> w{}, w_next{}, sigma{};
  Fr selector, z, z_next, zl, zl_next;
  Fr l_first, l_last;  // L_0(x), L_{T-1}(x)
};

// R(x) = sum_j alpha^j C_j(x): transitions (next-row ones gated by the
// selector), public boundaries, then the permutation and lookup terms.
Fr combine_constraints(const ProtocolLayout& layout, const Challenges& ch, std::span<const Fr> publics,
                       const PointValues& v);

// Fiat-Shamir schedule shared by provers and verifier.
class FsSchedule {
 public:
  FsSchedule(const ProtocolLayout& layout, const Statement& st, const FixedCommitments& fixed);

  void absorb_wires(std::span<const Commitment> coms);
  // Retry r > 0 absorbs the counter first.
  void draw_perm(unsigned retry, Challenges& ch);
  void absorb_accumulators(const std::optional<Commitment>& z, const std::optional<Commitment>& zl,
                           Challenges& ch);
  // Redraws until zeta and zeta*omega avoid every committed domain.
  void absorb_quotient(const Commitment& q, Challenges& ch);
  Fr absorb_evals(std::span<const Fr> evals);
  void absorb_openings(const Proof& proof);

  Transcript& transcript() { return tr_; }

 private:
  const ProtocolLayout& layout_;
  Transcript tr_;
};

// Blinders in draw order: wires, Z, Z_L, Q. Zero in non-hiding modes.
struct Blinders {
  std::vector<Fr> wires;
  Fr z, zl, q;
};
Blinders draw_blinders(const ProtocolLayout& layout, uint64_t prover_seed);

// Batched opening blinders rho = sum nu^j r_j over the batched polys.
Fr batched_blinder(const ProtocolLayout& layout, const std::vector<uint8_t>& polys, const Blinders& b,
                   const Fr& nu);

}  // namespace streamzk
