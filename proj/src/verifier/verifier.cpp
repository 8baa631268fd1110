#include "streamzk/verifier.hpp"

#include "streamzk/error.hpp"

namespace streamzk {

namespace {

VerifyResult reject(RejectReason r, std::string detail) { return {false, r, std::move(detail)}; }

}  // namespace

const char* reason_name(RejectReason r) {
  switch (r) {
    case RejectReason::kNone: return "none";
    case RejectReason::kMalformed: return "malformed";
    case RejectReason::kHeaderMismatch: return "header-mismatch";
    case RejectReason::kTranscriptMismatch: return "transcript-mismatch";
    case RejectReason::kIdentityFailure: return "identity-failure";
    case RejectReason::kBadOpening: return "bad-opening";
    case RejectReason::kModeUnsupported: return "mode-unsupported";
  }
  return "unknown";
}

VerifierKey make_verifier_key(const ProtocolConfig& config) {
  VerifierKey vk;
  vk.layout = make_layout(config);
  vk.pp = setup(vk.layout.setup_options());
  vk.fixed = fixed_commitments(vk.layout, *vk.pp);
  return vk;
}

VerifyResult verify(const VerifierKey& vk, const Statement& st, const Proof& proof) {
  const ProtocolLayout& layout = vk.layout;
  const AirSpec& air = layout.air;
  const size_t k = air.k;
  if (!(st.config == layout.config) || !(proof.header == ProofHeader{layout.config, layout.N})) {
    return reject(RejectReason::kHeaderMismatch, "proof header does not match the statement");
  }
  if (st.publics.size() != air.public_cells.size()) {
    return reject(RejectReason::kHeaderMismatch, "wrong number of public values");
  }
  if (proof.wire_coms.size() != k || proof.evals.size() != layout.evals.size() ||
      proof.z_com.has_value() != layout.perm || proof.zl_com.has_value() != layout.lookup ||
      proof.rho_zeta.has_value() != (layout.config.mode == PcsMode::kHiding) ||
      proof.rho_zeta_omega.has_value() != proof.rho_zeta.has_value()) {
    return reject(RejectReason::kMalformed, "proof shape does not match the layout");
  }
  if (proof.perm_retries > kMaxPermRetries) return reject(RejectReason::kTranscriptMismatch, "too many retries");

  FsSchedule fs(layout, st, vk.fixed);
  Challenges ch;
  fs.absorb_wires(proof.wire_coms);
  for (unsigned r = 0; r <= proof.perm_retries; ++r) fs.draw_perm(r, ch);
  fs.absorb_accumulators(proof.z_com, proof.zl_com, ch);
  fs.absorb_quotient(proof.q_com, ch);
  const Fr nu = fs.absorb_evals(proof.evals);

  const Domain& h = layout.domain;
  const Fr zw = ch.zeta * h.omega;
  auto eval = [&](uint8_t id, EvalPoint at) { return proof.evals[layout.eval_index({id, at})]; };

  PointValues v;
  v.x = ch.zeta;
  for (size_t m = 0; m < k; ++m) {
    v.w[m] = eval(static_cast<uint8_t>(poly::kWire + m), EvalPoint::kZeta);
    v.w_next[m] = eval(static_cast<uint8_t>(poly::kWire + m), EvalPoint::kZetaOmega);
    if (layout.perm) v.sigma[m] = eval(static_cast<uint8_t>(poly::kSigma + m), EvalPoint::kZeta);
  }
  v.selector = eval(poly::kSelector, EvalPoint::kZeta);
  if (layout.perm) {
    v.z = eval(poly::kZ, EvalPoint::kZeta);
    v.z_next = eval(poly::kZ, EvalPoint::kZetaOmega);
  }
  if (layout.lookup) {
    v.zl = eval(poly::kZLookup, EvalPoint::kZeta);
    v.zl_next = eval(poly::kZLookup, EvalPoint::kZetaOmega);
  }
  v.l_first = h.lagrange(0, ch.zeta);
  v.l_last = h.lagrange(layout.T - 1, ch.zeta);
  const Fr r = combine_constraints(layout, ch, st.publics, v);
  if (r != h.vanishing(ch.zeta) * eval(poly::kQuotient, EvalPoint::kZeta)) {
    return reject(RejectReason::kIdentityFailure, "R(zeta) != Z_H(zeta) Q(zeta)");
  }

  if (!vk.pp->trapdoor) {
    return reject(RejectReason::kModeUnsupported, "openings need the designated-verifier trapdoor");
  }
  auto com_of = [&](uint8_t id) -> Commitment {
    if (id == poly::kSelector) return vk.fixed.selector;
    if (id >= poly::kSigma && id < poly::kSigma + k) return vk.fixed.sigma[id - poly::kSigma];
    if (id >= poly::kWire && id < poly::kWire + k) return proof.wire_coms[id - poly::kWire];
    if (id == poly::kZ) return *proof.z_com;
    if (id == poly::kZLookup) return *proof.zl_com;
    return proof.q_com;
  };
  auto check = [&](const std::vector<uint8_t>& polys, EvalPoint at, const Fr& point, const OpeningProof& w,
                   const std::optional<Fr>& rho) {
    Commitment com;
    Fr y, p = Fr::one();
    for (uint8_t id : polys) {
      com += com_of(id) * p;
      y += p * eval(id, at);
      p *= nu;
    }
    return verify_open(*vk.pp, com, point, y, w, rho.value_or(Fr::zero()));
  };
  if (!check(layout.open_zeta, EvalPoint::kZeta, ch.zeta, proof.open_zeta, proof.rho_zeta)) {
    return reject(RejectReason::kBadOpening, "batched opening at zeta fails");
  }
  if (!check(layout.open_zeta_omega, EvalPoint::kZetaOmega, zw, proof.open_zeta_omega, proof.rho_zeta_omega)) {
    return reject(RejectReason::kBadOpening, "batched opening at zeta*omega fails");
  }
  return {true, RejectReason::kNone, ""};
}

VerifyResult verify_bytes(const VerifierKey& vk, const Statement& st, std::span<const uint8_t> bytes) {
  Proof proof;
  try {
    proof = parse_proof(bytes);
  } catch (const Error& e) {
    return reject(RejectReason::kMalformed, e.what());
  }
  return verify(vk, st, proof);
}

}  // namespace streamzk
