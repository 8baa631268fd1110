#include "streamzk/pcs.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

#include "streamzk/error.hpp"
#include "streamzk/hash.hpp"

namespace streamzk {

const char* mode_name(PcsMode mode) {
  switch (mode) {
    case PcsMode::kNonHiding: return "non_hiding";
    case PcsMode::kHiding: return "hiding";
    case PcsMode::kDesignatedVerifier: return "designated_verifier";
  }
  return "?";
}

std::optional<PcsMode> parse_mode(const std::string& name) {
  if (name == "non_hiding" || name == "non-hiding") return PcsMode::kNonHiding;
  if (name == "hiding") return PcsMode::kHiding;
  if (name == "designated_verifier" || name == "dv") return PcsMode::kDesignatedVerifier;
  return std::nullopt;
}

std::optional<Commitment> Commitment::from_bytes(std::span<const uint8_t> bytes) {
  auto p = G1Affine::decompress(bytes);
  if (!p) return std::nullopt;
  return Commitment{G1(*p)};
}

const std::vector<G1Affine>& PcsParams::lagrange_for(const Domain& d) const {
  if (d == domain) return lagrange;
  if (aux_domain && d == *aux_domain) return aux_lagrange;
  fail(Errc::kSupportOutOfRange, "no Lagrange basis for a domain of size " + std::to_string(d.size));
}

namespace {

Fr trapdoor_from_seed(const std::string& seed) {
  HashDrbg drbg("streamzk/srs-trapdoor/" + seed);
  return drbg.next_field();
}

const FixedBaseTable& generator_table() {
  static const FixedBaseTable table(G1::generator());
  return table;
}

std::vector<G1Affine> fixed_base_batch(std::span<const Fr> scalars) {
  const auto& table = generator_table();
  std::vector<G1Affine> out(scalars.size());
  constexpr size_t kChunk = 4096;
  std::vector<G1> tmp;
  for (size_t i = 0; i < scalars.size(); i += kChunk) {
    const size_t len = std::min(kChunk, scalars.size() - i);
    tmp.resize(len);
    for (size_t j = 0; j < len; ++j) tmp[j] = table.mul(scalars[i + j]);
    batch_normalize(tmp, std::span<G1Affine>(out).subspan(i, len));
  }
  return out;
}

std::vector<G1Affine> lagrange_srs(const Domain& d, const Fr& s) {
  // L_i(s) = h_i (s^N - c) / (N c (s - h_i)).
  std::vector<Fr> scalars(d.size);
  Fr h = d.offset;
  for (auto& v : scalars) {
    v = s - h;
    h *= d.omega;
  }
  field::batch_invert(scalars);
  const Fr factor = d.vanishing(s) * (Fr::from_u64(d.size) * d.vanishing_constant).inverse();
  h = d.offset;
  for (auto& v : scalars) {
    v *= h * factor;
    h *= d.omega;
  }
  return fixed_base_batch(scalars);
}

std::vector<G1Affine> monomial_srs(const std::string& seed, uint64_t len) {
  static std::mutex mu;
  static std::map<std::string, std::vector<G1Affine>> cache;
  std::lock_guard lock(mu);
  auto& cached = cache[seed];
  if (cached.size() < len) {
    const Fr s = trapdoor_from_seed(seed);
    std::vector<Fr> powers(len);
    Fr p = Fr::one();
    for (auto& v : powers) {
      v = p;
      p *= s;
    }
    cached = fixed_base_batch(powers);
  }
  return std::vector<G1Affine>(cached.begin(), cached.begin() + static_cast<ptrdiff_t>(len));
}

}  // namespace

std::shared_ptr<const PcsParams> setup(const SetupOptions& o) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const PcsParams>> cache;
  std::ostringstream key;
  key << o.lambda << '|' << o.max_len << '|' << o.domain_size << '|' << o.coset << '|'
      << static_cast<int>(o.mode) << '|' << o.aux_domain_size << '|' << o.seed;
  {
    std::lock_guard lock(mu);
    auto it = cache.find(key.str());
    if (it != cache.end()) return it->second;
  }
  if (o.lambda > 128) fail(Errc::kUnsupportedSize, "BN254 offers about 128-bit security at most");
  auto pp = std::make_shared<PcsParams>();
  pp->mode = o.mode;
  pp->lambda = o.lambda;
  pp->max_len = o.max_len;
  pp->seed = o.seed;
  const Fr s = trapdoor_from_seed(o.seed);
  pp->monomial = monomial_srs(o.seed, o.max_len);
  if (o.domain_size > 0) {
    pp->domain = make_domain(o.domain_size, o.coset);
    if (pp->domain.contains(s)) fail(Errc::kPointInDomain, "trapdoor lies in the domain");
    pp->lagrange = lagrange_srs(pp->domain, s);
  }
  if (o.aux_domain_size > 0) {
    pp->aux_domain = make_domain(o.aux_domain_size, false);
    if (pp->aux_domain->contains(s)) fail(Errc::kPointInDomain, "trapdoor lies in the domain");
    pp->aux_lagrange = lagrange_srs(*pp->aux_domain, s);
  }
  if (o.mode == PcsMode::kHiding) {
    const std::string msg = o.seed;
    pp->hiding_base = hash_to_curve("streamzk/hiding-base",
                                    std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(msg.data()), msg.size()));
  }
  if (o.mode != PcsMode::kNonHiding) pp->trapdoor = s;
  std::lock_guard lock(mu);
  cache[key.str()] = pp;
  return pp;
}

void require_hiding(const PcsParams& pp) {
  if (!pp.hiding()) fail(Errc::kNonHidingMode, "blinders need a hiding base");
}

Commitment blinding_term(const PcsParams& pp, const Fr& r) {
  if (r.is_zero()) return Commitment{};
  require_hiding(pp);
  return Commitment{G1(*pp.hiding_base) * r};
}

Commitment commit(const PcsParams& pp, Basis basis, std::span<const Fr> values, uint64_t offset,
                  const Fr& blinder) {
  const auto& srs = basis == Basis::kCoefficient ? pp.monomial : pp.lagrange;
  if (offset > srs.size() || values.size() > srs.size() - offset) {
    fail(Errc::kSupportOutOfRange, "support [" + std::to_string(offset) + ", " +
                                       std::to_string(offset + values.size()) + ") exceeds SRS of " +
                                       std::to_string(srs.size()));
  }
  Commitment com{msm(values, std::span<const G1Affine>(srs).subspan(offset, values.size()))};
  return com + blinding_term(pp, blinder);
}

Commitment commit_lagrange(const PcsParams& pp, const Domain& domain, std::span<const Fr> values,
                           uint64_t offset) {
  const auto& srs = pp.lagrange_for(domain);
  if (offset > srs.size() || values.size() > srs.size() - offset) {
    fail(Errc::kSupportOutOfRange, "support exceeds the Lagrange SRS");
  }
  return Commitment{msm(values, std::span<const G1Affine>(srs).subspan(offset, values.size()))};
}

OpeningProof open_stream_lagrange(const PcsParams& pp, const Domain& d, ElementSource& poly, const Fr& zeta,
                                  const Fr& y, size_t b_blk) {
  b_blk = std::max<size_t>(1, b_blk);
  if (d.contains(zeta)) fail(Errc::kPointInDomain, "opening point lies in the domain");
  Metered<Fr> buf(b_blk);
  Metered<Fr> inv(b_blk);
  Commitment acc;
  uint64_t pos = 0;
  for (;;) {
    const size_t got = poly.read(buf.span());
    if (got == 0) break;
    if (pos + got > d.size) fail(Errc::kLengthMismatch, "too many values");
    Fr h = d.element(pos);
    for (size_t i = 0; i < got; ++i) {
      inv[i] = h - zeta;
      h *= d.omega;
    }
    field::batch_invert(inv.span().first(got));
    for (size_t i = 0; i < got; ++i) buf[i] = (buf[i] - y) * inv[i];
    acc += commit_lagrange(pp, d, buf.span().first(got), pos);
    pos += got;
  }
  if (pos != d.size) fail(Errc::kLengthMismatch, "too few values");
  return OpeningProof{acc};
}

OpeningProof open_stream(const PcsParams& pp, Basis basis, ElementSource& poly, uint64_t n, const Fr& zeta,
                         const Fr& y, size_t b_blk) {
  b_blk = std::max<size_t>(1, b_blk);
  Metered<Fr> buf(b_blk);
  Commitment acc;
  if (basis == Basis::kEvaluation) {
    if (n != pp.domain.size) fail(Errc::kLengthMismatch, "evaluation-basis opening needs N values");
    return open_stream_lagrange(pp, pp.domain, poly, zeta, y, b_blk);
  }
  // Coefficients arrive as f_{n-1}, ..., f_0; w_{j-1} = f_j + zeta w_j.
  Metered<Fr> in(b_blk);
  Fr w;
  uint64_t seen = 0;
  size_t fill = 0;  // buf[0..fill) holds w_top, w_{top-1}, ...
  uint64_t top = n >= 2 ? n - 2 : 0;
  auto flush = [&]() {
    if (fill == 0) return;
    std::reverse(buf.begin(), buf.begin() + static_cast<ptrdiff_t>(fill));
    acc += commit(pp, Basis::kCoefficient, buf.span().first(fill), top + 1 - fill);
    top -= fill;
    fill = 0;
  };
  for (;;) {
    const size_t got = poly.read(in.span());
    if (got == 0) break;
    for (size_t i = 0; i < got; ++i) {
      if (seen >= n) fail(Errc::kLengthMismatch, "too many coefficients");
      ++seen;
      if (seen == n) continue;  // f_0 only feeds the remainder
      w = in[i] + zeta * w;
      buf[fill++] = w;
      if (fill == b_blk) flush();
    }
  }
  if (seen != n) fail(Errc::kLengthMismatch, "too few coefficients");
  flush();
  return OpeningProof{acc};
}

bool verify_open(const PcsParams& pp, const Commitment& com, const Fr& zeta, const Fr& y,
                 const OpeningProof& proof, const Fr& rho) {
  if (!pp.trapdoor) fail(Errc::kModeUnsupported, "verification needs the designated-verifier trapdoor");
  if (!rho.is_zero() && !pp.hiding()) return false;
  G1 lhs = com.point - G1::generator() * y;
  if (!rho.is_zero()) lhs = lhs - G1(*pp.hiding_base) * rho;
  return lhs == proof.witness.point * (*pp.trapdoor - zeta);
}

}  // namespace streamzk
