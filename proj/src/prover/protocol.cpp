#include "streamzk/protocol.hpp"

#include <map>
#include <mutex>
#include <tuple>

#include <json.hpp>

#include "streamzk/error.hpp"
#include "streamzk/hash.hpp"

namespace streamzk {

namespace {

const char* basis_name(Basis b) { return b == Basis::kCoefficient ? "coefficient" : "evaluation"; }

std::optional<Basis> parse_basis(const std::string& s) {
  if (s == "coefficient") return Basis::kCoefficient;
  if (s == "evaluation") return Basis::kEvaluation;
  return std::nullopt;
}

class Writer {
 public:
  void u8(uint8_t v) { out.push_back(v); }
  void u16(uint16_t v) {
    u8(static_cast<uint8_t>(v));
    u8(static_cast<uint8_t>(v >> 8));
  }
  void u64(uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<uint8_t>(v >> (8 * i)));
  }
  void str(const std::string& s) {
    if (s.size() > 255) fail(Errc::kInvalidArgument, "string too long for the proof header");
    u8(static_cast<uint8_t>(s.size()));
    out.insert(out.end(), s.begin(), s.end());
  }
  void bytes(std::span<const uint8_t> b) { out.insert(out.end(), b.begin(), b.end()); }
  void com(const Commitment& c) { bytes(c.to_bytes()); }
  void fr(const Fr& x) { bytes(x.to_bytes()); }

  std::vector<uint8_t> out;
};

class Reader {
 public:
  explicit Reader(std::span<const uint8_t> in) : in_(in) {}
  std::span<const uint8_t> take(size_t n) {
    if (in_.size() - pos_ < n) fail(Errc::kMalformed, "proof truncated");
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  uint8_t u8() { return take(1)[0]; }
  uint16_t u16() {
    auto b = take(2);
    return static_cast<uint16_t>(b[0] | (b[1] << 8));
  }
  uint64_t u64() {
    auto b = take(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= uint64_t{b[i]} << (8 * i);
    return v;
  }
  std::string str() {
    const size_t n = u8();
    auto b = take(n);
    return std::string(b.begin(), b.end());
  }
  Commitment com() {
    auto c = Commitment::from_bytes(take(32));
    if (!c) fail(Errc::kMalformed, "invalid group element");
    return *c;
  }
  Fr fr() {
    auto x = Fr::from_bytes(take(32));
    if (!x) fail(Errc::kMalformed, "non-canonical field element");
    return *x;
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  std::span<const uint8_t> in_;
  size_t pos_ = 0;
};

uint8_t flag(Reader& r) {
  const uint8_t v = r.u8();
  if (v > 1) fail(Errc::kMalformed, "bad flag byte");
  return v;
}

}  // namespace

std::string statement_to_json(const Statement& st) {
  nlohmann::ordered_json j;
  j["air"] = st.config.air_id;
  j["trace_length"] = st.config.trace_length;
  j["coset"] = st.config.coset;
  j["quotient_basis"] = basis_name(st.config.quotient_basis);
  j["mode"] = mode_name(st.config.mode);
  j["srs_seed"] = st.config.srs_seed;
  j["publics"] = nlohmann::json::array();
  for (const Fr& x : st.publics) j["publics"].push_back(x.to_decimal());
  return j.dump(2);
}

Statement statement_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    Statement st;
    st.config.air_id = j.at("air").get<std::string>();
    st.config.trace_length = j.at("trace_length").get<uint64_t>();
    st.config.coset = j.at("coset").get<bool>();
    const auto basis = parse_basis(j.at("quotient_basis").get<std::string>());
    const auto mode = parse_mode(j.at("mode").get<std::string>());
    if (!basis || !mode) fail(Errc::kMalformed, "unknown basis or mode");
    st.config.quotient_basis = *basis;
    st.config.mode = *mode;
    st.config.srs_seed = j.at("srs_seed").get<std::string>();
    for (const auto& x : j.at("publics")) {
      const auto text = x.get<std::string>();
      const bool digits = !text.empty() && text.find_first_not_of("0123456789") == std::string::npos;
      const Fr v = digits ? Fr::from_decimal(text) : Fr::zero();
      // Round trip rejects values at or above the modulus and leading zeros.
      if (!digits || v.to_decimal() != text) fail(Errc::kMalformed, "bad public value '" + text + "'");
      st.publics.push_back(v);
    }
    return st;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::kMalformed, std::string("statement: ") + e.what());
  }
}

size_t ProtocolLayout::eval_index(EvalKey key) const {
  for (size_t i = 0; i < evals.size(); ++i) {
    if (evals[i] == key) return i;
  }
  fail(Errc::kInvalidArgument, "no such evaluation claim");
}

SetupOptions ProtocolLayout::setup_options() const {
  SetupOptions o;
  o.max_len = std::max(q_len, N);
  o.domain_size = N;
  o.coset = config.coset;
  o.mode = config.mode;
  o.seed = config.srs_seed;
  o.aux_domain_size = q_domain ? q_domain->size : 0;
  return o;
}

ProtocolLayout make_layout(const ProtocolConfig& config) {
  ProtocolLayout l;
  l.config = config;
  l.air = air_by_name(config.air_id);
  if (l.air.k > kMaxRegisters) fail(Errc::kUnsupportedSize, "too many registers");
  l.T = config.trace_length;
  if (l.T < l.air.min_trace_length) fail(Errc::kUnsupportedSize, "trace too short");
  l.N = next_pow2(l.T);
  l.domain = make_domain(l.N, config.coset);
  l.perm = l.air.has_permutation();
  l.lookup = l.air.has_lookup();
  l.shifts = permutation_shifts(l.air.k, l.domain);
  l.d = static_cast<unsigned>(next_pow2(l.air.max_constraint_degree()));
  l.q_len = (l.d - 1) * l.N;
  // Needs a primitive (d N)-th root for the quotient cosets.
  const Fr eta = field::root_of_unity(log2_exact(l.d * l.N));
  const Fr zeta_d = eta.pow(l.N);
  for (uint64_t g = 2;; ++g) {
    const Fr gn = Fr::from_u64(g).pow(l.N);
    bool ok = true;
    Fr cs = gn;
    for (unsigned s = 0; s < l.d && ok; ++s) {
      ok = cs != l.domain.vanishing_constant;
      cs *= zeta_d;
    }
    if (ok) {
      l.quotient_coset = Fr::from_u64(g);
      break;
    }
  }
  if (config.quotient_basis == Basis::kEvaluation) l.q_domain = make_domain(next_pow2(l.q_len), false);

  const size_t k = l.air.k;
  auto add = [&](uint8_t p, EvalPoint at) {
    l.evals.push_back({p, at});
    (at == EvalPoint::kZeta ? l.open_zeta : l.open_zeta_omega).push_back(p);
  };
  add(poly::kSelector, EvalPoint::kZeta);
  if (l.perm) {
    for (size_t c = 0; c < k; ++c) add(static_cast<uint8_t>(poly::kSigma + c), EvalPoint::kZeta);
  }
  for (size_t c = 0; c < k; ++c) add(static_cast<uint8_t>(poly::kWire + c), EvalPoint::kZeta);
  if (l.perm) add(poly::kZ, EvalPoint::kZeta);
  if (l.lookup) add(poly::kZLookup, EvalPoint::kZeta);
  add(poly::kQuotient, EvalPoint::kZeta);
  for (size_t c = 0; c < k; ++c) add(static_cast<uint8_t>(poly::kWire + c), EvalPoint::kZetaOmega);
  if (l.perm) add(poly::kZ, EvalPoint::kZetaOmega);
  if (l.lookup) add(poly::kZLookup, EvalPoint::kZetaOmega);
  return l;
}

std::vector<uint8_t> header_bytes(const ProofHeader& h) {
  Writer w;
  w.bytes(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>("SZKP"), 4));
  w.u8(kProofVersion);
  w.str(h.config.air_id);
  w.u64(h.config.trace_length);
  w.u64(h.N);
  w.u8(h.config.coset ? 1 : 0);
  w.u8(static_cast<uint8_t>(h.config.quotient_basis));
  w.u8(static_cast<uint8_t>(h.config.mode));
  w.str(h.config.srs_seed);
  return w.out;
}

std::vector<uint8_t> Proof::serialize() const {
  Writer w;
  w.out = header_bytes(header);
  w.u8(perm_retries);
  w.u8(static_cast<uint8_t>(wire_coms.size()));
  for (const auto& c : wire_coms) w.com(c);
  if (z_com) w.com(*z_com);
  if (zl_com) w.com(*zl_com);
  w.com(q_com);
  w.u16(static_cast<uint16_t>(evals.size()));
  for (const Fr& x : evals) w.fr(x);
  w.com(open_zeta.witness);
  w.com(open_zeta_omega.witness);
  if (rho_zeta) w.fr(*rho_zeta);
  if (rho_zeta_omega) w.fr(*rho_zeta_omega);
  return w.out;
}

Proof parse_proof(std::span<const uint8_t> bytes) {
  Reader r(bytes);
  auto magic = r.take(4);
  if (std::string(magic.begin(), magic.end()) != "SZKP") fail(Errc::kMalformed, "bad magic");
  if (r.u8() != kProofVersion) fail(Errc::kMalformed, "unsupported version");
  Proof p;
  auto& cfg = p.header.config;
  cfg.air_id = r.str();
  cfg.trace_length = r.u64();
  p.header.N = r.u64();
  cfg.coset = flag(r) == 1;
  cfg.quotient_basis = static_cast<Basis>(flag(r));
  const uint8_t mode = r.u8();
  if (mode > 2) fail(Errc::kMalformed, "bad mode byte");
  cfg.mode = static_cast<PcsMode>(mode);
  cfg.srs_seed = r.str();
  ProtocolLayout layout;
  try {
    if (cfg.trace_length > (uint64_t{1} << 28)) fail(Errc::kUnsupportedSize, "trace too long");
    layout = make_layout(cfg);
  } catch (const Error& e) {
    fail(Errc::kMalformed, std::string("header: ") + e.what());
  }
  if (layout.N != p.header.N) fail(Errc::kMalformed, "domain size does not match trace length");
  p.perm_retries = r.u8();
  if (p.perm_retries > kMaxPermRetries) fail(Errc::kMalformed, "too many permutation retries");
  if (r.u8() != layout.air.k) fail(Errc::kMalformed, "wrong wire count");
  for (size_t m = 0; m < layout.air.k; ++m) p.wire_coms.push_back(r.com());
  if (layout.perm) p.z_com = r.com();
  if (layout.lookup) p.zl_com = r.com();
  p.q_com = r.com();
  if (r.u16() != layout.evals.size()) fail(Errc::kMalformed, "wrong evaluation count");
  for (size_t i = 0; i < layout.evals.size(); ++i) p.evals.push_back(r.fr());
  p.open_zeta.witness = r.com();
  p.open_zeta_omega.witness = r.com();
  if (cfg.mode == PcsMode::kHiding) {
    p.rho_zeta = r.fr();
    p.rho_zeta_omega = r.fr();
  }
  if (!r.done()) fail(Errc::kMalformed, "trailing bytes");
  return p;
}

Fr selector_value(const ProtocolLayout& layout, uint64_t row) {
  return row + 1 < layout.T ? Fr::one() : Fr::zero();
}

Fr sigma_value(const ProtocolLayout& layout, size_t reg, uint64_t row) {
  return sigma_label(layout.air, layout.T, layout.domain, layout.shifts, reg, row);
}

FixedCommitments fixed_commitments(const ProtocolLayout& layout, const PcsParams& pp, size_t b_blk) {
  using Key = std::tuple<std::string, uint64_t, bool, const PcsParams*>;
  static std::mutex mu;
  static std::map<Key, FixedCommitments> cache;
  const Key key{layout.air.id, layout.T, layout.config.coset, &pp};
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  FixedCommitments out;
  out.sigma.resize(layout.perm ? layout.air.k : 0);
  b_blk = std::max<size_t>(1, b_blk);
  Metered<Fr> buf(b_blk);
  for (uint64_t start = 0; start < layout.N; start += b_blk) {
    const size_t n = static_cast<size_t>(std::min<uint64_t>(b_blk, layout.N - start));
    for (size_t i = 0; i < n; ++i) buf[i] = selector_value(layout, start + i);
    out.selector += commit(pp, Basis::kEvaluation, buf.span().first(n), start);
    for (size_t c = 0; c < out.sigma.size(); ++c) {
      for (size_t i = 0; i < n; ++i) buf[i] = sigma_value(layout, c, start + i);
      out.sigma[c] += commit(pp, Basis::kEvaluation, buf.span().first(n), start);
    }
  }
  std::lock_guard lock(mu);
  cache[key] = out;
  return out;
}

Fr combine_constraints(const ProtocolLayout& layout, const Challenges& ch, std::span<const Fr> publics,
                       const PointValues& v) {
  const size_t k = layout.air.k;
  const std::span<const Fr> cur(v.w.data(), k), next(v.w_next.data(), k);
  Fr acc;
  Fr a = Fr::one();
  auto add = [&](const Fr& term) {
    acc += a * term;
    a *= ch.alpha;
  };
  for (const auto& c : layout.air.transitions) {
    const Fr t = c.eval(cur, next);
    add(c.uses_next ? v.selector * t : t);
  }
  for (size_t j = 0; j < layout.air.public_cells.size(); ++j) {
    const auto& pc = layout.air.public_cells[j];
    add((pc.row == PublicRow::kFirst ? v.l_first : v.l_last) * (v.w[pc.reg] - publics[j]));
  }
  if (layout.perm) {
    add(v.l_first * (v.z - Fr::one()));
    Fr num = v.z_next, den = v.z;
    for (size_t c = 0; c < k; ++c) {
      const Fr wg = v.w[c] + ch.gamma;
      num *= wg + ch.beta * v.sigma[c];
      den *= wg + ch.beta * layout.shifts[c] * v.x;
    }
    add(num - den);
  }
  if (layout.lookup) {
    const auto& lk = *layout.air.lookup;
    add(v.l_first * (v.zl - Fr::one()));
    add(v.zl_next * (ch.gamma_lookup + v.w[lk.table_reg]) - v.zl * (ch.gamma_lookup + v.w[lk.input_reg]));
  }
  return acc;
}

FsSchedule::FsSchedule(const ProtocolLayout& layout, const Statement& st, const FixedCommitments& fixed)
    : layout_(layout) {
  tr_.absorb("header", header_bytes(ProofHeader{layout.config, layout.N}));
  for (const Fr& x : st.publics) tr_.absorb_field("public", x);
  tr_.absorb("fixed/selector", fixed.selector.to_bytes());
  for (const auto& c : fixed.sigma) tr_.absorb("fixed/sigma", c.to_bytes());
}

void FsSchedule::absorb_wires(std::span<const Commitment> coms) {
  for (const auto& c : coms) tr_.absorb("wire", c.to_bytes());
}

void FsSchedule::draw_perm(unsigned retry, Challenges& ch) {
  if (retry > 0) tr_.absorb_u64("perm-retry", retry);
  ch.beta = tr_.challenge("beta");
  ch.gamma = tr_.challenge("gamma");
  if (layout_.lookup) ch.gamma_lookup = tr_.challenge("gamma-lookup");
}

void FsSchedule::absorb_accumulators(const std::optional<Commitment>& z, const std::optional<Commitment>& zl,
                                     Challenges& ch) {
  if (z) tr_.absorb("z", z->to_bytes());
  if (zl) tr_.absorb("z-lookup", zl->to_bytes());
  ch.alpha = tr_.challenge("alpha");
}

void FsSchedule::absorb_quotient(const Commitment& q, Challenges& ch) {
  tr_.absorb("quotient", q.to_bytes());
  for (;;) {
    ch.zeta = tr_.challenge("zeta");
    const Fr shifted = ch.zeta * layout_.domain.omega;
    bool bad = layout_.domain.contains(ch.zeta) || layout_.domain.contains(shifted);
    if (layout_.q_domain) bad = bad || layout_.q_domain->contains(ch.zeta);
    if (!bad) return;
  }
}

Fr FsSchedule::absorb_evals(std::span<const Fr> evals) {
  for (const Fr& x : evals) tr_.absorb_field("eval", x);
  return tr_.challenge("nu");
}

void FsSchedule::absorb_openings(const Proof& proof) {
  tr_.absorb("open-zeta", proof.open_zeta.witness.to_bytes());
  tr_.absorb("open-zeta-omega", proof.open_zeta_omega.witness.to_bytes());
  if (proof.rho_zeta) tr_.absorb_field("rho-zeta", *proof.rho_zeta);
  if (proof.rho_zeta_omega) tr_.absorb_field("rho-zeta-omega", *proof.rho_zeta_omega);
}

Blinders draw_blinders(const ProtocolLayout& layout, uint64_t prover_seed) {
  Blinders b;
  b.wires.assign(layout.air.k, Fr::zero());
  if (layout.config.mode != PcsMode::kHiding) return b;
  HashDrbg drbg("streamzk/blinders", prover_seed);
  for (auto& r : b.wires) r = drbg.next_field();
  if (layout.perm) b.z = drbg.next_field();
  if (layout.lookup) b.zl = drbg.next_field();
  b.q = drbg.next_field();
  return b;
}

Fr batched_blinder(const ProtocolLayout& layout, const std::vector<uint8_t>& polys, const Blinders& b,
                   const Fr& nu) {
  Fr rho;
  Fr p = Fr::one();
  for (uint8_t id : polys) {
    Fr r;
    if (id >= poly::kWire && id < poly::kWire + layout.air.k) r = b.wires[id - poly::kWire];
    if (id == poly::kZ) r = b.z;
    if (id == poly::kZLookup) r = b.zl;
    if (id == poly::kQuotient) r = b.q;
    rho += p * r;
    p *= nu;
  }
  return rho;
}

}  // namespace streamzk
