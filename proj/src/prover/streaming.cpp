#include <chrono>
#include <memory>

#include "streamzk/barycentric.hpp"
#include "streamzk/blocked_ntt.hpp"
#include "streamzk/error.hpp"
#include "streamzk/hash.hpp"
#include "streamzk/prover.hpp"
#include "streamzk/quotient.hpp"

namespace streamzk {

namespace {

// Hands out random blinder shares as blocks are committed; the remainder
// share is added once at the end so the shares sum to the base blinder.
class ShareStream {
 public:
  ShareStream(const Fr& base, bool hiding, HashDrbg& rng) : rest_(base), hiding_(hiding), rng_(rng) {}
  Fr next() {
    if (!hiding_) return Fr::zero();
    const Fr s = rng_.next_field();
    rest_ -= s;
    return s;
  }
  Fr remainder() const { return hiding_ ? rest_ : Fr::zero(); }

 private:
  Fr rest_;
  bool hiding_;
  HashDrbg& rng_;
};

class ReverseFileSource : public ElementSource {
 public:
  ReverseFileSource(const ScratchFile& file, uint64_t count) : file_(file), pos_(count) {}
  size_t read(std::span<Fr> out) override {
    const size_t n = static_cast<size_t>(std::min<uint64_t>(out.size(), pos_));
    if (n == 0) return 0;
    file_.read(pos_ - n, out.first(n));
    std::reverse(out.begin(), out.begin() + static_cast<ptrdiff_t>(n));
    pos_ -= n;
    return n;
  }

 private:
  const ScratchFile& file_;
  uint64_t pos_;
};

// Columns entering R, in a fixed order: wires, Z, Z_L, selector, sigma.
struct ColumnSet {
  const ProtocolLayout& layout;
  std::vector<ScratchFile>& wire_files;
  ScratchFile& z_file;
  ScratchFile& zl_file;
  size_t k;
  size_t z_at, zl_at, sel_at, sigma_at, count;

  ColumnSet(const ProtocolLayout& l, std::vector<ScratchFile>& w, ScratchFile& z, ScratchFile& zl)
      : layout(l), wire_files(w), z_file(z), zl_file(zl), k(l.air.k) {
    z_at = k;
    zl_at = z_at + (l.perm ? 1 : 0);
    sel_at = zl_at + (l.lookup ? 1 : 0);
    sigma_at = sel_at + 1;
    count = sigma_at + (l.perm ? k : 0);
  }

  size_t index_of(uint8_t id) const {
    if (id == poly::kSelector) return sel_at;
    if (id >= poly::kSigma && id < poly::kSigma + k) return sigma_at + id - poly::kSigma;
    if (id >= poly::kWire && id < poly::kWire + k) return id - poly::kWire;
    if (id == poly::kZ) return z_at;
    if (id == poly::kZLookup) return zl_at;
    fail(Errc::kInvalidArgument, "not a trace-domain column");
  }

  // Values of column col on rows [start, start + out.size()).
  void read(size_t col, uint64_t start, std::span<Fr> out) const {
    if (col < k) return wire_files[col].read(start, out);
    if (layout.perm && col == z_at) return z_file.read(start, out);
    if (layout.lookup && col == zl_at) return zl_file.read(start, out);
    for (size_t i = 0; i < out.size(); ++i) {
      out[i] = col == sel_at ? selector_value(layout, start + i) : sigma_value(layout, col - sigma_at, start + i);
    }
  }

  std::unique_ptr<ElementSource> source(size_t col) const {
    if (col < k) return std::make_unique<FileSource>(wire_files[col], 0, layout.N);
    if (layout.perm && col == z_at) return std::make_unique<FileSource>(z_file, 0, layout.N);
    if (layout.lookup && col == zl_at) return std::make_unique<FileSource>(zl_file, 0, layout.N);
    const ProtocolLayout* l = &layout;
    if (col == sel_at) return std::make_unique<GeneratorSource>(l->N, [l](uint64_t i) { return selector_value(*l, i); });
    const size_t reg = col - sigma_at;
    return std::make_unique<GeneratorSource>(l->N, [l, reg](uint64_t i) { return sigma_value(*l, reg, i); });
  }
};

}  // namespace

NodeOutput commit_tree_step(const PcsParams& pp, const NodeId& v, const SliceMemo& memo,
                            const NodeOutput* same_register_child, std::span<const NodeOutput* const> cross_children,
                            const Fr& blinder_share) {
  if (v.t == 0 || v.m == 0 || v.m > memo.block.k || memo.block.t != v.t) fail(Errc::kInvalidNode, "tree step node");
  auto check = [&](const NodeOutput* child) {
    if (child != nullptr && child->aux.boundary != memo.boundary_in) {
      fail(Errc::kBoundaryMismatch, "child boundary disagrees with block " + std::to_string(v.t));
    }
  };
  check(same_register_child);
  for (const NodeOutput* c : cross_children) check(c);

  NodeOutput out;
  const Commitment block_com =
      commit(pp, Basis::kEvaluation, memo.block.column(v.m - 1), memo.block.start_row, blinder_share);
  out.coordinate = same_register_child != nullptr ? same_register_child->coordinate + block_com : block_com;
  out.aux.boundary = memo.block.boundary_out;
  if (same_register_child != nullptr) {
    out.aux.z = same_register_child->aux.z;
    out.aux.z_lookup = same_register_child->aux.z_lookup;
  }
  return out;
}

ProverResult prove_streaming(const ProtocolConfig& config, const ProverOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  auto& meter = WorkspaceMeter::global();
  meter.reset_passes();
  PeakScope peak;

  const ProtocolLayout layout = make_layout(config);
  const auto pp = setup(layout.setup_options());
  const AirSpec& air = layout.air;
  const size_t k = air.k;
  const uint64_t n = layout.N, T = layout.T;
  const Domain& h = layout.domain;
  const BlockingParams bp = make_blocking(T, options.b_blk);
  const size_t b = static_cast<size_t>(bp.b_blk);
  const bool hiding = config.mode == PcsMode::kHiding;

  const Blinders blind = draw_blinders(layout, options.prover_seed);
  HashDrbg share_rng("streamzk/blinder-shares", options.prover_seed);
  const FixedCommitments fixed = fixed_commitments(layout, *pp, b);

  WitnessStream ws(air, bp, options.inputs);
  if (options.tamper) ws.set_tamper(options.tamper->reg, options.tamper->row, options.tamper->delta);

  ProverResult res;
  Proof& proof = res.proof;
  proof.header = ProofHeader{config, n};

  // Phase B: wire commitments through the layered commitment tree.
  BoundaryVector first_row, last_row;
  {
    std::vector<BlinderSplitter<HashDrbg>> splitters;
    for (size_t m = 0; m < k; ++m) splitters.emplace_back(blind.wires[m], bp.slices, share_rng);
    std::vector<std::optional<NodeOutput>> prev(k), cur(k);
    std::optional<SliceMemo> memo;
    size_t live = 0;
    ws.begin_pass();
    LayeredSchedule schedule(air, bp);
    while (auto v = schedule.next()) {
      if (v->m == 1) {
        // Drop the previous block before producing the next one so only one
        // slice of trace values is ever live.
        BoundaryVector boundary_in = memo ? memo->block.boundary_out : air.initial_row(options.inputs, T);
        memo.reset();
        memo.emplace();
        memo->boundary_in = std::move(boundary_in);
        if (!ws.next(memo->block)) fail(Errc::kLengthMismatch, "witness stream ended early");
        const BlockOutput& blk = memo->block;
        if (blk.t == 1) {
          first_row.resize(k);
          for (size_t m = 0; m < k; ++m) first_row[m] = blk.value(m, 0);
        }
        if (T - 1 >= blk.start_row && T - 1 < blk.start_row + blk.rows) {
          last_row.resize(k);
          for (size_t m = 0; m < k; ++m) last_row[m] = blk.value(m, T - 1 - blk.start_row);
        }
      }
      const size_t m = v->m - 1;
      const NodeOutput* same = prev[m] ? &*prev[m] : nullptr;
      std::vector<const NodeOutput*> cross;
      for (size_t j : air.reads[m]) {
        if (prev[j]) cross.push_back(&*prev[j]);
      }
      const Fr share = hiding ? splitters[m].next() : Fr::zero();
      cur[m] = commit_tree_step(*pp, *v, *memo, same, cross, share);
      ++live;
      res.stats.max_live_aux = std::max(res.stats.max_live_aux, live);
      if (v->m == k) {
        // Retention contract: layer t-1 is dropped once layer t is complete.
        for (auto& p : prev) {
          if (p) --live;
          p.reset();
        }
        std::swap(prev, cur);
      }
    }
    for (size_t m = 0; m < k; ++m) proof.wire_coms.push_back(prev[m]->coordinate);
  }

  res.statement.config = config;
  for (const auto& pc : air.public_cells) {
    res.statement.publics.push_back(pc.row == PublicRow::kFirst ? first_row[pc.reg] : last_row[pc.reg]);
  }
  FsSchedule fs(layout, res.statement, fixed);
  fs.absorb_wires(proof.wire_coms);

  // Phase C: accumulator columns, committed blockwise and spilled to disk.
  Challenges& ch = res.challenges;
  ScratchFile z_file, zl_file;
  for (unsigned retry = 0;; ++retry) {
    if (retry > kMaxPermRetries) fail(Errc::kZeroDenominator, "permutation challenges keep failing");
    fs.draw_perm(retry, ch);
    if (retry < options.force_perm_retries) continue;
    if (!layout.perm && !layout.lookup) {
      proof.perm_retries = static_cast<uint8_t>(retry);
      break;
    }
    try {
      ShareStream z_shares(blind.z, hiding, share_rng), zl_shares(blind.zl, hiding, share_rng);
      Commitment z_com, zl_com;
      Fr z = Fr::one(), zl = Fr::one();
      ws.begin_pass();
      BlockOutput blk;
      while (ws.next(blk)) {
        if (layout.perm) {
          attach_local_fields(air, T, h, layout.shifts, blk);
          const AccumulatorColumn col = z_column_block(blk, ch, z);
          z_file.write(blk.start_row, col.z_vals.span());
          z_com += commit(*pp, Basis::kEvaluation, col.z_vals.span(), blk.start_row, z_shares.next());
          z = col.z_end;
        }
        if (layout.lookup) {
          const AccumulatorColumn col = lookup_block_factor(blk, *air.lookup, ch, zl);
          zl_file.write(blk.start_row, col.z_vals.span());
          zl_com += commit(*pp, Basis::kEvaluation, col.z_vals.span(), blk.start_row, zl_shares.next());
          zl = col.z_end;
        }
      }
      if (layout.perm) proof.z_com = z_com + blinding_term(*pp, z_shares.remainder());
      if (layout.lookup) proof.zl_com = zl_com + blinding_term(*pp, zl_shares.remainder());
      proof.perm_retries = static_cast<uint8_t>(retry);
      break;
    } catch (const Error& e) {
      if (e.code() != Errc::kZeroDenominator) throw;
    }
  }
  fs.absorb_accumulators(proof.z_com, proof.zl_com, ch);

  // Phase D: spill the wires, move every column to coefficients, evaluate R
  // coset by coset and divide by Z_H.
  std::vector<ScratchFile> wire_files(k);
  ws.begin_pass();
  {
    BlockOutput blk;
    while (ws.next(blk)) {
      for (size_t m = 0; m < k; ++m) wire_files[m].write(blk.start_row, blk.column(m));
    }
  }
  const ColumnSet cols(layout, wire_files, z_file, zl_file);
  std::vector<ScratchFile> coeff_files(cols.count);
  for (size_t c = 0; c < cols.count; ++c) {
    auto src = cols.source(c);
    intt_blocked(h, *src, b, file_sink(coeff_files[c]));
  }
  const Fr h_first = h.element(0), h_last = h.element(T - 1);
  const Fr nc_inv = (Fr::from_u64(n) * h.vanishing_constant).inverse();
  const std::span<const Fr> publics = res.statement.publics;
  const CosetResidualFn residual = [&](unsigned, const Domain& coset, const BlockSink& sink) {
    std::vector<ScratchFile> ext(cols.count);
    for (size_t c = 0; c < cols.count; ++c) {
      FileSource src(coeff_files[c], 0, n);
      ntt_blocked(coset, src, b, file_sink(ext[c]));
    }
    const Fr zh = coset.vanishing_constant - h.vanishing_constant;
    Metered<Fr> vals(cols.count * b), nexts(cols.count), inv_first(b), inv_last(b), out(b);
    for (uint64_t i0 = 0; i0 < n; i0 += b) {
      const size_t len = static_cast<size_t>(std::min<uint64_t>(b, n - i0));
      for (size_t c = 0; c < cols.count; ++c) {
        ext[c].read(i0, vals.span().subspan(c * b, len));
        nexts[c] = ext[c].read_one((i0 + len) % n);
      }
      Fr x = coset.element(i0);
      for (size_t i = 0; i < len; ++i) {
        inv_first[i] = x - h_first;
        inv_last[i] = x - h_last;
        x *= coset.omega;
      }
      field::batch_invert(inv_first.span().first(len));
      field::batch_invert(inv_last.span().first(len));
      x = coset.element(i0);
      for (size_t i = 0; i < len; ++i) {
        auto at = [&](size_t c) { return vals[c * b + i]; };
        auto after = [&](size_t c) { return i + 1 < len ? vals[c * b + i + 1] : nexts[c]; };
        PointValues v;
        v.x = x;
        for (size_t m = 0; m < k; ++m) {
          v.w[m] = at(m);
          v.w_next[m] = after(m);
          if (layout.perm) v.sigma[m] = at(cols.sigma_at + m);
        }
        v.selector = at(cols.sel_at);
        if (layout.perm) {
          v.z = at(cols.z_at);
          v.z_next = after(cols.z_at);
        }
        if (layout.lookup) {
          v.zl = at(cols.zl_at);
          v.zl_next = after(cols.zl_at);
        }
        v.l_first = h_first * zh * nc_inv * inv_first[i];
        v.l_last = h_last * zh * nc_inv * inv_last[i];
        out[i] = combine_constraints(layout, ch, publics, v);
        x *= coset.omega;
      }
      sink(i0, out.span().first(len));
    }
  };
  ScratchFile q_file;
  try {
    stream_quotient(h, layout.d, layout.quotient_coset, b, residual, q_file, options.check_witness);
  } catch (const Error& e) {
    if (e.code() == Errc::kRemainderNonzero) fail(Errc::kInvalidWitness, e.what());
    throw;
  }
  coeff_files.clear();

  ScratchFile q_evals;
  {
    ShareStream q_shares(blind.q, hiding, share_rng);
    Commitment q_com;
    if (config.quotient_basis == Basis::kCoefficient) {
      Metered<Fr> buf(b);
      for (uint64_t i0 = 0; i0 < layout.q_len; i0 += b) {
        const size_t len = static_cast<size_t>(std::min<uint64_t>(b, layout.q_len - i0));
        q_file.read(i0, buf.span().first(len));
        q_com += commit(*pp, Basis::kCoefficient, buf.span().first(len), i0, q_shares.next());
      }
    } else {
      const Domain& qd = *layout.q_domain;
      FileSource src(q_file, 0, layout.q_len);
      ntt_blocked(qd, src, b, [&](uint64_t start, std::span<const Fr> blk) {
        q_evals.write(start, blk);
        q_com += commit_lagrange(*pp, qd, blk, start) + blinding_term(*pp, q_shares.next());
      });
    }
    proof.q_com = q_com + blinding_term(*pp, q_shares.remainder());
  }
  fs.absorb_quotient(proof.q_com, ch);
  const Fr zw = ch.zeta * h.omega;

  // Phase E1: claims from the spilled columns (barycentric) and Q (Horner).
  {
    const BarycentricWeights wz(h, ch.zeta), wzw(h, zw);
    Metered<Fr> weights_z(b), weights_zw(b), vals(cols.count * b);
    std::vector<BarycentricSum> sums(layout.evals.size());
    for (uint64_t i0 = 0; i0 < n; i0 += b) {
      const size_t len = static_cast<size_t>(std::min<uint64_t>(b, n - i0));
      wz.fill(i0, weights_z.span().first(len));
      wzw.fill(i0, weights_zw.span().first(len));
      for (size_t c = 0; c < cols.count; ++c) cols.read(c, i0, vals.span().subspan(c * b, len));
      for (size_t e = 0; e < layout.evals.size(); ++e) {
        const EvalKey key = layout.evals[e];
        if (key.poly == poly::kQuotient) continue;
        const auto w = key.point == EvalPoint::kZeta ? weights_z.span() : weights_zw.span();
        sums[e].add(w.first(len), vals.span().subspan(cols.index_of(key.poly) * b, len));
      }
    }
    Fr q_at_zeta;
    {
      ReverseFileSource src(q_file, layout.q_len);
      Metered<Fr> buf(b);
      while (const size_t got = src.read(buf.span())) {
        for (size_t i = 0; i < got; ++i) q_at_zeta = q_at_zeta * ch.zeta + buf[i];
      }
    }
    for (size_t e = 0; e < layout.evals.size(); ++e) {
      proof.evals.push_back(layout.evals[e].poly == poly::kQuotient ? q_at_zeta : sums[e].value());
    }
  }
  const Fr nu = fs.absorb_evals(proof.evals);

  // Phase E2: batched opening witnesses. The trace-domain part is streamed
  // in evaluation form with the wires re-read from the witness; the quotient
  // part reuses its spill file.
  {
    auto open_lagrange_part = [&](const std::vector<uint8_t>& polys, EvalPoint at, Fr& y, std::vector<Fr>& scale) {
      Fr p = Fr::one();
      y = Fr::zero();
      scale.assign(polys.size(), Fr::zero());
      for (size_t j = 0; j < polys.size(); ++j) {
        if (polys[j] != poly::kQuotient) {
          scale[j] = p;
          y += p * proof.evals[layout.eval_index({polys[j], at})];
        }
        p *= nu;
      }
    };
    Fr y_z, y_zw;
    std::vector<Fr> s_z, s_zw;
    open_lagrange_part(layout.open_zeta, EvalPoint::kZeta, y_z, s_z);
    open_lagrange_part(layout.open_zeta_omega, EvalPoint::kZetaOmega, y_zw, s_zw);

    Commitment w_z, w_zw;
    Metered<Fr> vals(cols.count * b), f_z(b), f_zw(b), inv_z(b), inv_zw(b);
    ws.begin_pass();
    BlockOutput blk;
    while (ws.next(blk)) {
      const uint64_t i0 = blk.start_row;
      const size_t len = blk.rows;
      for (size_t c = 0; c < cols.count; ++c) {
        if (c < k) {
          std::copy(blk.column(c).begin(), blk.column(c).end(), vals.begin() + static_cast<ptrdiff_t>(c * b));
        } else {
          cols.read(c, i0, vals.span().subspan(c * b, len));
        }
      }
      Fr x = h.element(i0);
      for (size_t i = 0; i < len; ++i) {
        inv_z[i] = x - ch.zeta;
        inv_zw[i] = x - zw;
        x *= h.omega;
      }
      field::batch_invert(inv_z.span().first(len));
      field::batch_invert(inv_zw.span().first(len));
      auto combine = [&](const std::vector<uint8_t>& polys, const std::vector<Fr>& scale, const Fr& y,
                         Metered<Fr>& f, const Metered<Fr>& inv) {
        for (size_t i = 0; i < len; ++i) f[i] = -y;
        for (size_t j = 0; j < polys.size(); ++j) {
          if (polys[j] == poly::kQuotient) continue;
          const size_t c = cols.index_of(polys[j]);
          for (size_t i = 0; i < len; ++i) f[i] += scale[j] * vals[c * b + i];
        }
        for (size_t i = 0; i < len; ++i) f[i] *= inv[i];
        return commit(*pp, Basis::kEvaluation, f.span().first(len), i0);
      };
      w_z += combine(layout.open_zeta, s_z, y_z, f_z, inv_z);
      w_zw += combine(layout.open_zeta_omega, s_zw, y_zw, f_zw, inv_zw);
    }
    // Quotient part of the zeta batch.
    Fr p = Fr::one();
    for (uint8_t id : layout.open_zeta) {
      if (id == poly::kQuotient) {
        const Fr y_q = proof.evals[layout.eval_index({poly::kQuotient, EvalPoint::kZeta})];
        OpeningProof oq;
        if (config.quotient_basis == Basis::kCoefficient) {
          ReverseFileSource src(q_file, layout.q_len);
          oq = open_stream(*pp, Basis::kCoefficient, src, layout.q_len, ch.zeta, y_q, b);
        } else {
          FileSource src(q_evals, 0, layout.q_domain->size);
          oq = open_stream_lagrange(*pp, *layout.q_domain, src, ch.zeta, y_q, b);
        }
        w_z += oq.witness * p;
      }
      p *= nu;
    }
    proof.open_zeta.witness = w_z;
    proof.open_zeta_omega.witness = w_zw;
  }
  if (hiding) {
    proof.rho_zeta = batched_blinder(layout, layout.open_zeta, blind, nu);
    proof.rho_zeta_omega = batched_blinder(layout, layout.open_zeta_omega, blind, nu);
  }
  fs.absorb_openings(proof);

  res.transcript = fs.transcript().log();
  res.transcript_digest = fs.transcript().state();
  res.stats.peak_bytes = peak.peak_bytes();
  res.stats.peak_trace_bytes = peak.peak_trace_bytes();
  res.stats.passes = meter.passes();
  res.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return res;
}

}  // namespace streamzk
