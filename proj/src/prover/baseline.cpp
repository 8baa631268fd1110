#include <chrono>

#include "streamzk/error.hpp"
#include "streamzk/prover.hpp"

namespace streamzk {

namespace {

// f(X) -> (f(X) - f(zeta)) / (X - zeta) by synthetic division.
Metered<Fr> divide_linear(std::span<const Fr> f, const Fr& zeta) {
  Metered<Fr> w(f.size() > 1 ? f.size() - 1 : 0);
  Fr acc;
  for (size_t i = f.size(); i-- > 1;) {
    acc = f[i] + zeta * acc;
    w[i - 1] = acc;
  }
  return w;
}

Metered<Fr> coefficients_on(std::span<const Fr> evals, const Domain& d) {
  Metered<Fr> c(evals.size());
  std::copy(evals.begin(), evals.end(), c.begin());
  intt(c.span(), d);
  return c;
}

}  // namespace

Statement make_statement(const ProtocolConfig& config, const WitnessInputs& inputs) {
  const AirSpec air = air_by_name(config.air_id);
  const BlockingParams bp = make_blocking(config.trace_length);
  WitnessStream ws(air, bp, inputs, false);
  ws.begin_pass();
  BoundaryVector first, last;
  BlockOutput blk;
  while (ws.next(blk)) {
    if (blk.t == 1) {
      first.resize(air.k);
      for (size_t m = 0; m < air.k; ++m) first[m] = blk.value(m, 0);
    }
    if (config.trace_length - 1 >= blk.start_row && config.trace_length - 1 < blk.start_row + blk.rows) {
      last.resize(air.k);
      for (size_t m = 0; m < air.k; ++m) last[m] = blk.value(m, config.trace_length - 1 - blk.start_row);
    }
  }
  Statement st{config, {}};
  for (const auto& pc : air.public_cells) st.publics.push_back(pc.row == PublicRow::kFirst ? first[pc.reg] : last[pc.reg]);
  return st;
}

ProverResult prove_baseline(const ProtocolConfig& config, const ProverOptions& options) {
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

  // Full trace, register-major.
  Metered<Fr> trace(k * n, MeterTag::kTrace);
  {
    WitnessStream ws(air, make_blocking(T, n), options.inputs);
    if (options.tamper) ws.set_tamper(options.tamper->reg, options.tamper->row, options.tamper->delta);
    ws.begin_pass();
    BlockOutput blk;
    while (ws.next(blk)) {
      for (size_t m = 0; m < k; ++m) {
        for (size_t i = 0; i < blk.rows; ++i) trace[m * n + blk.start_row + i] = blk.value(m, i);
      }
    }
  }
  const auto wire = [&](size_t m) { return trace.span().subspan(m * n, n); };

  ProverResult res;
  res.statement.config = config;
  for (const auto& pc : air.public_cells) {
    res.statement.publics.push_back(trace[pc.reg * n + (pc.row == PublicRow::kFirst ? 0 : T - 1)]);
  }
  const FixedCommitments fixed = fixed_commitments(layout, *pp);
  const Blinders blind = draw_blinders(layout, options.prover_seed);

  Proof& proof = res.proof;
  proof.header = ProofHeader{config, n};
  for (size_t m = 0; m < k; ++m) proof.wire_coms.push_back(commit(*pp, Basis::kEvaluation, wire(m), 0, blind.wires[m]));

  FsSchedule fs(layout, res.statement, fixed);
  fs.absorb_wires(proof.wire_coms);

  Metered<Fr> sel(n), sigma(layout.perm ? k * n : 0);
  for (uint64_t i = 0; i < n; ++i) sel[i] = selector_value(layout, i);
  for (size_t c = 0; layout.perm && c < k; ++c) {
    for (uint64_t i = 0; i < n; ++i) sigma[c * n + i] = sigma_value(layout, c, i);
  }

  // Accumulator columns, row by row with one inversion per row.
  Challenges& ch = res.challenges;
  Metered<Fr> zcol(layout.perm ? n : 0), zlcol(layout.lookup ? n : 0);
  for (unsigned retry = 0;; ++retry) {
    if (retry > kMaxPermRetries) fail(Errc::kZeroDenominator, "permutation challenges keep failing");
    fs.draw_perm(retry, ch);
    if (retry < options.force_perm_retries) continue;
    try {
      Fr z = Fr::one(), zl = Fr::one();
      for (uint64_t i = 0; i < n; ++i) {
        if (layout.perm) {
          zcol[i] = z;
          Fr num = Fr::one(), den = Fr::one();
          for (size_t c = 0; c < k; ++c) {
            const Fr wg = trace[c * n + i] + ch.gamma;
            num *= wg + ch.beta * layout.shifts[c] * h.element(i);
            den *= wg + ch.beta * sigma[c * n + i];
          }
          if (den.is_zero()) fail(Errc::kZeroDenominator, "permutation");
          z *= num * den.inverse();
        }
        if (layout.lookup) {
          zlcol[i] = zl;
          const auto& lk = *air.lookup;
          const Fr den = ch.gamma_lookup + trace[lk.table_reg * n + i];
          if (den.is_zero()) fail(Errc::kZeroDenominator, "lookup");
          zl *= (ch.gamma_lookup + trace[lk.input_reg * n + i]) * den.inverse();
        }
      }
      proof.perm_retries = static_cast<uint8_t>(retry);
      break;
    } catch (const Error& e) {
      if (e.code() != Errc::kZeroDenominator) throw;
    }
  }
  if (layout.perm) proof.z_com = commit(*pp, Basis::kEvaluation, zcol.span(), 0, blind.z);
  if (layout.lookup) proof.zl_com = commit(*pp, Basis::kEvaluation, zlcol.span(), 0, blind.zl);
  fs.absorb_accumulators(proof.z_com, proof.zl_com, ch);

  // Coefficients of every column: wires, Z, Z_L, selector, sigma.
  std::vector<Metered<Fr>> coeffs;
  for (size_t m = 0; m < k; ++m) coeffs.push_back(coefficients_on(wire(m), h));
  const size_t z_at = coeffs.size();
  if (layout.perm) coeffs.push_back(coefficients_on(zcol.span(), h));
  const size_t zl_at = coeffs.size();
  if (layout.lookup) coeffs.push_back(coefficients_on(zlcol.span(), h));
  const size_t sel_at = coeffs.size();
  coeffs.push_back(coefficients_on(sel.span(), h));
  const size_t sigma_at = coeffs.size();
  for (size_t c = 0; layout.perm && c < k; ++c) coeffs.push_back(coefficients_on(sigma.span().subspan(c * n, n), h));

  // R on the extended coset E = g <eta>, |E| = dN; omega x is d steps ahead.
  const uint64_t dn = uint64_t{layout.d} * n;
  const Domain ext = make_domain_with_offset(dn, layout.quotient_coset);
  std::vector<Metered<Fr>> ext_evals;
  for (const auto& c : coeffs) {
    Metered<Fr> e(dn, Fr::zero());
    std::copy(c.begin(), c.end(), e.begin());
    ntt(e.span(), ext);
    ext_evals.push_back(std::move(e));
  }
  Metered<Fr> inv_first(dn), inv_last(dn), zh(dn);
  const Fr h_first = h.element(0), h_last = h.element(T - 1);
  Fr x = ext.offset;
  for (uint64_t i = 0; i < dn; ++i) {
    inv_first[i] = x - h_first;
    inv_last[i] = x - h_last;
    zh[i] = h.vanishing(x);
    x *= ext.omega;
  }
  field::batch_invert(inv_first.span());
  field::batch_invert(inv_last.span());
  const Fr nc_inv = (Fr::from_u64(n) * h.vanishing_constant).inverse();
  Metered<Fr> qe(dn);
  x = ext.offset;
  for (uint64_t i = 0; i < dn; ++i) {
    const uint64_t nx = (i + layout.d) % dn;
    PointValues v;
    v.x = x;
    for (size_t m = 0; m < k; ++m) {
      v.w[m] = ext_evals[m][i];
      v.w_next[m] = ext_evals[m][nx];
      if (layout.perm) v.sigma[m] = ext_evals[sigma_at + m][i];
    }
    v.selector = ext_evals[sel_at][i];
    if (layout.perm) {
      v.z = ext_evals[z_at][i];
      v.z_next = ext_evals[z_at][nx];
    }
    if (layout.lookup) {
      v.zl = ext_evals[zl_at][i];
      v.zl_next = ext_evals[zl_at][nx];
    }
    v.l_first = h_first * zh[i] * nc_inv * inv_first[i];
    v.l_last = h_last * zh[i] * nc_inv * inv_last[i];
    qe[i] = combine_constraints(layout, ch, res.statement.publics, v);
    x *= ext.omega;
  }
  ext_evals.clear();
  // Divide the coefficients of R by x^N - c from the top, the same way the
  // streaming prover does, so both agree even on an invalid witness.
  intt(qe.span(), ext);
  const Fr c = h.vanishing_constant;
  for (uint64_t j = dn - n; j-- > 0;) {
    qe[j] += c * qe[j + n];
  }
  for (uint64_t j = 0; j < n; ++j) {
    if (!qe[j].is_zero() && options.check_witness) fail(Errc::kInvalidWitness, "constraints do not vanish on the domain");
  }
  for (uint64_t j = 0; j < layout.q_len; ++j) qe[j] = qe[j + n];
  qe.resize(layout.q_len);

  if (config.quotient_basis == Basis::kCoefficient) {
    proof.q_com = commit(*pp, Basis::kCoefficient, qe.span(), 0, blind.q);
  } else {
    Metered<Fr> qv(layout.q_domain->size, Fr::zero());
    std::copy(qe.begin(), qe.end(), qv.begin());
    ntt(qv.span(), *layout.q_domain);
    proof.q_com = commit_lagrange(*pp, *layout.q_domain, qv.span()) + blinding_term(*pp, blind.q);
  }
  fs.absorb_quotient(proof.q_com, ch);

  // Claims by Horner on the coefficient vectors.
  const Fr zw = ch.zeta * h.omega;
  auto coeff_of = [&](uint8_t id) -> std::span<const Fr> {
    if (id == poly::kSelector) return coeffs[sel_at].span();
    if (id >= poly::kSigma && id < poly::kSigma + k) return coeffs[sigma_at + id - poly::kSigma].span();
    if (id >= poly::kWire && id < poly::kWire + k) return coeffs[id - poly::kWire].span();
    if (id == poly::kZ) return coeffs[z_at].span();
    if (id == poly::kZLookup) return coeffs[zl_at].span();
    return qe.span();
  };
  for (const auto& key : layout.evals) {
    proof.evals.push_back(field::horner(coeff_of(key.poly), key.point == EvalPoint::kZeta ? ch.zeta : zw));
  }
  const Fr nu = fs.absorb_evals(proof.evals);

  // One batched witness per point, all in coefficient form.
  auto open = [&](const std::vector<uint8_t>& polys, const Fr& at) {
    Metered<Fr> f(std::max(n, layout.q_len), Fr::zero());
    Fr p = Fr::one();
    for (uint8_t id : polys) {
      const auto c = coeff_of(id);
      for (size_t i = 0; i < c.size(); ++i) f[i] += p * c[i];
      p *= nu;
    }
    const Metered<Fr> w = divide_linear(f.span(), at);
    return OpeningProof{commit(*pp, Basis::kCoefficient, w.span())};
  };
  proof.open_zeta = open(layout.open_zeta, ch.zeta);
  proof.open_zeta_omega = open(layout.open_zeta_omega, zw);
  if (config.mode == PcsMode::kHiding) {
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
