#include "streamzk/barycentric.hpp"

#include <algorithm>

#include "streamzk/error.hpp"

namespace streamzk {

BarycentricWeights::BarycentricWeights(const Domain& domain, const Fr& zeta)
    : domain_(domain), zeta_(zeta) {
  if (domain.contains(zeta)) fail(Errc::kPointInDomain, "evaluation point lies in the domain");
  inv_nc_ = (Fr::from_u64(domain.size) * domain.vanishing_constant).inverse();
}

void BarycentricWeights::fill(uint64_t start, std::span<Fr> out) const {
  Fr h = domain_.element(start);
  for (auto& v : out) {
    v = zeta_ - h;
    h *= domain_.omega;
  }
  field::batch_invert(out);
  h = domain_.element(start);
  for (auto& v : out) {
    v *= h * inv_nc_;
    h *= domain_.omega;
  }
}

void BarycentricSum::add(std::span<const Fr> weights, std::span<const Fr> values) {
  if (weights.size() != values.size()) fail(Errc::kLengthMismatch, "weights and values differ in length");
  for (size_t i = 0; i < weights.size(); ++i) {
    numerator += weights[i] * values[i];
    denominator += weights[i];
  }
}

Fr BarycentricSum::value() const { return numerator * denominator.inverse(); }

Fr barycentric_eval(const Domain& domain, ElementSource& values, const Fr& zeta, size_t batch) {
  BarycentricWeights weights(domain, zeta);
  batch = std::max<size_t>(1, batch);
  Metered<Fr> vals(batch);
  Metered<Fr> w(batch);
  BarycentricSum sum;
  uint64_t pos = 0;
  for (;;) {
    const size_t got = values.read(vals.span());
    if (got == 0) break;
    if (pos + got > domain.size) fail(Errc::kLengthMismatch, "more values than domain points");
    weights.fill(pos, w.span().first(got));
    sum.add(w.span().first(got), vals.span().first(got));
    pos += got;
  }
  if (pos != domain.size) fail(Errc::kLengthMismatch, "fewer values than domain points");
  return sum.value();
}

}  // namespace streamzk
