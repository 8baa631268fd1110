#pragma once

// Streaming evaluation of f(zeta) from f's values on H, using the weights
// w_i = h_i / (N c) and two running sums: sum w_i f_i / (zeta - h_i) over
// sum w_i / (zeta - h_i).

#include <cstdint>
#include <span>

#include "streamzk/domain.hpp"
#include "streamzk/stream.hpp"

namespace streamzk {

class BarycentricWeights {
 public:
  // Throws PointInDomain when zeta lies in the domain.
  BarycentricWeights(const Domain& domain, const Fr& zeta);

  // out[i] = w_{start+i} / (zeta - h_{start+i}); one inversion per call.
  void fill(uint64_t start, std::span<Fr> out) const;

  const Domain& domain() const { return domain_; }
  const Fr& zeta() const { return zeta_; }

 private:
  Domain domain_;
  Fr zeta_;
  Fr inv_nc_;
};

struct BarycentricSum {
  Fr numerator;
  Fr denominator;

  void add(std::span<const Fr> weights, std::span<const Fr> values);
  Fr value() const;
};

Fr barycentric_eval(const Domain& domain, ElementSource& values, const Fr& zeta, size_t batch = 256);

}  // namespace streamzk
