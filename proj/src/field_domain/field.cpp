#include "streamzk/field.hpp"

#include "streamzk/error.hpp"

namespace streamzk::field {

Fr multiplicative_generator() { return Fr::from_u64(5); }

Fr root_of_unity(unsigned log_n) {
  if (log_n > kTwoAdicity) {
    fail(Errc::kUnsupportedSize, "2-adicity of the field is " + std::to_string(kTwoAdicity));
  }
  static const Fr kMaxRoot =
      multiplicative_generator().pow(limbs::shr(limbs::sub_small(Fr::kModulus, 1), kTwoAdicity));
  Fr root = kMaxRoot;
  for (unsigned i = log_n; i < kTwoAdicity; ++i) root = root.square();
  return root;
}

void batch_invert(std::span<Fr> values) {
  if (values.empty()) return;
  Metered<Fr> prefix(values.size());
  Fr acc = Fr::one();
  for (size_t i = 0; i < values.size(); ++i) {
    prefix[i] = acc;
    if (!values[i].is_zero()) acc *= values[i];
  }
  Fr inv = acc.inverse();
  for (size_t i = values.size(); i-- > 0;) {
    if (values[i].is_zero()) continue;
    const Fr next = inv * values[i];
    values[i] = inv * prefix[i];
    inv = next;
  }
}

Fr horner(std::span<const Fr> coeffs, const Fr& x) {
  Fr acc;
  for (size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
  return acc;
}

}  // namespace streamzk::field
