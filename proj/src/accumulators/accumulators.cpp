#include "streamzk/accumulators.hpp"

#include "streamzk/error.hpp"

namespace streamzk {

namespace {

// Divides num[i] by den[i] in place with one inversion for the whole block.
void divide_in_place(Metered<Fr>& num, Metered<Fr>& den, const char* what) {
  for (const Fr& d : den) {
    if (d.is_zero()) fail(Errc::kZeroDenominator, what);
  }
  field::batch_invert(den.span());
  for (size_t i = 0; i < num.size(); ++i) num[i] *= den[i];
}

AccumulatorColumn running_product(std::span<const Fr> factors, const Fr& z_start) {
  AccumulatorColumn out{Metered<Fr>(factors.size()), z_start};
  Fr z = z_start;
  for (size_t i = 0; i < factors.size(); ++i) {
    out.z_vals[i] = z;
    z *= factors[i];
  }
  out.z_end = z;
  return out;
}

}  // namespace

Metered<Fr> perm_row_factors(const BlockOutput& block, const Challenges& ch) {
  if (!block.local) fail(Errc::kInvalidArgument, "block has no permutation labels");
  const LocalFields& local = *block.local;
  Metered<Fr> num(block.rows, Fr::one());
  Metered<Fr> den(block.rows, Fr::one());
  for (size_t m = 0; m < block.k; ++m) {
    for (size_t i = 0; i < block.rows; ++i) {
      const size_t at = m * block.rows + i;
      const Fr w = block.reg_vals[at] + ch.gamma;
      num[i] *= w + ch.beta * local.id_labels[at];
      den[i] *= w + ch.beta * local.sigma_labels[at];
    }
  }
  divide_in_place(num, den, "permutation denominator vanishes");
  return num;
}

Fr perm_block_factor(const BlockOutput& block, const Challenges& ch) {
  Fr f = Fr::one();
  for (const Fr& x : perm_row_factors(block, ch)) f *= x;
  return f;
}

AccumulatorColumn z_column_block(const BlockOutput& block, const Challenges& ch, const Fr& z_start) {
  return running_product(perm_row_factors(block, ch), z_start);
}

Metered<Fr> lookup_row_factors(const BlockOutput& block, const LookupSpec& spec, const Challenges& ch) {
  Metered<Fr> num(block.rows);
  Metered<Fr> den(block.rows);
  for (size_t i = 0; i < block.rows; ++i) {
    num[i] = ch.gamma_lookup + block.value(spec.input_reg, i);
    den[i] = ch.gamma_lookup + block.value(spec.table_reg, i);
  }
  divide_in_place(num, den, "lookup denominator vanishes");
  return num;
}

AccumulatorColumn lookup_block_factor(const BlockOutput& block, const LookupSpec& spec, const Challenges& ch,
                                      const Fr& z_start) {
  return running_product(lookup_row_factors(block, spec, ch), z_start);
}

}  // namespace streamzk
