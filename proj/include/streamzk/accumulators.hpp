#pragma once

// Blockwise grand products for the permutation and lookup arguments.

#include <vector>

#include "streamzk/air.hpp"
#include "streamzk/field.hpp"
#include "streamzk/meter.hpp"

namespace streamzk {

struct Challenges {
  Fr beta;
  Fr gamma;
  Fr gamma_lookup;
  Fr alpha;
  Fr zeta;
};

struct AuxState {
  BoundaryVector boundary;
  Fr z = Fr::one();
  std::vector<Fr> z_lookup;  // one entry when the AIR has a lookup
};

struct AccumulatorColumn {
  Metered<Fr> z_vals;  // Z(i) for each row of the block, starting at Z_start
  Fr z_end;            // Z just past the block
};

// Row factors prod_c (w + beta id + gamma) / (w + beta sigma + gamma), one
// batch inversion per block. Needs block.local.
Metered<Fr> perm_row_factors(const BlockOutput& block, const Challenges& ch);

Fr perm_block_factor(const BlockOutput& block, const Challenges& ch);

// Must be applied in increasing t; z_vals[0] = z_start.
AccumulatorColumn z_column_block(const BlockOutput& block, const Challenges& ch, const Fr& z_start);

// phi(i) = (gamma_L + f_i) / (gamma_L + t_i) for the AIR's lookup columns.
Metered<Fr> lookup_row_factors(const BlockOutput& block, const LookupSpec& spec, const Challenges& ch);

AccumulatorColumn lookup_block_factor(const BlockOutput& block, const LookupSpec& spec, const Challenges& ch,
                                      const Fr& z_start);

}  // namespace streamzk
