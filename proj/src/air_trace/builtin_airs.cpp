#include <array>
#include <numeric>

#include "streamzk/air.hpp"
#include "streamzk/error.hpp"

namespace streamzk {

namespace {

Fr initial_or(const WitnessInputs& in, size_t i, uint64_t fallback) {
  return i < in.initial.size() ? in.initial[i] : Fr::from_u64(fallback);
}

// Staircase s_i = floor(i (R-1) / (T-1)).
uint64_t stair(uint64_t row, uint64_t trace_length) {
  const uint64_t r = range_air_table_size(trace_length);
  if (trace_length < 2) return 0;
  return static_cast<uint64_t>(static_cast<unsigned __int128>(row) * (r - 1) / (trace_length - 1));
}

uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr uint64_t kWindow = 8;

// v_i = s at a row drawn from the same window of 8 by a seeded shuffle. The
// window containing row T-1 is left unshuffled so the last row keeps v = s.
uint64_t shuffled_row(uint64_t row, uint64_t trace_length, uint64_t seed) {
  const uint64_t w = row / kWindow;
  const uint64_t base = w * kWindow;
  if (base + kWindow > trace_length - 1) return row;
  std::array<uint64_t, kWindow> perm;
  std::iota(perm.begin(), perm.end(), 0);
  uint64_t state = seed ^ (w * 0xd1b54a32d192ed03ULL);
  for (uint64_t i = kWindow - 1; i > 0; --i) {
    const uint64_t j = splitmix64(state) % (i + 1);
    std::swap(perm[i], perm[j]);
  }
  return base + perm[row - base];
}

}  // namespace

uint64_t range_air_table_size(uint64_t trace_length) { return std::min<uint64_t>(256, trace_length); }

AirSpec fibonacci_air() {
  AirSpec air;
  air.id = "fib";
  air.k = 2;
  air.reads = {{1}, {0}};
  air.next = {
      [](const RowReader& p, const StepContext&) { return p[1]; },
      [](const RowReader& p, const StepContext&) { return p[0] + p[1]; },
  };
  air.initial_row = [](const WitnessInputs& in, uint64_t) {
    return std::vector<Fr>{initial_or(in, 0, 1), initial_or(in, 1, 1)};
  };
  air.transitions = {
      {"a_next", 1, true, [](std::span<const Fr> c, std::span<const Fr> n) { return n[0] - c[1]; }},
      {"b_next", 1, true, [](std::span<const Fr> c, std::span<const Fr> n) { return n[1] - c[0] - c[1]; }},
  };
  air.public_cells = {{PublicRow::kFirst, 0}, {PublicRow::kFirst, 1}, {PublicRow::kLast, 1}};
  return air;
}

AirSpec copy_air() {
  AirSpec air;
  air.id = "copy";
  air.k = 3;
  air.reads = {{2}, {}, {1}};
  air.next = {
      [](const RowReader& p, const StepContext&) { return p[2]; },
      [](const RowReader& p, const StepContext&) { return p[1] + Fr::one(); },
      [](const RowReader& p, const StepContext&) { return p[2] + p[1] + Fr::one(); },
  };
  air.initial_row = [](const WitnessInputs& in, uint64_t) {
    const Fr a = initial_or(in, 0, 1);
    const Fr b = initial_or(in, 1, 0);
    return std::vector<Fr>{a, b, a + b};
  };
  air.transitions = {
      {"sum", 1, false, [](std::span<const Fr> c, std::span<const Fr>) { return c[2] - c[0] - c[1]; }},
      {"counter", 1, true,
       [](std::span<const Fr> c, std::span<const Fr> n) { return n[1] - c[1] - Fr::one(); }},
  };
  air.public_cells = {{PublicRow::kFirst, 0}, {PublicRow::kFirst, 1}, {PublicRow::kLast, 2}};
  air.sigma = [](const CellRef& cell, uint64_t trace_length) -> CellRef {
    if (cell.reg == 2 && cell.row + 1 < trace_length) return {0, cell.row + 1};
    if (cell.reg == 0 && cell.row >= 1 && cell.row < trace_length) return {2, cell.row - 1};
    return cell;
  };
  return air;
}

AirSpec range_air() {
  AirSpec air;
  air.id = "range";
  air.k = 2;
  air.reads = {{}, {}};
  air.next = {
      [](const RowReader&, const StepContext& ctx) {
        return Fr::from_u64(stair(shuffled_row(ctx.row, ctx.trace_length, ctx.seed), ctx.trace_length));
      },
      [](const RowReader& p, const StepContext& ctx) {
        const uint64_t step = stair(ctx.row, ctx.trace_length) - stair(ctx.row - 1, ctx.trace_length);
        return p[1] + Fr::from_u64(step);
      },
  };
  air.initial_row = [](const WitnessInputs& in, uint64_t trace_length) {
    return std::vector<Fr>{Fr::from_u64(stair(shuffled_row(0, trace_length, in.seed), trace_length)), Fr::zero()};
  };
  air.transitions = {
      {"stair", 2, true,
       [](std::span<const Fr> c, std::span<const Fr> n) {
         const Fr d = n[1] - c[1];
         return d * (d - Fr::one());
       }},
  };
  air.public_cells = {{PublicRow::kFirst, 1}, {PublicRow::kLast, 1}};
  air.lookup = LookupSpec{0, 1};
  return air;
}

AirSpec air_by_name(const std::string& name) {
  if (name == "fib") return fibonacci_air();
  if (name == "copy") return copy_air();
  if (name == "range") return range_air();
  fail(Errc::kInvalidArgument, "unknown AIR '" + name + "'");
}

std::vector<std::string> builtin_air_names() { return {"fib", "copy", "range"}; }

}  // namespace streamzk
