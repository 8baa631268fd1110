#include "streamzk/meter.hpp"

#include <cstdlib>
#include <string>

#include "streamzk/error.hpp"

namespace streamzk {

WorkspaceMeter::WorkspaceMeter() {
  if (const char* env = std::getenv("STREAMZK_WORKSPACE_CAP")) {
    cap_.store(std::strtoull(env, nullptr, 10));
  }
}

WorkspaceMeter& WorkspaceMeter::global() {
  static WorkspaceMeter meter;
  return meter;
}

void WorkspaceMeter::bump_peak(std::atomic<size_t>& peak, size_t value) {
  size_t seen = peak.load();
  while (value > seen && !peak.compare_exchange_weak(seen, value)) {
  }
}

size_t WorkspaceMeter::live_bytes() const {
  return live_[0].load() * width_[0] + live_[1].load() * width_[1] + live_[2].load() * width_[2];
}

void WorkspaceMeter::acquire(ElemKind kind, size_t n, MeterTag tag) {
  if (n == 0) return;
  const int idx = static_cast<int>(kind);
  live_[idx].fetch_add(n);
  const size_t live = live_bytes();
  const size_t cap = cap_.load();
  if (cap != 0 && live > cap) {
    live_[idx].fetch_sub(n);
    fail(Errc::kWorkspaceExceeded,
         "workspace " + std::to_string(live) + " bytes exceeds cap " + std::to_string(cap));
  }
  bump_peak(peak_bytes_, live);
  if (tag == MeterTag::kTrace) {
    const size_t trace = live_trace_bytes_.fetch_add(n * width_[idx]) + n * width_[idx];
    bump_peak(peak_trace_bytes_, trace);
  }
}

void WorkspaceMeter::release(ElemKind kind, size_t n, MeterTag tag) {
  if (n == 0) return;
  const int idx = static_cast<int>(kind);
  live_[idx].fetch_sub(n);
  if (tag == MeterTag::kTrace) live_trace_bytes_.fetch_sub(n * width_[idx]);
}

void WorkspaceMeter::reset_peak() {
  peak_bytes_.store(live_bytes());
  peak_trace_bytes_.store(live_trace_bytes_.load());
}

void WorkspaceMeter::set_widths(size_t field_bytes, size_t group_bytes) {
  width_[0] = field_bytes;
  width_[1] = group_bytes;
}

}  // namespace streamzk
