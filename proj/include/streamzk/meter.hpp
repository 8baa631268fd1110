#pragma once

// Workspace accounting. Every buffer whose size can depend on the trace lives
// in a Metered<T>, which reports its element count to the process-wide meter.
// The SRS, the proof itself and spill files are outside the meter.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace streamzk {

enum class ElemKind : uint8_t { kField, kGroup, kWord };

// Buffers tagged kTrace additionally feed a separate peak counter for
// materialized trace values.
enum class MeterTag : uint8_t { kWork, kTrace };

class WorkspaceMeter {
 public:
  static WorkspaceMeter& global();

  void acquire(ElemKind kind, size_t n, MeterTag tag);
  void release(ElemKind kind, size_t n, MeterTag tag);

  size_t live_bytes() const;
  size_t peak_bytes() const { return peak_bytes_.load(); }
  size_t peak_trace_bytes() const { return peak_trace_bytes_.load(); }
  size_t live_elements(ElemKind kind) const { return live_[static_cast<int>(kind)].load(); }

  // Drops both peaks to the current live values.
  void reset_peak();

  size_t width(ElemKind kind) const { return width_[static_cast<int>(kind)]; }
  void set_widths(size_t field_bytes, size_t group_bytes);

  // A cap of zero disables the check. The STREAMZK_WORKSPACE_CAP environment
  // variable (bytes) seeds the cap on first use.
  void set_cap(size_t bytes) { cap_.store(bytes); }
  size_t cap() const { return cap_.load(); }

  void count_pass() { passes_.fetch_add(1); }
  size_t passes() const { return passes_.load(); }
  void reset_passes() { passes_.store(0); }

 private:
  WorkspaceMeter();
  static void bump_peak(std::atomic<size_t>& peak, size_t value);

  std::atomic<size_t> live_[3] = {0, 0, 0};
  std::atomic<size_t> live_trace_bytes_{0};
  std::atomic<size_t> peak_bytes_{0};
  std::atomic<size_t> peak_trace_bytes_{0};
  std::atomic<size_t> cap_{0};
  std::atomic<size_t> passes_{0};
  size_t width_[3] = {32, 48, 8};
};

// Scoped peak measurement: resets the peak on entry and reports the peak
// reached while alive, relative to nothing (absolute bytes).
class PeakScope {
 public:
  PeakScope() { WorkspaceMeter::global().reset_peak(); }
  size_t peak_bytes() const { return WorkspaceMeter::global().peak_bytes(); }
  size_t peak_trace_bytes() const { return WorkspaceMeter::global().peak_trace_bytes(); }
};

template <class T>
struct MeterKindOf {
  static constexpr ElemKind value = ElemKind::kWord;
};

template <class T>
class Metered {
 public:
  static constexpr ElemKind kKind = MeterKindOf<T>::value;

  explicit Metered(MeterTag tag = MeterTag::kWork) : tag_(tag) {}
  explicit Metered(size_t n, MeterTag tag = MeterTag::kWork) : tag_(tag) { resize(n); }
  Metered(size_t n, const T& value, MeterTag tag = MeterTag::kWork) : tag_(tag) {
    WorkspaceMeter::global().acquire(kKind, n, tag_);
    data_.assign(n, value);
    metered_ = n;
  }
  Metered(const Metered& other) : tag_(other.tag_) {
    WorkspaceMeter::global().acquire(kKind, other.data_.size(), tag_);
    data_ = other.data_;
    metered_ = data_.size();
  }
  Metered(Metered&& other) noexcept
      : data_(std::move(other.data_)), metered_(std::exchange(other.metered_, 0)), tag_(other.tag_) {
    other.data_.clear();
  }
  Metered& operator=(Metered other) noexcept {
    swap(other);
    return *this;
  }
  ~Metered() { WorkspaceMeter::global().release(kKind, metered_, tag_); }

  void swap(Metered& other) noexcept {
    data_.swap(other.data_);
    std::swap(metered_, other.metered_);
    std::swap(tag_, other.tag_);
  }

  void resize(size_t n) {
    adjust(n);
    data_.resize(n);
  }
  void assign(size_t n, const T& value) {
    adjust(n);
    data_.assign(n, value);
  }
  void push_back(const T& value) {
    adjust(data_.size() + 1);
    data_.push_back(value);
  }
  // Releases the storage as well as the metered count.
  void clear() {
    adjust(0);
    std::vector<T>().swap(data_);
  }

  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  T& operator[](size_t i) { return data_[i]; }
  const T& operator[](size_t i) const { return data_[i]; }
  T& back() { return data_.back(); }
  const T& back() const { return data_.back(); }
  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }
  std::span<T> span() { return data_; }
  std::span<const T> span() const { return data_; }
  operator std::span<T>() { return data_; }
  operator std::span<const T>() const { return data_; }

 private:
  void adjust(size_t n) {
    auto& meter = WorkspaceMeter::global();
    if (n > metered_) {
      meter.acquire(kKind, n - metered_, tag_);
    } else if (n < metered_) {
      meter.release(kKind, metered_ - n, tag_);
    }
    metered_ = n;
  }

  std::vector<T> data_;
  size_t metered_ = 0;
  MeterTag tag_;
};

}  // namespace streamzk
