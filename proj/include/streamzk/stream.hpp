#pragma once

// Element streams and disk-backed scratch. Scratch files live outside the
// workspace meter: they play the role of the external storage a streaming
// prover is allowed to re-read, never of working memory.

#include <cstdint>
#include <functional>
#include <span>

#include "streamzk/field.hpp"

namespace streamzk {

class ScratchFile {
 public:
  ScratchFile();
  ~ScratchFile();
  ScratchFile(const ScratchFile&) = delete;
  ScratchFile& operator=(const ScratchFile&) = delete;
  ScratchFile(ScratchFile&& other) noexcept;
  ScratchFile& operator=(ScratchFile&& other) noexcept;

  void write(uint64_t pos, std::span<const Fr> values);
  void read(uint64_t pos, std::span<Fr> out) const;
  Fr read_one(uint64_t pos) const;
  uint64_t length() const { return length_; }

  // Bytes written through any scratch file in this process.
  static uint64_t total_bytes_written();

 private:
  int fd_ = -1;
  uint64_t length_ = 0;
};

// A forward-only producer of field elements.
class ElementSource {
 public:
  virtual ~ElementSource() = default;
  // Fills a prefix of out; returns how many were written, 0 once exhausted.
  virtual size_t read(std::span<Fr> out) = 0;
};

class SpanSource : public ElementSource {
 public:
  explicit SpanSource(std::span<const Fr> values) : values_(values) {}
  size_t read(std::span<Fr> out) override;

 private:
  std::span<const Fr> values_;
  size_t pos_ = 0;
};

class FileSource : public ElementSource {
 public:
  FileSource(const ScratchFile& file, uint64_t start, uint64_t count)
      : file_(file), pos_(start), end_(start + count) {}
  size_t read(std::span<Fr> out) override;

 private:
  const ScratchFile& file_;
  uint64_t pos_;
  uint64_t end_;
};

class GeneratorSource : public ElementSource {
 public:
  GeneratorSource(uint64_t count, std::function<Fr(uint64_t)> gen) : count_(count), gen_(std::move(gen)) {}
  size_t read(std::span<Fr> out) override;

 private:
  uint64_t count_;
  std::function<Fr(uint64_t)> gen_;
  uint64_t pos_ = 0;
};

// Receives a block of consecutive entries starting at index `start`.
using BlockSink = std::function<void(uint64_t start, std::span<const Fr> block)>;

// Sink that stores blocks into a scratch file at their indices.
BlockSink file_sink(ScratchFile& file);

}  // namespace streamzk
