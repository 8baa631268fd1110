#include "streamzk/stream.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <string>
#include <utility>
#include <vector>

#include "streamzk/error.hpp"

namespace streamzk {

namespace {

std::atomic<uint64_t> g_bytes_written{0};

constexpr size_t kElemBytes = sizeof(Fr);
static_assert(kElemBytes == 32);

std::string scratch_dir() {
  if (const char* dir = std::getenv("STREAMZK_SCRATCH_DIR")) return dir;
  if (const char* dir = std::getenv("TMPDIR")) return dir;
  return "/tmp";
}

}  // namespace

ScratchFile::ScratchFile() {
  std::string path = scratch_dir() + "/streamzk-XXXXXX";
  std::vector<char> buf(path.begin(), path.end());
  buf.push_back('\0');
  fd_ = mkstemp(buf.data());
  if (fd_ < 0) fail(Errc::kIo, "cannot create scratch file in " + scratch_dir());
  unlink(buf.data());
}

ScratchFile::~ScratchFile() {
  if (fd_ >= 0) close(fd_);
}

ScratchFile::ScratchFile(ScratchFile&& other) noexcept
    : fd_(std::exchange(other.fd_, -1)), length_(std::exchange(other.length_, 0)) {}

ScratchFile& ScratchFile::operator=(ScratchFile&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) close(fd_);
    fd_ = std::exchange(other.fd_, -1);
    length_ = std::exchange(other.length_, 0);
  }
  return *this;
}

void ScratchFile::write(uint64_t pos, std::span<const Fr> values) {
  const auto* p = reinterpret_cast<const char*>(values.data());
  size_t left = values.size() * kElemBytes;
  off_t off = static_cast<off_t>(pos * kElemBytes);
  while (left > 0) {
    const ssize_t n = pwrite(fd_, p, left, off);
    if (n < 0) {
      if (errno == EINTR) continue;
      fail(Errc::kIo, std::string("scratch write: ") + std::strerror(errno));
    }
    p += n;
    off += n;
    left -= static_cast<size_t>(n);
  }
  g_bytes_written.fetch_add(values.size() * kElemBytes);
  length_ = std::max<uint64_t>(length_, pos + values.size());
}

void ScratchFile::read(uint64_t pos, std::span<Fr> out) const {
  if (pos + out.size() > length_) fail(Errc::kIo, "scratch read past end");
  auto* p = reinterpret_cast<char*>(out.data());
  size_t left = out.size() * kElemBytes;
  off_t off = static_cast<off_t>(pos * kElemBytes);
  while (left > 0) {
    const ssize_t n = pread(fd_, p, left, off);
    if (n <= 0) {
      if (n < 0 && errno == EINTR) continue;
      fail(Errc::kIo, "scratch read failed");
    }
    p += n;
    off += n;
    left -= static_cast<size_t>(n);
  }
}

Fr ScratchFile::read_one(uint64_t pos) const {
  Fr v;
  read(pos, std::span<Fr>(&v, 1));
  return v;
}

uint64_t ScratchFile::total_bytes_written() { return g_bytes_written.load(); }

size_t SpanSource::read(std::span<Fr> out) {
  const size_t n = std::min(out.size(), values_.size() - pos_);
  std::copy_n(values_.begin() + static_cast<ptrdiff_t>(pos_), n, out.begin());
  pos_ += n;
  return n;
}

size_t FileSource::read(std::span<Fr> out) {
  const size_t n = static_cast<size_t>(std::min<uint64_t>(out.size(), end_ - pos_));
  if (n > 0) file_.read(pos_, out.first(n));
  pos_ += n;
  return n;
}

size_t GeneratorSource::read(std::span<Fr> out) {
  const size_t n = static_cast<size_t>(std::min<uint64_t>(out.size(), count_ - pos_));
  for (size_t i = 0; i < n; ++i) out[i] = gen_(pos_ + i);
  pos_ += n;
  return n;
}

BlockSink file_sink(ScratchFile& file) {
  return [&file](uint64_t start, std::span<const Fr> block) { file.write(start, block); };
}

}  // namespace streamzk
