#include "levybasis/rng.hpp"

#include <stdexcept>

namespace levybasis {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

RngKey RngKey::with_cell(std::uint64_t c) const {
  if (c > std::numeric_limits<std::uint32_t>::max()) throw std::out_of_range("RngKey: cell index exceeds 32 bits");
  RngKey k = *this;
  k.cell = static_cast<std::uint32_t>(c);
  return k;
}

RngKey RngKey::with_replicate(std::uint64_t r) const {
  RngKey k = *this;
  k.replicate = r;
  return k;
}

RngKey RngKey::with_component(std::uint32_t comp) const {
  RngKey k = *this;
  k.component = comp;
  return k;
}

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  constexpr std::uint64_t kM0 = 0xD2511F53;
  constexpr std::uint64_t kM1 = 0xCD9E8D57;
  constexpr std::uint32_t kW0 = 0x9E3779B9;
  constexpr std::uint32_t kW1 = 0xBB67AE85;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = kM0 * ctr[0];
    const std::uint64_t p1 = kM1 * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

RngStream::RngStream(const RngKey& k) {
  const std::uint64_t mixed = splitmix64(k.seed ^ splitmix64(0xC0FFEEULL + k.component));
  key_ = {static_cast<std::uint32_t>(mixed), static_cast<std::uint32_t>(mixed >> 32)};
  counter_ = {0, k.cell, static_cast<std::uint32_t>(k.replicate), static_cast<std::uint32_t>(k.replicate >> 32)};
}

RngStream::result_type RngStream::operator()() {
  if (next_ >= 4) {
    buffer_ = philox4x32(counter_, key_);
    if (++counter_[0] == 0) throw std::overflow_error("RngStream: substream exhausted");
    next_ = 0;
  }
  const std::uint64_t hi = buffer_[next_];
  const std::uint64_t lo = buffer_[next_ + 1];
  next_ += 2;
  return (hi << 32) | lo;
}

double RngStream::uniform() {
  // 53 random bits, offset by half a step so 0 and 1 are excluded.
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace levybasis
