#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace levybasis {

/// Stream component ids. The decoupled copy of a field draws from its own component.
inline constexpr std::uint32_t kPrimaryComponent = 0;
inline constexpr std::uint32_t kDecoupledComponent = 1;
inline constexpr std::uint32_t kFirstUserComponent = 16;

/// Addresses one independent substream: (seed, component, cell, replicate).
struct RngKey {
  std::uint64_t seed = 0;
  std::uint32_t component = kPrimaryComponent;
  std::uint32_t cell = 0;
  std::uint64_t replicate = 0;

  RngKey with_cell(std::uint64_t c) const;
  RngKey with_replicate(std::uint64_t r) const;
  RngKey with_component(std::uint32_t comp) const;
  bool operator==(const RngKey&) const = default;
};

/// Philox4x32 with 10 rounds.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Counter-based generator over one substream; satisfies UniformRandomBitGenerator.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(const RngKey& key);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform on the open interval (0, 1).
  double uniform();

 private:
  std::array<std::uint32_t, 2> key_{};
  std::array<std::uint32_t, 4> counter_{};
  std::array<std::uint32_t, 4> buffer_{};
  int next_ = 4;
};

}  // namespace levybasis
