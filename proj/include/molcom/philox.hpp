#pragma once

#include <array>
#include <cstdint>

namespace molcom {

//! Philox4x32-10 counter-based generator (Salmon et al., SC'11). Every
//! (key, counter) pair maps to an independent block of four 32-bit words, so
//! draw i of a stream can be produced by any thread without shared state.
class Philox4x32
{
public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit constexpr Philox4x32(Key key)
    : key_(key)
  {}

  //! Key from a 64-bit seed.
  explicit constexpr Philox4x32(std::uint64_t seed)
    : key_{ static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32) }
  {}

  constexpr Block operator()(Block counter) const
  {
    Key key = key_;
    for (int round = 0; round < 10; ++round) {
      counter = single_round(counter, key);
      key[0] += 0x9E3779B9u;
      key[1] += 0xBB67AE85u;
    }
    return counter;
  }

  //! Block for draw `index` of stream `stream`.
  constexpr Block operator()(std::uint64_t index, std::uint64_t stream) const
  {
    return (*this)(Block{ static_cast<std::uint32_t>(index),
                          static_cast<std::uint32_t>(index >> 32),
                          static_cast<std::uint32_t>(stream),
                          static_cast<std::uint32_t>(stream >> 32) });
  }

  //! Two uniforms in the open interval (0, 1) with 52 random bits each; the
  //! half-step offset keeps both ends exactly representable and excluded.
  static constexpr std::array<double, 2> to_unit_pair(const Block& b)
  {
    const auto word = [](std::uint32_t hi, std::uint32_t lo) {
      const std::uint64_t bits = (std::uint64_t{ hi } << 32 | lo) >> 12;
      return (static_cast<double>(bits) + 0.5) * 0x1p-52;
    };
    return { word(b[0], b[1]), word(b[2], b[3]) };
  }

private:
  static constexpr Block single_round(const Block& c, const Key& k)
  {
    const std::uint64_t p0 = std::uint64_t{ 0xD2511F53u } * c[0];
    const std::uint64_t p1 = std::uint64_t{ 0xCD9E8D57u } * c[2];
    return { static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0) };
  }

  Key key_;
};

} // namespace molcom
