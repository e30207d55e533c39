#ifndef QUIZFORGE_HASH_HPP
#define QUIZFORGE_HASH_HPP

#include <openssl/sha.h>

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace quizforge {

inline std::string to_hex(const unsigned char* data, std::size_t n) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(n * 2, '0');
  for (std::size_t i = 0; i < n; ++i) {
    out[2 * i] = digits[data[i] >> 4];
    out[2 * i + 1] = digits[data[i] & 0xF];
  }
  return out;
}

inline std::array<unsigned char, SHA256_DIGEST_LENGTH> sha256(std::string_view data) {
  std::array<unsigned char, SHA256_DIGEST_LENGTH> digest{};
  SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), digest.data());
  return digest;
}

/// Content identifier of a material: 128 bits of SHA-256 over title and body.
inline std::string material_id(std::string_view title, std::string_view body) {
  std::string buf;
  buf.reserve(title.size() + body.size() + 1);
  buf.append(title);
  buf.push_back('\0');
  buf.append(body);
  const auto digest = sha256(buf);
  return to_hex(digest.data(), 16);
}

/// Default generation seed for a material: its first 64 id bits.
inline std::uint64_t seed_from_material_id(std::string_view id) {
  std::uint64_t seed = 0;
  for (std::size_t i = 0; i < 16 && i < id.size(); ++i) {
    const char c = id[i];
    const unsigned v = (c >= '0' && c <= '9') ? unsigned(c - '0') : (c >= 'a' && c <= 'f') ? unsigned(c - 'a' + 10) : 0u;
    seed = (seed << 4) | v;
  }
  return seed;
}

}  // namespace quizforge

#endif
