/**
 * @file bits.hpp
 * @brief Fixed-capacity bit vectors for 0-1 solutions and sub-solutions.
 *
 * Solutions are ordered lexicographically on their bit string (bit 0 first),
 * and that order is the tie-breaking rule used by every search routine.
 */

#ifndef ISEO_BITS_HPP
#define ISEO_BITS_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace iseo {

/// Maximum number of variables per unknown constraint block.
inline constexpr int kMaxBits = 192;

/// Binary vector of length n <= kMaxBits.
struct Bits {
  static constexpr int kWords = kMaxBits / 64;

  std::array<std::uint64_t, kWords> words{};
  int n = 0;

  Bits() = default;
  explicit Bits(int size) : n(size) {
    if (size < 0 || size > kMaxBits) {
      throw std::invalid_argument("Bits: size out of range");
    }
  }

  static Bits zeros(int size) { return Bits(size); }

  static Bits ones(int size) {
    Bits b(size);
    for (int j = 0; j < size; ++j) b.set(j, true);
    return b;
  }

  static Bits from_vector(const std::vector<int>& v) {
    Bits b(static_cast<int>(v.size()));
    for (int j = 0; j < b.n; ++j) {
      if (v[j] != 0 && v[j] != 1) throw std::invalid_argument("Bits: entries must be 0/1");
      b.set(j, v[j] == 1);
    }
    return b;
  }

  bool get(int j) const { return (words[j >> 6] >> (j & 63)) & 1u; }

  void set(int j, bool value) {
    if (j < 0 || j >= n) throw std::out_of_range("Bits::set: index out of range");
    const std::uint64_t bit = std::uint64_t{1} << (j & 63);
    if (value) {
      words[j >> 6] |= bit;
    } else {
      words[j >> 6] &= ~bit;
    }
  }

  int count() const {
    int c = 0;
    for (std::uint64_t w : words) c += __builtin_popcountll(w);
    return c;
  }

  bool any() const {
    for (std::uint64_t w : words) {
      if (w != 0) return true;
    }
    return false;
  }

  /// Componentwise a <= b (a dominated by b).
  bool subset_of(const Bits& other) const {
    for (int k = 0; k < kWords; ++k) {
      if (words[k] & ~other.words[k]) return false;
    }
    return true;
  }

  /// Componentwise a >= b.
  bool superset_of(const Bits& other) const { return other.subset_of(*this); }

  bool operator==(const Bits& other) const { return n == other.n && words == other.words; }
  bool operator!=(const Bits& other) const { return !(*this == other); }

  /// Lexicographic order on the bit string b_0 b_1 ... b_{n-1}.
  bool lex_less(const Bits& other) const {
    for (int k = 0; k < kWords; ++k) {
      const std::uint64_t diff = words[k] ^ other.words[k];
      if (diff != 0) {
        const int p = __builtin_ctzll(diff);
        return ((words[k] >> p) & 1u) == 0;
      }
    }
    return false;
  }

  template <typename Vec>
  double dot(const Vec& weights) const {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      if (get(j)) s += weights[j];
    }
    return s;
  }

  std::vector<int> to_vector() const {
    std::vector<int> v(n);
    for (int j = 0; j < n; ++j) v[j] = get(j) ? 1 : 0;
    return v;
  }

  std::vector<int> support() const {
    std::vector<int> idx;
    for (int j = 0; j < n; ++j) {
      if (get(j)) idx.push_back(j);
    }
    return idx;
  }

  std::string to_string() const {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int j = 0; j < n; ++j) {
      if (get(j)) s[static_cast<std::size_t>(j)] = '1';
    }
    return s;
  }
};

struct BitsLexLess {
  bool operator()(const Bits& a, const Bits& b) const { return a.lex_less(b); }
};

/// Full solution over m blocks of n variables each (block-major flattening).
struct Solution {
  std::vector<Bits> blocks;

  Solution() = default;
  Solution(int m, int n) : blocks(static_cast<std::size_t>(m), Bits(n)) {}

  int num_blocks() const { return static_cast<int>(blocks.size()); }
  int block_size() const { return blocks.empty() ? 0 : blocks[0].n; }

  bool get_flat(int f) const {
    const int n = block_size();
    return blocks[static_cast<std::size_t>(f / n)].get(f % n);
  }

  void set_flat(int f, bool value) {
    const int n = block_size();
    blocks[static_cast<std::size_t>(f / n)].set(f % n, value);
  }

  static Solution zeros(int m, int n) { return Solution(m, n); }

  static Solution ones(int m, int n) {
    Solution s(m, n);
    for (auto& b : s.blocks) b = Bits::ones(n);
    return s;
  }

  /// Objective value under per-block value rows v[i][j].
  double value(const std::vector<std::vector<double>>& v) const {
    double z = 0.0;
    for (std::size_t i = 0; i < blocks.size(); ++i) z += blocks[i].dot(v[i]);
    return z;
  }

  /// Componentwise a <= b across all blocks.
  bool subset_of(const Solution& other) const {
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      if (!blocks[i].subset_of(other.blocks[i])) return false;
    }
    return true;
  }

  bool operator==(const Solution& other) const { return blocks == other.blocks; }
  bool operator!=(const Solution& other) const { return !(*this == other); }

  bool lex_less(const Solution& other) const {
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      if (blocks[i] != other.blocks[i]) return blocks[i].lex_less(other.blocks[i]);
    }
    return false;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      if (i > 0) s += '|';
      s += blocks[i].to_string();
    }
    return s;
  }
};

}  // namespace iseo

#endif  // ISEO_BITS_HPP
