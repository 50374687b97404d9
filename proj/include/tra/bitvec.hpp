#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>

#include <boost/container/small_vector.hpp>

namespace tra {

/// Fixed-length bit vector with inline storage for up to 256 bits.
///
/// Bit p has numeric weight 2^p, so the ordering below is the numeric order
/// of the vectors read as unsigned integers. Bits past `size()` in the last
/// word are kept at zero by every mutating operation.
class BitVec {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  BitVec() = default;
  explicit BitVec(std::size_t nbits, bool value = false)
      : nbits_(nbits), words_(word_count(nbits), value ? ~Word{0} : Word{0}) {
    trim();
  }

  /// Low `nbits` bits of `value` (nbits <= 64).
  static BitVec from_word(std::size_t nbits, Word value) {
    BitVec out(nbits);
    if (!out.words_.empty()) {
      out.words_[0] = value;
      out.trim();
    }
    return out;
  }

  std::size_t size() const noexcept { return nbits_; }
  std::size_t num_words() const noexcept { return words_.size(); }
  const Word* words() const noexcept { return words_.data(); }
  Word* words() noexcept { return words_.data(); }

  bool test(std::size_t p) const noexcept {
    return (words_[p / kWordBits] >> (p % kWordBits)) & 1U;
  }
  void set(std::size_t p, bool value = true) noexcept {
    const Word mask = Word{1} << (p % kWordBits);
    if (value) {
      words_[p / kWordBits] |= mask;
    } else {
      words_[p / kWordBits] &= ~mask;
    }
  }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (Word w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool none() const noexcept {
    for (Word w : words_) {
      if (w != 0) return false;
    }
    return true;
  }
  bool all() const noexcept { return count() == nbits_; }

  BitVec& operator&=(const BitVec& o) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  BitVec& operator|=(const BitVec& o) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  BitVec& flip() noexcept {
    for (Word& w : words_) w = ~w;
    trim();
    return *this;
  }

  /// this ⊆ o
  bool subset_of(const BitVec& o) const noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & ~o.words_[i]) return false;
    }
    return true;
  }

  friend BitVec operator&(BitVec a, const BitVec& b) { return a &= b; }
  friend BitVec operator|(BitVec a, const BitVec& b) { return a |= b; }
  friend BitVec operator~(BitVec a) { return a.flip(); }

  friend bool operator==(const BitVec& a, const BitVec& b) noexcept {
    return a.nbits_ == b.nbits_ && a.words_ == b.words_;
  }
  friend std::strong_ordering operator<=>(const BitVec& a,
                                          const BitVec& b) noexcept {
    if (auto c = a.nbits_ <=> b.nbits_; c != 0) return c;
    for (std::size_t i = a.words_.size(); i-- > 0;) {
      if (auto c = a.words_[i] <=> b.words_[i]; c != 0) return c;
    }
    return std::strong_ordering::equal;
  }

  /// Positions of set bits, ascending.
  template <typename F>
  void for_each_set(F&& fn) const {
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      Word w = words_[wi];
      while (w != 0) {
        fn(wi * kWordBits + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  /// "0101..." with position 0 first.
  std::string to_string() const {
    std::string s(nbits_, '0');
    for (std::size_t p = 0; p < nbits_; ++p) {
      if (test(p)) s[p] = '1';
    }
    return s;
  }

  std::size_t hash() const noexcept {
    std::size_t h = nbits_ * 0x9E3779B97F4A7C15ULL;
    for (Word w : words_) h = (h ^ w) * 0x100000001B3ULL + (h >> 29);
    return h;
  }

 private:
  static std::size_t word_count(std::size_t nbits) {
    return (nbits + kWordBits - 1) / kWordBits;
  }
  void trim() noexcept {
    if (const std::size_t r = nbits_ % kWordBits; r != 0 && !words_.empty()) {
      words_.back() &= (Word{1} << r) - 1;
    }
  }

  std::size_t nbits_ = 0;
  boost::container::small_vector<Word, 4> words_;
};

struct BitVecHash {
  std::size_t operator()(const BitVec& b) const noexcept { return b.hash(); }
};

}  // namespace tra
