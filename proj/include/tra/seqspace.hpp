#pragma once

// Sequences in ^n U (U = {0..u-1}), permutations of n, and the right action
// s -> s∘f by precomposition.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tra {

using Dim = std::uint32_t;
using BaseSize = std::uint32_t;
using Value = std::uint32_t;

/// A point of ^n U: entry i is the base element assigned to coordinate i.
struct Seq {
  std::vector<Value> entries;

  Dim dim() const noexcept { return static_cast<Dim>(entries.size()); }
  Value operator[](std::size_t i) const { return entries[i]; }

  friend bool operator==(const Seq&, const Seq&) = default;
  friend auto operator<=>(const Seq&, const Seq&) = default;
};

/// Index of a sequence in the lexicographic enumeration of ^n u.
struct SpaceRank {
  std::uint64_t value = 0;

  friend bool operator==(SpaceRank, SpaceRank) = default;
  friend auto operator<=>(SpaceRank, SpaceRank) = default;
};

/// A bijection on {0..n-1}, stored as its image list.
class Perm {
 public:
  /// Validates that `images` is a bijection; throws NotAPermutation.
  explicit Perm(std::vector<Dim> images);

  static Perm identity(Dim n);

  Dim dim() const noexcept { return static_cast<Dim>(images_.size()); }
  Dim operator()(Dim i) const { return images_[i]; }
  const std::vector<Dim>& images() const noexcept { return images_; }
  bool is_identity() const noexcept;

  friend bool operator==(const Perm&, const Perm&) = default;
  friend auto operator<=>(const Perm&, const Perm&) = default;

 private:
  std::vector<Dim> images_;
};

/// u^n, or throws OutOfRange when it does not fit in 64 bits. 0^0 = 1.
std::uint64_t space_size(Dim n, BaseSize u);

SpaceRank rank(const Seq& s, BaseSize u);
Seq unrank(SpaceRank r, Dim n, BaseSize u);

/// t(i) = s(f(i)).
Seq compose_right(const Seq& s, const Perm& f);

Perm transposition(Dim n, Dim i, Dim j);
/// (f∘g)(i) = f(g(i)).
Perm perm_compose(const Perm& f, const Perm& g);
Perm perm_inverse(const Perm& f);
Perm perm_from_images(std::span<const Dim> images);

/// e_i: 1 at coordinate i, 0 elsewhere.
Seq unit_seq(Dim n, Dim i);
Seq constant_seq(Dim n, Value v);
bool is_constant(const Seq& s);

/// The n-cycle 0 -> 1 -> ... -> n-1 -> 0, i.e. images [1, 2, ..., n-1, 0].
Perm forward_cycle(Dim n);
/// Inverse of forward_cycle: images [n-1, 0, 1, ..., n-2].
Perm backward_cycle(Dim n);

/// All n! permutations in lexicographic order of their image lists.
std::vector<Perm> all_perms(Dim n);
/// All transpositions [i,j] with i < j, in lexicographic (i, j) order.
std::vector<Perm> all_transpositions(Dim n);

std::string to_string(const Seq& s);   // "(0,1,0)"
std::string to_string(const Perm& f);  // "[1,2,0]"

}  // namespace tra
