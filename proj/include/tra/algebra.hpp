#pragma once

// Carriers D ⊆ ^n U and the powerset algebra ℘(D) with the substitution
// operators S_f(X) = {q ∈ D : q∘f ∈ X}.

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tra/bitvec.hpp"
#include "tra/seqspace.hpp"

namespace tra {

/// Enumeration and construction caps. Exceeding any of them is an error,
/// never a silent truncation.
struct Limits {
  std::uint64_t max_carrier_members = std::uint64_t{1} << 20;
  std::uint64_t max_subalgebra_elems = std::uint64_t{1} << 16;
  /// Upper bound on the number of assignments (or element tuples) an
  /// exhaustive check may enumerate.
  std::uint64_t enumeration_budget = std::uint64_t{1} << 24;
};

class Carrier;
using CarrierRef = std::shared_ptr<const Carrier>;

/// Position map for one permutation: entry p is the position of
/// member_p∘f in the carrier, or kOutside.
struct SubstMap {
  static constexpr std::int64_t kOutside = -1;
  std::vector<std::int64_t> target;
};

/// A set D of sequences of ^n u, stored as sorted ranks. Immutable after
/// construction; the permutability flag and the substitution maps are
/// computed lazily and cached.
class Carrier {
 public:
  struct Token {};  // restricts construction to the factories below
  Carrier(Token, Dim n, BaseSize u, std::vector<std::uint64_t> members,
          bool full);

  static CarrierRef full(Dim n, BaseSize k, const Limits& limits = {});
  static CarrierRef from_seqs(Dim n, BaseSize u, std::span<const Seq> seqs,
                              const Limits& limits = {});
  /// `ranks` need not be sorted or unique.
  static CarrierRef from_ranks(Dim n, BaseSize u,
                               std::vector<std::uint64_t> ranks,
                               const Limits& limits = {});

  Dim dim() const noexcept { return n_; }
  BaseSize base() const noexcept { return u_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  bool is_full() const noexcept { return full_; }
  std::uint64_t id() const noexcept { return id_; }

  const std::vector<std::uint64_t>& member_ranks() const noexcept {
    return members_;
  }
  Seq member(std::size_t pos) const;
  std::vector<Seq> members() const;
  std::optional<std::size_t> position_of(SpaceRank r) const;
  std::optional<std::size_t> position_of(const Seq& s) const;
  bool contains(const Seq& s) const { return position_of(s).has_value(); }

  /// Closed under s -> s∘[i,j] for all i ≠ j. Cached.
  bool is_permutable() const;

  /// Cached per permutation; thread-safe.
  std::shared_ptr<const SubstMap> subst_map(const Perm& f) const;

  /// Same (n, u, member list).
  bool same_structure(const Carrier& o) const noexcept {
    return n_ == o.n_ && u_ == o.u_ && members_ == o.members_;
  }
  /// Members of this carrier all belong to `o` and (n, u) agree.
  bool is_subcarrier_of(const Carrier& o) const;

 private:
  Dim n_;
  BaseSize u_;
  std::vector<std::uint64_t> members_;
  bool full_;
  std::uint64_t id_;

  mutable std::atomic<int> permutable_{-1};  // -1 unknown, 0 no, 1 yes
  mutable std::mutex subst_mutex_;
  mutable std::map<std::vector<Dim>, std::shared_ptr<const SubstMap>>
      subst_cache_;
};

/// Throws CarrierMismatch unless the carriers are the same object or
/// structurally equal.
void require_same_carrier(const Carrier& a, const Carrier& b);

/// An element of ℘(D): bit p is set iff the p-th member of D belongs to it.
class Elem {
 public:
  Elem(CarrierRef carrier, BitVec bits);

  const Carrier& carrier() const noexcept { return *carrier_; }
  const CarrierRef& carrier_ref() const noexcept { return carrier_; }
  const BitVec& bits() const noexcept { return bits_; }
  bool contains_position(std::size_t p) const { return bits_.test(p); }
  bool contains(const Seq& s) const;
  std::size_t count() const noexcept { return bits_.count(); }
  std::vector<Seq> seqs() const;

  friend bool operator==(const Elem& a, const Elem& b);

 private:
  CarrierRef carrier_;
  BitVec bits_;
};

/// Element of ℘(D) whose bit pattern is the low |D| bits of `value`.
Elem elem_from_word(const CarrierRef& d, std::uint64_t value);
/// Element containing exactly `seqs` (each must be a member of D).
Elem elem_from_seqs(const CarrierRef& d, std::span<const Seq> seqs);

Elem zero(const CarrierRef& d);
Elem one(const CarrierRef& d);
Elem meet(const Elem& x, const Elem& y);
Elem join(const Elem& x, const Elem& y);
Elem complement(const Elem& x);
bool is_zero(const Elem& x);
bool leq(const Elem& x, const Elem& y);

/// S_f(X) = {q ∈ D : q∘f ∈ X}. A member q with q∘f ∉ D is never in the
/// result.
Elem subst(const Perm& f, const Elem& x);
/// Applies a precomputed map to raw bits.
BitVec apply_subst(const SubstMap& map, const BitVec& x);

/// {s}; throws OutOfRange if s ∉ D.
Elem atom(const CarrierRef& d, const Seq& s);

/// Smallest permutable superset: the orbit of D under all permutations.
CarrierRef permutable_closure(const CarrierRef& d, const Limits& limits = {});

/// Least subset of ℘(D) containing the generators, 0 and 1, closed under
/// meet, complement and S_ij for every transposition. Sorted by numeric
/// bit-vector order.
std::vector<Elem> generate_subalgebra(const CarrierRef& d,
                                      std::span<const Elem> generators,
                                      const Limits& limits = {});

/// Positions in `big` of every member of `sub`; throws NotSubCarrier.
std::vector<std::size_t> embedding_positions(const Carrier& sub,
                                             const Carrier& big);

/// h(x) = x ∩ G, as an element of ℘(G).
Elem relativize(const Elem& x, const CarrierRef& g);
/// Same, with positions precomputed by embedding_positions.
BitVec relativize_bits(const BitVec& x, std::span<const std::size_t> embed);

/// Order-preserving renaming of the base values occurring in D onto
/// {0..m-1}. `renaming` lists (old, new) pairs in ascending order.
struct CanonicalBase {
  CarrierRef carrier;
  std::vector<std::pair<Value, Value>> renaming;
};
CanonicalBase canonicalize_base(const CarrierRef& d);

/// Moves x ⊆ D to the carrier `target` by renaming every entry through
/// `renaming`; every renamed member must lie in `target`.
Elem rebase(const Elem& x, const CarrierRef& target,
            std::span<const std::pair<Value, Value>> renaming);

/// A_nk: the full algebra ℘(^n k).
struct SmallAlgebra {
  Dim n = 0;
  BaseSize k = 0;
  CarrierRef carrier;
};
SmallAlgebra small_algebra(Dim n, BaseSize k, const Limits& limits = {});

/// Direct product of powerset algebras, operations componentwise.
struct Product {
  std::vector<CarrierRef> factors;
};

struct ProductElem {
  std::vector<Elem> components;

  friend bool operator==(const ProductElem&, const ProductElem&) = default;
};

Product make_product(std::vector<CarrierRef> factors);
ProductElem p_zero(const Product& p);
ProductElem p_one(const Product& p);
ProductElem p_meet(const ProductElem& x, const ProductElem& y);
ProductElem p_join(const ProductElem& x, const ProductElem& y);
ProductElem p_complement(const ProductElem& x);
ProductElem p_subst(const Perm& f, const ProductElem& x);
bool p_is_zero(const ProductElem& x);

std::string to_string(const Elem& x);  // "{(0,1),(1,0)}"

}  // namespace tra
