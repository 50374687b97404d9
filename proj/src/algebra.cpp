#include "tra/algebra.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "tra/error.hpp"

namespace tra {

namespace {

std::atomic<std::uint64_t> g_next_carrier_id{1};

// Mixed-radix digits of `r` into `out` (coordinate 0 most significant).
void decode(std::uint64_t r, Dim n, BaseSize u, Value* out) {
  for (Dim i = n; i-- > 0;) {
    out[i] = static_cast<Value>(r % u);
    r /= u;
  }
}

std::uint64_t encode(const Value* digits, Dim n, BaseSize u) {
  std::uint64_t r = 0;
  for (Dim i = 0; i < n; ++i) r = r * u + digits[i];
  return r;
}

void check_member_cap(std::uint64_t size, const Limits& limits) {
  if (size > limits.max_carrier_members) {
    throw Error(ErrorCode::BudgetExceeded,
                "carrier of " + std::to_string(size) +
                    " members exceeds the cap of " +
                    std::to_string(limits.max_carrier_members));
  }
}

}  // namespace

Carrier::Carrier(Token, Dim n, BaseSize u, std::vector<std::uint64_t> members,
                 bool full)
    : n_(n),
      u_(u),
      members_(std::move(members)),
      full_(full),
      id_(g_next_carrier_id.fetch_add(1, std::memory_order_relaxed)) {
  if (full_) permutable_.store(1);
}

CarrierRef Carrier::full(Dim n, BaseSize k, const Limits& limits) {
  const std::uint64_t size = space_size(n, k);
  check_member_cap(size, limits);
  std::vector<std::uint64_t> members(size);
  for (std::uint64_t r = 0; r < size; ++r) members[r] = r;
  return std::make_shared<const Carrier>(Token{}, n, k, std::move(members),
                                         true);
}

CarrierRef Carrier::from_seqs(Dim n, BaseSize u, std::span<const Seq> seqs,
                              const Limits& limits) {
  std::vector<std::uint64_t> ranks;
  ranks.reserve(seqs.size());
  for (const Seq& s : seqs) {
    if (s.dim() != n) {
      throw Error(ErrorCode::DimensionMismatch,
                  "sequence " + to_string(s) + " is not of dimension " +
                      std::to_string(n));
    }
    ranks.push_back(rank(s, u).value);
  }
  return from_ranks(n, u, std::move(ranks), limits);
}

CarrierRef Carrier::from_ranks(Dim n, BaseSize u,
                               std::vector<std::uint64_t> ranks,
                               const Limits& limits) {
  const std::uint64_t space = space_size(n, u);
  std::sort(ranks.begin(), ranks.end());
  ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());
  if (!ranks.empty() && ranks.back() >= space) {
    throw Error(ErrorCode::OutOfRange, "rank outside the sequence space");
  }
  check_member_cap(ranks.size(), limits);
  const bool full = ranks.size() == space;
  return std::make_shared<const Carrier>(Token{}, n, u, std::move(ranks),
                                         full);
}

Seq Carrier::member(std::size_t pos) const {
  return unrank(SpaceRank{members_.at(pos)}, n_, u_);
}

std::vector<Seq> Carrier::members() const {
  std::vector<Seq> out;
  out.reserve(members_.size());
  for (std::size_t p = 0; p < members_.size(); ++p) out.push_back(member(p));
  return out;
}

std::optional<std::size_t> Carrier::position_of(SpaceRank r) const {
  if (full_) {
    if (r.value < members_.size()) return static_cast<std::size_t>(r.value);
    return std::nullopt;
  }
  auto it = std::lower_bound(members_.begin(), members_.end(), r.value);
  if (it == members_.end() || *it != r.value) return std::nullopt;
  return static_cast<std::size_t>(it - members_.begin());
}

std::optional<std::size_t> Carrier::position_of(const Seq& s) const {
  if (s.dim() != n_) return std::nullopt;
  for (Value v : s.entries) {
    if (v >= u_) return std::nullopt;
  }
  return position_of(rank(s, u_));
}

bool Carrier::is_permutable() const {
  if (const int cached = permutable_.load(); cached >= 0) return cached == 1;
  bool ok = true;
  std::vector<Value> digits(n_);
  for (std::uint64_t r : members_) {
    decode(r, n_, u_, digits.data());
    for (Dim i = 0; i < n_ && ok; ++i) {
      for (Dim j = i + 1; j < n_ && ok; ++j) {
        if (digits[i] == digits[j]) continue;
        std::swap(digits[i], digits[j]);
        ok = position_of(SpaceRank{encode(digits.data(), n_, u_)}).has_value();
        std::swap(digits[i], digits[j]);
      }
    }
    if (!ok) break;
  }
  permutable_.store(ok ? 1 : 0);
  return ok;
}

std::shared_ptr<const SubstMap> Carrier::subst_map(const Perm& f) const {
  if (f.dim() != n_) {
    throw Error(ErrorCode::DimensionMismatch,
                "permutation " + to_string(f) + " does not act on dimension " +
                    std::to_string(n_));
  }
  {
    std::lock_guard lock(subst_mutex_);
    if (auto it = subst_cache_.find(f.images()); it != subst_cache_.end()) {
      return it->second;
    }
  }
  auto map = std::make_shared<SubstMap>();
  map->target.resize(members_.size());
  std::vector<Value> digits(n_);
  std::vector<Value> moved(n_);
  for (std::size_t p = 0; p < members_.size(); ++p) {
    decode(members_[p], n_, u_, digits.data());
    for (Dim i = 0; i < n_; ++i) moved[i] = digits[f(i)];
    const auto pos = position_of(SpaceRank{encode(moved.data(), n_, u_)});
    map->target[p] = pos ? static_cast<std::int64_t>(*pos) : SubstMap::kOutside;
  }
  std::lock_guard lock(subst_mutex_);
  auto [it, inserted] = subst_cache_.emplace(f.images(), std::move(map));
  return it->second;
}

bool Carrier::is_subcarrier_of(const Carrier& o) const {
  if (n_ != o.n_ || u_ != o.u_) return false;
  if (o.full_) return true;
  return std::includes(o.members_.begin(), o.members_.end(), members_.begin(),
                       members_.end());
}

void require_same_carrier(const Carrier& a, const Carrier& b) {
  if (a.id() == b.id() || a.same_structure(b)) return;
  throw Error(ErrorCode::CarrierMismatch,
              "operands belong to different carriers");
}

Elem::Elem(CarrierRef carrier, BitVec bits)
    : carrier_(std::move(carrier)), bits_(std::move(bits)) {
  if (!carrier_) throw Error(ErrorCode::InvalidArgument, "null carrier");
  if (bits_.size() != carrier_->size()) {
    throw Error(ErrorCode::InvalidArgument,
                "bit vector length " + std::to_string(bits_.size()) +
                    " does not match carrier size " +
                    std::to_string(carrier_->size()));
  }
}

bool Elem::contains(const Seq& s) const {
  const auto pos = carrier_->position_of(s);
  return pos && bits_.test(*pos);
}

std::vector<Seq> Elem::seqs() const {
  std::vector<Seq> out;
  bits_.for_each_set([&](std::size_t p) { out.push_back(carrier_->member(p)); });
  return out;
}

bool operator==(const Elem& a, const Elem& b) {
  return (a.carrier_->id() == b.carrier_->id() ||
          a.carrier_->same_structure(*b.carrier_)) &&
         a.bits_ == b.bits_;
}

Elem elem_from_word(const CarrierRef& d, std::uint64_t value) {
  if (d->size() > 64) {
    throw Error(ErrorCode::OutOfRange,
                "elem_from_word needs a carrier of at most 64 members");
  }
  return Elem(d, BitVec::from_word(d->size(), value));
}

Elem elem_from_seqs(const CarrierRef& d, std::span<const Seq> seqs) {
  BitVec bits(d->size());
  for (const Seq& s : seqs) {
    const auto pos = d->position_of(s);
    if (!pos) {
      throw Error(ErrorCode::OutOfRange,
                  "sequence " + to_string(s) + " is not in the carrier");
    }
    bits.set(*pos);
  }
  return Elem(d, std::move(bits));
}

Elem zero(const CarrierRef& d) { return Elem(d, BitVec(d->size(), false)); }
Elem one(const CarrierRef& d) { return Elem(d, BitVec(d->size(), true)); }

Elem meet(const Elem& x, const Elem& y) {
  require_same_carrier(x.carrier(), y.carrier());
  return Elem(x.carrier_ref(), x.bits() & y.bits());
}

Elem join(const Elem& x, const Elem& y) {
  require_same_carrier(x.carrier(), y.carrier());
  return Elem(x.carrier_ref(), x.bits() | y.bits());
}

Elem complement(const Elem& x) { return Elem(x.carrier_ref(), ~x.bits()); }

bool is_zero(const Elem& x) { return x.bits().none(); }

bool leq(const Elem& x, const Elem& y) {
  require_same_carrier(x.carrier(), y.carrier());
  return x.bits().subset_of(y.bits());
}

BitVec apply_subst(const SubstMap& map, const BitVec& x) {
  BitVec out(map.target.size());
  for (std::size_t p = 0; p < map.target.size(); ++p) {
    const std::int64_t t = map.target[p];
    if (t != SubstMap::kOutside && x.test(static_cast<std::size_t>(t))) {
      out.set(p);
    }
  }
  return out;
}

Elem subst(const Perm& f, const Elem& x) {
  const auto map = x.carrier().subst_map(f);
  return Elem(x.carrier_ref(), apply_subst(*map, x.bits()));
}

Elem atom(const CarrierRef& d, const Seq& s) {
  const auto pos = d->position_of(s);
  if (!pos) {
    throw Error(ErrorCode::OutOfRange,
                "sequence " + to_string(s) + " is not in the carrier");
  }
  BitVec bits(d->size());
  bits.set(*pos);
  return Elem(d, std::move(bits));
}

CarrierRef permutable_closure(const CarrierRef& d, const Limits& limits) {
  if (d->is_permutable()) return d;
  const Dim n = d->dim();
  const BaseSize u = d->base();
  std::unordered_set<std::uint64_t> seen(d->member_ranks().begin(),
                                         d->member_ranks().end());
  std::deque<std::uint64_t> frontier(d->member_ranks().begin(),
                                     d->member_ranks().end());
  std::vector<Value> digits(n);
  while (!frontier.empty()) {
    const std::uint64_t r = frontier.front();
    frontier.pop_front();
    decode(r, n, u, digits.data());
    for (Dim i = 0; i < n; ++i) {
      for (Dim j = i + 1; j < n; ++j) {
        if (digits[i] == digits[j]) continue;
        std::swap(digits[i], digits[j]);
        const std::uint64_t t = encode(digits.data(), n, u);
        std::swap(digits[i], digits[j]);
        if (seen.insert(t).second) {
          check_member_cap(seen.size(), limits);
          frontier.push_back(t);
        }
      }
    }
  }
  return Carrier::from_ranks(n, u, {seen.begin(), seen.end()}, limits);
}

std::vector<Elem> generate_subalgebra(const CarrierRef& d,
                                      std::span<const Elem> generators,
                                      const Limits& limits) {
  std::vector<std::shared_ptr<const SubstMap>> maps;
  for (const Perm& t : all_transpositions(d->dim())) {
    maps.push_back(d->subst_map(t));
  }

  std::unordered_set<BitVec, BitVecHash> seen;
  std::vector<BitVec> accepted;
  std::deque<BitVec> pending;
  auto offer = [&](BitVec b) {
    if (seen.insert(b).second) {
      if (seen.size() > limits.max_subalgebra_elems) {
        throw Error(ErrorCode::BudgetExceeded,
                    "generated subalgebra exceeds " +
                        std::to_string(limits.max_subalgebra_elems) +
                        " elements");
      }
      pending.push_back(std::move(b));
    }
  };

  offer(BitVec(d->size(), false));
  offer(BitVec(d->size(), true));
  for (const Elem& g : generators) {
    require_same_carrier(*d, g.carrier());
    offer(g.bits());
  }
  while (!pending.empty()) {
    BitVec b = std::move(pending.front());
    pending.pop_front();
    offer(~b);
    for (const auto& m : maps) offer(apply_subst(*m, b));
    for (std::size_t i = 0, end = accepted.size(); i < end; ++i) {
      offer(accepted[i] & b);
    }
    accepted.push_back(std::move(b));
  }

  std::sort(accepted.begin(), accepted.end());
  std::vector<Elem> out;
  out.reserve(accepted.size());
  for (BitVec& b : accepted) out.emplace_back(d, std::move(b));
  return out;
}

std::vector<std::size_t> embedding_positions(const Carrier& sub,
                                             const Carrier& big) {
  if (!sub.is_subcarrier_of(big)) {
    throw Error(ErrorCode::NotSubCarrier,
                "carrier is not a sub-carrier of the source carrier");
  }
  std::vector<std::size_t> out;
  out.reserve(sub.size());
  for (std::uint64_t r : sub.member_ranks()) {
    out.push_back(*big.position_of(SpaceRank{r}));
  }
  return out;
}

BitVec relativize_bits(const BitVec& x, std::span<const std::size_t> embed) {
  BitVec out(embed.size());
  for (std::size_t p = 0; p < embed.size(); ++p) {
    if (x.test(embed[p])) out.set(p);
  }
  return out;
}

Elem relativize(const Elem& x, const CarrierRef& g) {
  const auto embed = embedding_positions(*g, x.carrier());
  return Elem(g, relativize_bits(x.bits(), embed));
}

CanonicalBase canonicalize_base(const CarrierRef& d) {
  const Dim n = d->dim();
  std::vector<bool> used(d->base(), false);
  std::vector<Value> digits(n);
  for (std::uint64_t r : d->member_ranks()) {
    decode(r, n, d->base(), digits.data());
    for (Value v : digits) used[v] = true;
  }
  CanonicalBase out;
  std::vector<Value> to_new(d->base(), 0);
  Value next = 0;
  for (Value v = 0; v < d->base(); ++v) {
    if (used[v]) {
      to_new[v] = next;
      out.renaming.emplace_back(v, next);
      ++next;
    }
  }
  std::vector<std::uint64_t> ranks;
  ranks.reserve(d->size());
  for (std::uint64_t r : d->member_ranks()) {
    decode(r, n, d->base(), digits.data());
    for (Value& v : digits) v = to_new[v];
    ranks.push_back(encode(digits.data(), n, next));
  }
  out.carrier = Carrier::from_ranks(n, next, std::move(ranks));
  return out;
}

Elem rebase(const Elem& x, const CarrierRef& target,
            std::span<const std::pair<Value, Value>> renaming) {
  const Carrier& src = x.carrier();
  if (src.dim() != target->dim()) {
    throw Error(ErrorCode::DimensionMismatch, "rebase across dimensions");
  }
  std::vector<std::optional<Value>> to_new(src.base());
  for (auto [from, to] : renaming) {
    if (from < src.base()) to_new[from] = to;
  }
  BitVec out(target->size());
  std::vector<Value> digits(src.dim());
  for (std::size_t p = 0; p < src.size(); ++p) {
    if (!x.bits().test(p)) continue;
    decode(src.member_ranks()[p], src.dim(), src.base(), digits.data());
    Seq renamed{std::vector<Value>(src.dim())};
    for (Dim i = 0; i < src.dim(); ++i) {
      if (!to_new[digits[i]]) {
        throw Error(ErrorCode::InvalidArgument,
                    "renaming does not cover base value " +
                        std::to_string(digits[i]));
      }
      renamed.entries[i] = *to_new[digits[i]];
    }
    const auto pos = target->position_of(renamed);
    if (!pos) {
      throw Error(ErrorCode::NotSubCarrier,
                  "renamed sequence " + to_string(renamed) +
                      " is not in the target carrier");
    }
    out.set(*pos);
  }
  return Elem(target, std::move(out));
}

SmallAlgebra small_algebra(Dim n, BaseSize k, const Limits& limits) {
  return SmallAlgebra{n, k, Carrier::full(n, k, limits)};
}

Product make_product(std::vector<CarrierRef> factors) {
  return Product{std::move(factors)};
}

namespace {

void require_same_arity(const ProductElem& x, const ProductElem& y) {
  if (x.components.size() != y.components.size()) {
    throw Error(ErrorCode::InvalidArgument, "product factor count mismatch");
  }
}

template <typename F>
ProductElem map_components(const ProductElem& x, F&& fn) {
  ProductElem out;
  out.components.reserve(x.components.size());
  for (const Elem& c : x.components) out.components.push_back(fn(c));
  return out;
}

}  // namespace

ProductElem p_zero(const Product& p) {
  ProductElem out;
  for (const auto& f : p.factors) out.components.push_back(zero(f));
  return out;
}

ProductElem p_one(const Product& p) {
  ProductElem out;
  for (const auto& f : p.factors) out.components.push_back(one(f));
  return out;
}

ProductElem p_meet(const ProductElem& x, const ProductElem& y) {
  require_same_arity(x, y);
  ProductElem out;
  for (std::size_t i = 0; i < x.components.size(); ++i) {
    out.components.push_back(meet(x.components[i], y.components[i]));
  }
  return out;
}

ProductElem p_join(const ProductElem& x, const ProductElem& y) {
  require_same_arity(x, y);
  ProductElem out;
  for (std::size_t i = 0; i < x.components.size(); ++i) {
    out.components.push_back(join(x.components[i], y.components[i]));
  }
  return out;
}

ProductElem p_complement(const ProductElem& x) {
  return map_components(x, [](const Elem& c) { return complement(c); });
}

ProductElem p_subst(const Perm& f, const ProductElem& x) {
  return map_components(x, [&](const Elem& c) { return subst(f, c); });
}

bool p_is_zero(const ProductElem& x) {
  return std::all_of(x.components.begin(), x.components.end(),
                     [](const Elem& c) { return is_zero(c); });
}

std::string to_string(const Elem& x) {
  std::string s = "{";
  bool first = true;
  for (const Seq& q : x.seqs()) {
    if (!first) s += ',';
    first = false;
    s += to_string(q);
  }
  s += '}';
  return s;
}

}  // namespace tra
