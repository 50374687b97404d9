#include "tra/seqspace.hpp"

#include <algorithm>
#include <numeric>

#include "tra/error.hpp"

namespace tra {

namespace {

void require_same_dim(Dim a, Dim b, const char* what) {
  if (a != b) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": dimension " + std::to_string(a) +
                    " vs " + std::to_string(b));
  }
}

}  // namespace

Perm::Perm(std::vector<Dim> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (Dim v : images_) {
    if (v >= images_.size() || seen[v]) {
      throw Error(ErrorCode::NotAPermutation, "not a permutation: " +
                                                  to_string(*this));
    }
    seen[v] = true;
  }
}

Perm Perm::identity(Dim n) {
  std::vector<Dim> images(n);
  std::iota(images.begin(), images.end(), Dim{0});
  return Perm(std::move(images));
}

bool Perm::is_identity() const noexcept {
  for (Dim i = 0; i < images_.size(); ++i) {
    if (images_[i] != i) return false;
  }
  return true;
}

std::uint64_t space_size(Dim n, BaseSize u) {
  std::uint64_t size = 1;
  for (Dim i = 0; i < n; ++i) {
    if (u != 0 && size > UINT64_MAX / u) {
      throw Error(ErrorCode::OutOfRange,
                  "space ^" + std::to_string(n) + " " + std::to_string(u) +
                      " does not fit in 64 bits");
    }
    size *= u;
  }
  return size;
}

SpaceRank rank(const Seq& s, BaseSize u) {
  std::uint64_t r = 0;
  for (Value v : s.entries) {
    if (v >= u) {
      throw Error(ErrorCode::OutOfRange, "entry " + std::to_string(v) +
                                             " outside base size " +
                                             std::to_string(u));
    }
    r = r * u + v;
  }
  return SpaceRank{r};
}

Seq unrank(SpaceRank r, Dim n, BaseSize u) {
  if (r.value >= space_size(n, u)) {
    throw Error(ErrorCode::OutOfRange,
                "rank " + std::to_string(r.value) + " outside ^" +
                    std::to_string(n) + " " + std::to_string(u));
  }
  Seq s{std::vector<Value>(n, 0)};
  std::uint64_t rest = r.value;
  for (Dim i = n; i-- > 0;) {
    s.entries[i] = static_cast<Value>(rest % u);
    rest /= u;
  }
  return s;
}

Seq compose_right(const Seq& s, const Perm& f) {
  require_same_dim(s.dim(), f.dim(), "compose_right");
  Seq t{std::vector<Value>(s.dim())};
  for (Dim i = 0; i < s.dim(); ++i) t.entries[i] = s.entries[f(i)];
  return t;
}

Perm transposition(Dim n, Dim i, Dim j) {
  if (i == j) {
    throw Error(ErrorCode::InvalidArgument,
                "transposition needs distinct coordinates");
  }
  if (i >= n || j >= n) {
    throw Error(ErrorCode::OutOfRange, "transposition [" + std::to_string(i) +
                                           "," + std::to_string(j) +
                                           "] outside dimension " +
                                           std::to_string(n));
  }
  std::vector<Dim> images(n);
  std::iota(images.begin(), images.end(), Dim{0});
  std::swap(images[i], images[j]);
  return Perm(std::move(images));
}

Perm perm_compose(const Perm& f, const Perm& g) {
  require_same_dim(f.dim(), g.dim(), "perm_compose");
  std::vector<Dim> images(f.dim());
  for (Dim i = 0; i < f.dim(); ++i) images[i] = f(g(i));
  return Perm(std::move(images));
}

Perm perm_inverse(const Perm& f) {
  std::vector<Dim> images(f.dim());
  for (Dim i = 0; i < f.dim(); ++i) images[f(i)] = i;
  return Perm(std::move(images));
}

Perm perm_from_images(std::span<const Dim> images) {
  return Perm(std::vector<Dim>(images.begin(), images.end()));
}

Seq unit_seq(Dim n, Dim i) {
  if (i >= n) {
    throw Error(ErrorCode::OutOfRange, "unit sequence index " +
                                           std::to_string(i) +
                                           " outside dimension " +
                                           std::to_string(n));
  }
  Seq s{std::vector<Value>(n, 0)};
  s.entries[i] = 1;
  return s;
}

Seq constant_seq(Dim n, Value v) { return Seq{std::vector<Value>(n, v)}; }

bool is_constant(const Seq& s) {
  return std::adjacent_find(s.entries.begin(), s.entries.end(),
                            std::not_equal_to<>()) == s.entries.end();
}

Perm forward_cycle(Dim n) {
  std::vector<Dim> images(n);
  for (Dim i = 0; i < n; ++i) images[i] = (i + 1) % n;
  return Perm(std::move(images));
}

Perm backward_cycle(Dim n) {
  std::vector<Dim> images(n);
  for (Dim i = 0; i < n; ++i) images[i] = (i + n - 1) % n;
  return Perm(std::move(images));
}

std::vector<Perm> all_perms(Dim n) {
  std::vector<Dim> images(n);
  std::iota(images.begin(), images.end(), Dim{0});
  std::vector<Perm> out;
  do {
    out.emplace_back(images);
  } while (std::next_permutation(images.begin(), images.end()));
  return out;
}

std::vector<Perm> all_transpositions(Dim n) {
  std::vector<Perm> out;
  for (Dim i = 0; i < n; ++i) {
    for (Dim j = i + 1; j < n; ++j) out.push_back(transposition(n, i, j));
  }
  return out;
}

namespace {

template <typename Range>
std::string join_list(const Range& r, char open, char close) {
  std::string s(1, open);
  bool first = true;
  for (auto v : r) {
    if (!first) s += ',';
    first = false;
    s += std::to_string(v);
  }
  s += close;
  return s;
}

}  // namespace

std::string to_string(const Seq& s) { return join_list(s.entries, '(', ')'); }
std::string to_string(const Perm& f) { return join_list(f.images(), '[', ']'); }

}  // namespace tra
