#include "tra/algspec.hpp"

#include <cctype>
#include <set>
#include <variant>

#include "tra/error.hpp"

namespace tra {

namespace {

// A value on the right of '=': a natural, a bare word, or a nested list.
struct SpecValue {
  std::size_t offset = 0;
  std::variant<std::uint64_t, std::string, std::vector<SpecValue>> v;
};

class SpecParser {
 public:
  explicit SpecParser(std::string_view text) : text_(text) {}

  AlgebraSpec parse() {
    std::optional<std::uint64_t> n;
    std::optional<std::uint64_t> base;
    std::optional<SpecValue> carrier;
    std::set<std::string> seen;
    for (skip(); pos_ < text_.size(); skip()) {
      const std::size_t key_pos = pos_;
      const std::string key = word();
      if (key.empty()) fail("expected a key", pos_);
      if (!seen.insert(key).second) fail("duplicate key '" + key + "'", key_pos);
      skip();
      if (pos_ >= text_.size() || text_[pos_] != '=') fail("expected '='", pos_);
      ++pos_;
      SpecValue value = parse_value();
      if (key == "n") {
        n = natural(value, "n");
      } else if (key == "base") {
        base = natural(value, "base");
      } else if (key == "carrier") {
        carrier = std::move(value);
      } else {
        fail("unknown key '" + key + "'", key_pos);
      }
    }
    if (!n) fail("missing key 'n'", pos_);
    if (!base) fail("missing key 'base'", pos_);
    if (!carrier) fail("missing key 'carrier'", pos_);
    if (*n > 64) fail("dimension too large", 0);

    AlgebraSpec spec;
    spec.n = static_cast<Dim>(*n);
    spec.base = static_cast<BaseSize>(*base);
    if (const auto* w = std::get_if<std::string>(&carrier->v)) {
      if (*w != "full") fail("carrier must be 'full' or a list", carrier->offset);
      return spec;
    }
    const auto* list = std::get_if<std::vector<SpecValue>>(&carrier->v);
    if (!list) fail("carrier must be 'full' or a list", carrier->offset);
    std::vector<Seq> seqs;
    for (const SpecValue& item : *list) {
      const auto* entries = std::get_if<std::vector<SpecValue>>(&item.v);
      if (!entries) fail("sequence must be a bracketed list", item.offset);
      if (entries->size() != spec.n) {
        fail("sequence has length " + std::to_string(entries->size()) +
                 ", expected " + std::to_string(spec.n),
             item.offset);
      }
      Seq s;
      for (const SpecValue& e : *entries) {
        const std::uint64_t v = natural(e, "sequence entry");
        if (v >= spec.base) {
          fail("entry " + std::to_string(v) + " outside base size " +
                   std::to_string(spec.base),
               e.offset);
        }
        s.entries.push_back(static_cast<Value>(v));
      }
      seqs.push_back(std::move(s));
    }
    spec.seqs = std::move(seqs);
    return spec;
  }

 private:
  [[noreturn]] void fail(const std::string& message, std::size_t at) const {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(message, at, line, column);
  }

  void skip() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  std::string word() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_')) {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  std::uint64_t natural(const SpecValue& v, const char* what) const {
    const auto* n = std::get_if<std::uint64_t>(&v.v);
    if (!n) fail(std::string(what) + " must be a natural number", v.offset);
    return *n;
  }

  SpecValue parse_value() {
    skip();
    SpecValue out;
    out.offset = pos_;
    if (pos_ >= text_.size()) fail("expected a value", pos_);
    if (text_[pos_] == '[') {
      ++pos_;
      std::vector<SpecValue> items;
      skip();
      if (pos_ < text_.size() && text_[pos_] == ']') {
        ++pos_;
        out.v = std::move(items);
        return out;
      }
      for (;;) {
        items.push_back(parse_value());
        skip();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (pos_ < text_.size() && text_[pos_] == ']') {
          ++pos_;
          break;
        }
        fail("expected ',' or ']'", pos_);
      }
      out.v = std::move(items);
      return out;
    }
    const std::string w = word();
    if (w.empty()) fail("expected a value", pos_);
    if (std::isdigit(static_cast<unsigned char>(w[0]))) {
      std::uint64_t v = 0;
      for (char c : w) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
          fail("malformed number", out.offset);
        }
        if (v > 100'000'000) fail("number too large", out.offset);
        v = v * 10 + static_cast<std::uint64_t>(c - '0');
      }
      out.v = v;
    } else {
      out.v = w;
    }
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

CarrierRef AlgebraSpec::build(const Limits& limits) const {
  if (!seqs) return Carrier::full(n, base, limits);
  return Carrier::from_seqs(n, base, *seqs, limits);
}

AlgebraSpec parse_algebra_spec(std::string_view text) {
  return SpecParser(text).parse();
}

std::string print_algebra_spec(const AlgebraSpec& spec) {
  std::string out = "n = " + std::to_string(spec.n) + "\n";
  out += "base = " + std::to_string(spec.base) + "\n";
  if (!spec.seqs) {
    out += "carrier = full\n";
    return out;
  }
  out += "carrier = [";
  for (std::size_t i = 0; i < spec.seqs->size(); ++i) {
    if (i) out += ", ";
    out += '[';
    const Seq& s = (*spec.seqs)[i];
    for (std::size_t j = 0; j < s.entries.size(); ++j) {
      if (j) out += ',';
      out += std::to_string(s.entries[j]);
    }
    out += ']';
  }
  out += "]\n";
  return out;
}

AlgebraSpec spec_of(const Carrier& d) {
  AlgebraSpec spec{d.dim(), d.base(), std::nullopt};
  if (!d.is_full()) spec.seqs = d.members();
  return spec;
}

}  // namespace tra
