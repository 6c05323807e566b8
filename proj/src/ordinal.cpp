#include "schreier/ordinal.hpp"

#include <algorithm>
#include <cctype>

#include "schreier/error.hpp"

namespace schreier {

Ordinal::Ordinal() = default;
Ordinal::Ordinal(const Ordinal&) = default;
Ordinal::Ordinal(Ordinal&&) noexcept = default;
Ordinal& Ordinal::operator=(const Ordinal&) = default;
Ordinal& Ordinal::operator=(Ordinal&&) noexcept = default;
Ordinal::~Ordinal() = default;

Ordinal::Ordinal(std::vector<Term> terms) : terms_(std::move(terms)) {}

namespace {

void check_height(const Ordinal& o) {
  if (o.tower_height() > kMaxTowerHeight)
    throw DomainError("ordinal exceeds representable tower height " + std::to_string(kMaxTowerHeight));
}

}  // namespace

Ordinal Ordinal::natural(const BigInt& n) {
  if (n < 0) throw DomainError("negative natural number");
  if (n == 0) return Ordinal();
  return Ordinal(std::vector<Term>{Term{Ordinal(), n}});
}

Ordinal Ordinal::omega() { return omega_power(natural(1)); }

Ordinal Ordinal::omega_power(const Ordinal& exponent, const BigInt& coefficient) {
  if (coefficient < 0) throw DomainError("negative coefficient");
  if (coefficient == 0) return Ordinal();
  Ordinal r(std::vector<Term>{Term{exponent, coefficient}});
  check_height(r);
  return r;
}

bool Ordinal::is_finite() const noexcept { return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero()); }

bool Ordinal::is_successor() const noexcept { return !terms_.empty() && terms_.back().exponent.is_zero(); }

std::optional<std::uint64_t> Ordinal::to_natural() const {
  if (!is_finite()) return std::nullopt;
  if (terms_.empty()) return 0;
  const BigInt& c = terms_[0].coefficient;
  if (!c.fits_ulong_p()) return std::nullopt;
  return static_cast<std::uint64_t>(c.get_ui());
}

Ordinal Ordinal::predecessor() const {
  if (!is_successor()) throw DomainError("predecessor of a non-successor ordinal " + str());
  std::vector<Term> t = terms_;
  if (t.back().coefficient == 1)
    t.pop_back();
  else
    t.back().coefficient -= 1;
  return Ordinal(std::move(t));
}

Ordinal Ordinal::fundamental(std::uint64_t n) const {
  if (!is_limit()) throw DomainError("fundamental sequence of a non-limit ordinal " + str());
  if (n == 0) throw DomainError("fundamental sequence index must be positive");
  std::vector<Term> base = terms_;
  Term last = base.back();
  if (last.coefficient == 1)
    base.pop_back();
  else
    base.back().coefficient -= 1;
  Ordinal head(std::move(base));
  if (last.exponent.is_successor())
    return head + omega_power(last.exponent.predecessor(), BigInt(static_cast<unsigned long>(n)));
  return head + omega_power(last.exponent.fundamental(n));
}

unsigned Ordinal::tower_height() const noexcept {
  unsigned h = 0;
  for (const auto& t : terms_)
    if (!t.exponent.is_zero()) h = std::max(h, 1 + t.exponent.tower_height());
  return h;
}

Comparison compare(const Ordinal& a, const Ordinal& b) {
  std::size_t k = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < k; ++i) {
    Comparison e = compare(a.terms_[i].exponent, b.terms_[i].exponent);
    if (e != Comparison::equal) return e;
    int c = cmp(a.terms_[i].coefficient, b.terms_[i].coefficient);
    if (c != 0) return c < 0 ? Comparison::less : Comparison::greater;
  }
  if (a.terms_.size() == b.terms_.size()) return Comparison::equal;
  return a.terms_.size() < b.terms_.size() ? Comparison::less : Comparison::greater;
}

std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
  switch (compare(a, b)) {
    case Comparison::less: return std::strong_ordering::less;
    case Comparison::greater: return std::strong_ordering::greater;
    default: return std::strong_ordering::equal;
  }
}

Ordinal operator+(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  const Ordinal& lead = b.terms_.front().exponent;
  std::vector<Ordinal::Term> t;
  for (const auto& term : a.terms_) {
    Comparison c = compare(term.exponent, lead);
    if (c == Comparison::greater) {
      t.push_back(term);
    } else if (c == Comparison::equal) {
      t.push_back(Ordinal::Term{term.exponent, term.coefficient + b.terms_.front().coefficient});
      break;
    } else {
      break;
    }
  }
  bool merged = !t.empty() && compare(t.back().exponent, lead) == Comparison::equal;
  for (std::size_t i = merged ? 1 : 0; i < b.terms_.size(); ++i) t.push_back(b.terms_[i]);
  Ordinal r(std::move(t));
  check_height(r);
  return r;
}

// (sum_i w^{a_i} c_i) * (sum_j w^{b_j} d_j): each term of b with b_j > 0 contributes
// w^{a_1 + b_j} d_j; a finite tail d contributes a with its leading coefficient times d.
Ordinal operator*(const Ordinal& a, const Ordinal& b) {
  if (a.is_zero() || b.is_zero()) return Ordinal();
  std::vector<Ordinal::Term> t;
  const Ordinal& a1 = a.terms_.front().exponent;
  for (const auto& term : b.terms_) {
    if (!term.exponent.is_zero()) {
      t.push_back(Ordinal::Term{a1 + term.exponent, term.coefficient});
    } else {
      t.push_back(Ordinal::Term{a1, a.terms_.front().coefficient * term.coefficient});
      for (std::size_t i = 1; i < a.terms_.size(); ++i) t.push_back(a.terms_[i]);
    }
  }
  Ordinal r(std::move(t));
  check_height(r);
  return r;
}

Ordinal omega_pow(const Ordinal& a) { return Ordinal::omega_power(a); }

namespace {

bool is_atomic(const Ordinal& e) {
  if (e.is_finite()) return true;
  return e.terms().size() == 1 && e.terms()[0].coefficient == 1;
}

std::string render(const Ordinal& o);

std::string render_atom(const Ordinal& e) {
  if (is_atomic(e)) return render(e);
  return "(" + render(e) + ")";
}

std::string render(const Ordinal& o) {
  if (o.is_zero()) return "0";
  std::string out;
  for (const auto& t : o.terms()) {
    if (!out.empty()) out += "+";
    if (t.exponent.is_zero()) {
      out += t.coefficient.get_str();
      continue;
    }
    out += "w";
    if (!(t.exponent.is_finite() && t.exponent.to_natural() == 1u)) out += "^" + render_atom(t.exponent);
    if (t.coefficient != 1) out += "*" + t.coefficient.get_str();
  }
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, unsigned max_height) : s_(text), max_height_(max_height) {}

  Ordinal run() {
    Ordinal r = expr(0);
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError("ordinal parse error: " + msg + " in '" + std::string(s_) + "'", pos_);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool accept_omega() {
    skip();
    if (pos_ < s_.size() && s_[pos_] == 'w') {
      ++pos_;
      return true;
    }
    static constexpr std::string_view kGlyph = "\xCF\x89";
    if (s_.substr(pos_, kGlyph.size()) == kGlyph) {
      pos_ += kGlyph.size();
      return true;
    }
    return false;
  }

  bool peek_digit() {
    skip();
    return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
  }

  BigInt nat() {
    if (!peek_digit()) fail("expected a natural number");
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return BigInt(std::string(s_.substr(start, pos_ - start)), 10);
  }

  Ordinal omega_tail(unsigned depth) {
    if (depth + 1 > max_height_) fail("tower height exceeds " + std::to_string(max_height_));
    Ordinal exponent = Ordinal::natural(1);
    if (accept('^')) exponent = atom(depth + 1);
    return Ordinal::omega_power(exponent);
  }

  Ordinal atom(unsigned depth) {
    if (peek_digit()) return Ordinal::natural(nat());
    if (accept_omega()) return omega_tail(depth);
    if (accept('(')) {
      Ordinal r = expr(depth);
      if (!accept(')')) fail("expected ')'");
      return r;
    }
    fail("expected an ordinal atom");
  }

  Ordinal term(unsigned depth) {
    if (peek_digit()) return Ordinal::natural(nat());
    if (accept_omega()) {
      Ordinal base = omega_tail(depth);
      if (accept('*')) {
        BigInt c = nat();
        return base * Ordinal::natural(c);
      }
      return base;
    }
    if (accept('(')) {
      Ordinal r = expr(depth);
      if (!accept(')')) fail("expected ')'");
      return r;
    }
    fail("expected an ordinal term");
  }

  Ordinal expr(unsigned depth) {
    Ordinal r = term(depth);
    while (accept('+')) r = r + term(depth);
    return r;
  }

  std::string_view s_;
  unsigned max_height_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string Ordinal::str() const { return render(*this); }

Ordinal Ordinal::parse(std::string_view text, unsigned max_height) {
  return Parser(text, max_height).run();
}

}  // namespace schreier
