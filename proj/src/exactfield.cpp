#include "phimod/exactfield.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace phimod {

Rational parse_rational(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (!s.empty() && s.front() == '+') s.erase(s.begin());
  auto valid = [](const std::string& part) {
    std::size_t start = (!part.empty() && part.front() == '-') ? 1 : 0;
    if (part.size() == start) return false;
    return std::all_of(part.begin() + static_cast<long>(start), part.end(),
                       [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)) != 0; });
  };
  const auto slash = s.find('/');
  const std::string num = s.substr(0, slash);
  const std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid(num) || !valid(den) || den.front() == '-')
    fail(ErrorKind::ParseError, "malformed rational '" + std::string(text) + "'");
  mpz_class n(num), dd(den);
  if (dd == 0) fail(ErrorKind::ParseError, "zero denominator in '" + std::string(text) + "'");
  Rational q(n, dd);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

long padic_valuation(const Rational& q, long p) {
  require(q != 0, ErrorKind::PreconditionViolated, "valuation of zero rational");
  auto v = [p](mpz_class n) {
    long count = 0;
    n = abs(n);
    const mpz_class pp(p);
    while (n % pp == 0) {
      n /= pp;
      ++count;
    }
    return count;
  };
  return v(q.get_num()) - v(q.get_den());
}

bool is_prime(long n) {
  if (n < 2) return false;
  for (long k = 2; k * k <= n; ++k)
    if (n % k == 0) return false;
  return true;
}

FieldSpec::FieldSpec(int ramification, long prime) : m(ramification), p(prime) {
  require(m >= 1, ErrorKind::InvalidField, "ramification m must be >= 1");
  require(is_prime(p), ErrorKind::InvalidField, "p = " + std::to_string(p) + " is not prime");
}

// ---------------------------------------------------------------- Val

const Rational& Val::value() const {
  require(!infinite_, ErrorKind::PreconditionViolated, "value() of infinite valuation");
  return value_;
}

bool operator==(const Val& a, const Val& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
  return a.value_ == b.value_;
}

std::strong_ordering operator<=>(const Val& a, const Val& b) {
  if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
  if (a.infinite_) return std::strong_ordering::greater;
  if (b.infinite_) return std::strong_ordering::less;
  const int c = cmp(a.value_, b.value_);
  return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

Val operator+(const Val& a, const Val& b) {
  if (a.infinite_ || b.infinite_) return Val::infinity();
  return Val(a.value_ + b.value_);
}

std::string Val::to_string() const { return infinite_ ? "inf" : phimod::to_string(value_); }

Val Val::parse(std::string_view text) {
  std::string s(text);
  if (s == "inf" || s == "+inf" || s == "infinity") return Val::infinity();
  return Val(parse_rational(s));
}

// ---------------------------------------------------------------- CoeffElem

CoeffElem::CoeffElem(FieldSpec field) : field_(field), c_(static_cast<std::size_t>(field.m)) {}

CoeffElem::CoeffElem(FieldSpec field, const Rational& q) : CoeffElem(field) { c_[0] = q; }

CoeffElem::CoeffElem(FieldSpec field, std::vector<Rational> coefficients)
    : field_(field), c_(std::move(coefficients)) {
  require(c_.size() == static_cast<std::size_t>(field_.m), ErrorKind::DimensionMismatch,
          "expected " + std::to_string(field_.m) + " coefficients");
}

CoeffElem CoeffElem::pi(FieldSpec field) {
  if (field.m == 1) return CoeffElem(field, Rational(field.p));
  CoeffElem r(field);
  r.c_[1] = 1;
  return r;
}

CoeffElem CoeffElem::monomial(FieldSpec field, const Rational& unit, const Rational& val) {
  require(unit != 0, ErrorKind::PreconditionViolated, "monomial unit must be nonzero");
  Rational scaled = val * field.m;
  require(scaled.get_den() == 1, ErrorKind::PreconditionViolated,
          "valuation " + phimod::to_string(val) + " not in (1/" + std::to_string(field.m) + ")Z");
  mpz_class k = scaled.get_num();
  mpz_class q, r;
  mpz_fdiv_qr_ui(q.get_mpz_t(), r.get_mpz_t(), k.get_mpz_t(), static_cast<unsigned long>(field.m));
  Rational coeff = unit;
  const long e = q.get_si();
  mpz_class pp(field.p), power;
  mpz_pow_ui(power.get_mpz_t(), pp.get_mpz_t(), static_cast<unsigned long>(e < 0 ? -e : e));
  if (e >= 0)
    coeff *= Rational(power);
  else
    coeff /= Rational(power);
  CoeffElem out(field);
  out.c_[static_cast<std::size_t>(r.get_si())] = coeff;
  return out;
}

bool CoeffElem::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const Rational& q) { return q == 0; });
}

bool CoeffElem::is_rational() const {
  return std::all_of(c_.begin() + 1, c_.end(), [](const Rational& q) { return q == 0; });
}

CoeffElem& CoeffElem::operator+=(const CoeffElem& b) {
  require(field_ == b.field_, ErrorKind::IncompatibleTower, "mixed fields in addition");
  for (std::size_t j = 0; j < c_.size(); ++j)
    if (b.c_[j] != 0) c_[j] += b.c_[j];
  return *this;
}

CoeffElem& CoeffElem::operator-=(const CoeffElem& b) {
  require(field_ == b.field_, ErrorKind::IncompatibleTower, "mixed fields in subtraction");
  for (std::size_t j = 0; j < c_.size(); ++j)
    if (b.c_[j] != 0) c_[j] -= b.c_[j];
  return *this;
}

CoeffElem operator*(const CoeffElem& a, const CoeffElem& b) {
  require(a.field_ == b.field_, ErrorKind::IncompatibleTower, "mixed fields in multiplication");
  const std::size_t m = a.c_.size();
  CoeffElem r(a.field_);
  if (a.is_rational() && b.is_rational()) {
    r.c_[0] = a.c_[0] * b.c_[0];
    return r;
  }
  const Rational p(a.field_.p);
  for (std::size_t i = 0; i < m; ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < m; ++j) {
      if (b.c_[j] == 0) continue;
      if (i + j < m)
        r.c_[i + j] += a.c_[i] * b.c_[j];
      else
        r.c_[i + j - m] += p * a.c_[i] * b.c_[j];
    }
  }
  return r;
}

CoeffElem& CoeffElem::operator*=(const CoeffElem& b) { return *this = *this * b; }

CoeffElem& CoeffElem::operator/=(const CoeffElem& b) { return *this = *this * b.inverse(); }

CoeffElem CoeffElem::operator-() const {
  CoeffElem r(*this);
  for (auto& q : r.c_) q = -q;
  return r;
}

bool CoeffElem::operator==(const CoeffElem& other) const { return field_ == other.field_ && c_ == other.c_; }

CoeffElem CoeffElem::inverse() const {
  require(!is_zero(), ErrorKind::DivisionByZero, "inverse of zero");
  if (is_rational()) return CoeffElem(field_, 1 / c_[0]);
  // Solve (multiplication-by-this) x = 1 over Q.
  const std::size_t m = c_.size();
  std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m + 1));
  CoeffElem basis = one(field_);
  const CoeffElem pi_elem = pi(field_);
  for (std::size_t j = 0; j < m; ++j) {
    const CoeffElem col = *this * basis;
    for (std::size_t i = 0; i < m; ++i) a[i][j] = col.c_[i];
    basis = basis * pi_elem;
  }
  a[0][m] = 1;
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    while (piv < m && a[piv][col] == 0) ++piv;
    require(piv < m, ErrorKind::DivisionByZero, "multiplication map is singular");
    std::swap(a[piv], a[col]);
    const Rational inv = 1 / a[col][col];
    for (std::size_t k = col; k <= m; ++k) a[col][k] *= inv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational factor = a[r][col];
      for (std::size_t k = col; k <= m; ++k) a[r][k] -= factor * a[col][k];
    }
  }
  std::vector<Rational> x(m);
  for (std::size_t i = 0; i < m; ++i) x[i] = a[i][m];
  return CoeffElem(field_, std::move(x));
}

std::string CoeffElem::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (std::size_t j = 0; j < c_.size(); ++j) {
    if (c_[j] == 0) continue;
    Rational coef = c_[j];
    if (!first) {
      out << (coef < 0 ? " - " : " + ");
      if (coef < 0) coef = -coef;
    }
    if (j == 0) {
      out << coef.get_str();
    } else {
      if (coef == -1)
        out << "-";
      else if (coef != 1)
        out << coef.get_str() << "*";
      out << "pi";
      if (j > 1) out << "^" << j;
    }
    first = false;
  }
  return first ? "0" : out.str();
}

CoeffElem CoeffElem::parse(std::string_view text, FieldSpec field) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) fail(ErrorKind::ParseError, "empty field element");
  // Split into signed terms at top-level '+'/'-' (a '-' right after '/' or '^'
  // belongs to the number).
  std::vector<std::string> terms;
  std::string cur;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char ch = s[i];
    if ((ch == '+' || ch == '-') && i > 0 && s[i - 1] != '/' && s[i - 1] != '^' && s[i - 1] != '*') {
      terms.push_back(cur);
      cur.clear();
    }
    cur.push_back(ch);
  }
  terms.push_back(cur);
  CoeffElem out(field);
  const CoeffElem pi_elem = pi(field);
  for (std::string term : terms) {
    bool negative = false;
    if (!term.empty() && (term.front() == '+' || term.front() == '-')) {
      negative = term.front() == '-';
      term.erase(term.begin());
    }
    if (term.empty()) fail(ErrorKind::ParseError, "dangling sign in '" + std::string(text) + "'");
    Rational coef = 1;
    long power = 0;
    const auto pos = term.find("pi");
    if (pos == std::string::npos) {
      coef = parse_rational(term);
    } else {
      std::string head = term.substr(0, pos);
      std::string tail = term.substr(pos + 2);
      if (!head.empty()) {
        if (head.back() != '*') fail(ErrorKind::ParseError, "expected '*' before pi in '" + term + "'");
        head.pop_back();
        coef = parse_rational(head);
      }
      power = 1;
      if (!tail.empty()) {
        if (tail.front() != '^') fail(ErrorKind::ParseError, "unexpected text after pi in '" + term + "'");
        const Rational e = parse_rational(tail.substr(1));
        if (e.get_den() != 1 || e < 0) fail(ErrorKind::ParseError, "pi exponent must be a nonnegative integer");
        power = e.get_num().get_si();
      }
    }
    if (negative) coef = -coef;
    CoeffElem termval(field, coef);
    for (long k = 0; k < power; ++k) termval = termval * pi_elem;
    out += termval;
  }
  return out;
}

Val valuation(const CoeffElem& a) {
  const auto& f = a.field();
  std::optional<Rational> best;
  for (int j = 0; j < f.m; ++j) {
    const Rational& c = a.coefficient(j);
    if (c == 0) continue;
    Rational v = Rational(padic_valuation(c, f.p)) + frac(j, f.m);
    v.canonicalize();
    if (!best || v < *best) best = v;
  }
  return best ? Val(*best) : Val::infinity();
}

CoeffElem extend_scalars(const CoeffElem& a, const FieldSpec& target) {
  const auto& src = a.field();
  require(src.p == target.p && target.m % src.m == 0, ErrorKind::IncompatibleTower,
          "cannot embed Q(p^(1/" + std::to_string(src.m) + ")) into Q(p^(1/" + std::to_string(target.m) + "))");
  const int step = target.m / src.m;
  std::vector<Rational> c(static_cast<std::size_t>(target.m));
  for (int j = 0; j < src.m; ++j) c[static_cast<std::size_t>(j * step)] = a.coefficient(j);
  return CoeffElem(target, std::move(c));
}

std::vector<CoeffElem> elementary_symmetric(std::span<const CoeffElem> values, const FieldSpec& field) {
  std::vector<CoeffElem> e(values.size() + 1, CoeffElem::zero(field));
  e[0] = CoeffElem::one(field);
  for (std::size_t n = 0; n < values.size(); ++n)
    for (std::size_t k = n + 1; k >= 1; --k) e[k] += e[k - 1] * values[n];
  return e;
}

}  // namespace phimod
