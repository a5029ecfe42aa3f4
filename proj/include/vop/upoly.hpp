#pragma once

#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vop/error.hpp"
#include "vop/rat.hpp"
#include "vop/scalar.hpp"

namespace vop {

/// Univariate polynomial over Scalar in the variable named by `Tag`.
/// Canonical form: coefficient vector trimmed so the leading entry is
/// nonzero; the zero polynomial stores nothing and reports the sentinel
/// degree kZeroDegree.
template <class Tag>
class BasicPoly {
 public:
  static constexpr int kZeroDegree = -1;

  BasicPoly() = default;
  BasicPoly(Scalar constant) {  // NOLINT: implicit by design
    if (!constant.is_zero()) c_.push_back(std::move(constant));
  }
  BasicPoly(Rat constant) : BasicPoly(Scalar(std::move(constant))) {}
  BasicPoly(long constant) : BasicPoly(Scalar(constant)) {}
  BasicPoly(int constant) : BasicPoly(Scalar(constant)) {}

  static BasicPoly monomial(unsigned power, Scalar coeff = Scalar(1)) {
    BasicPoly p;
    if (!coeff.is_zero()) {
      p.c_.resize(power + 1);
      p.c_[power] = std::move(coeff);
    }
    return p;
  }
  static BasicPoly variable() { return monomial(1); }

  int degree() const { return int(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_monic() const { return !c_.empty() && c_.back() == Scalar(1); }

  /// Coefficient of the i-th power; zero beyond the degree.
  const Scalar& coeff(unsigned i) const {
    static const Scalar kZero{};
    return i < c_.size() ? c_[i] : kZero;
  }
  const Scalar& leading() const {
    if (c_.empty()) throw Error("leading coefficient of zero polynomial");
    return c_.back();
  }

  friend bool operator==(const BasicPoly&, const BasicPoly&) = default;

  BasicPoly& operator+=(const BasicPoly& o) {
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  BasicPoly& operator-=(const BasicPoly& o) {
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  friend BasicPoly operator+(BasicPoly a, const BasicPoly& b) { return a += b; }
  friend BasicPoly operator-(BasicPoly a, const BasicPoly& b) { return a -= b; }
  friend BasicPoly operator-(const BasicPoly& a) {
    BasicPoly out = a;
    for (auto& c : out.c_) c = -c;
    return out;
  }
  friend BasicPoly operator*(const BasicPoly& a, const BasicPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    BasicPoly out;
    out.c_.resize(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        if (!b.c_[j].is_zero()) out.c_[i + j] += a.c_[i] * b.c_[j];
    }
    out.trim();
    return out;
  }
  BasicPoly& operator*=(const BasicPoly& o) { return *this = *this * o; }
  BasicPoly& operator*=(const Scalar& s) {
    if (s.is_zero()) {
      c_.clear();
    } else {
      for (auto& c : c_) c *= s;
      trim();
    }
    return *this;
  }
  friend BasicPoly operator*(BasicPoly a, const Scalar& s) { return a *= s; }
  friend BasicPoly operator*(const Scalar& s, BasicPoly a) { return a *= s; }
  BasicPoly& operator*=(const Rat& r) { return *this *= Scalar(r); }
  friend BasicPoly operator*(BasicPoly a, const Rat& r) { return a *= r; }

  /// Horner evaluation at a rational point.
  Scalar operator()(const Rat& x) const {
    Scalar out;
    for (std::size_t i = c_.size(); i-- > 0;) out = out * Scalar(x) + c_[i];
    return out;
  }

  std::string str() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = c_.size(); i-- > 0;) {
      // Flatten scalar terms into the top-level sum; exact and unambiguous.
      for (const auto& [m, c] : c_[i].terms()) {
        Rat a = abs(c);
        if (first) {
          if (c < 0) os << "-";
          first = false;
        } else {
          os << (c < 0 ? " - " : " + ");
        }
        bool has_sym = m.total() > 0 || i > 0;
        if (!has_sym || a != 1) {
          os << rat_to_string(a);
          if (has_sym) os << "*";
        }
        if (m.alpha > 0) {
          os << "alpha";
          if (m.alpha > 1) os << "^" << m.alpha;
          if (m.beta > 0 || i > 0) os << "*";
        }
        if (m.beta > 0) {
          os << "beta";
          if (m.beta > 1) os << "^" << m.beta;
          if (i > 0) os << "*";
        }
        if (i > 0) {
          os << Tag::name;
          if (i > 1) os << "^" << i;
        }
      }
    }
    return first ? "0" : os.str();
  }

 private:
  std::vector<Scalar> c_;

  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
};

struct XVarTag {
  static constexpr std::string_view name = "x";
};
struct NVarTag {
  static constexpr std::string_view name = "n";
};

/// Polynomials in the continuous variable x (the space the P_n live in).
using XPoly = BasicPoly<XVarTag>;
/// Polynomials in the discrete index n (shift-operator coefficients).
using NPoly = BasicPoly<NVarTag>;

template <class Tag>
BasicPoly<Tag> derivative(const BasicPoly<Tag>& p) {
  BasicPoly<Tag> out;
  for (int i = 1; i <= p.degree(); ++i)
    out += BasicPoly<Tag>::monomial(unsigned(i - 1), p.coeff(unsigned(i)) * Rat(i));
  return out;
}

/// p(n) -> p(n + k), by binomial expansion of each power.
inline NPoly shift_argument(const NPoly& p, int k) {
  if (k == 0) return p;
  NPoly shifted_var = NPoly::variable() + NPoly(Rat(k));
  NPoly out, power(Rat(1));
  for (int i = 0; i <= p.degree(); ++i) {
    out += power * p.coeff(unsigned(i));
    power *= shifted_var;
  }
  return out;
}

/// Univariate polynomial over Rat in an abstract indeterminate; carries the
/// automorphism datum q and everything derived from it (q', q'', Q0, Q1).
class RatPoly {
 public:
  static constexpr int kZeroDegree = -1;

  RatPoly() = default;
  RatPoly(Rat constant) {  // NOLINT: implicit by design
    if (constant != 0) c_.push_back(std::move(constant));
  }
  RatPoly(long constant) : RatPoly(Rat(constant)) {}
  RatPoly(int constant) : RatPoly(Rat(constant)) {}

  static RatPoly monomial(unsigned power, Rat coeff = Rat(1)) {
    RatPoly p;
    if (coeff != 0) {
      p.c_.resize(power + 1);
      p.c_[power] = std::move(coeff);
    }
    return p;
  }
  static RatPoly variable() { return monomial(1); }

  int degree() const { return int(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const Rat& coeff(unsigned i) const {
    static const Rat kZero{0};
    return i < c_.size() ? c_[i] : kZero;
  }

  friend bool operator==(const RatPoly&, const RatPoly&) = default;

  RatPoly& operator+=(const RatPoly& o) {
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  RatPoly& operator-=(const RatPoly& o) {
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  friend RatPoly operator+(RatPoly a, const RatPoly& b) { return a += b; }
  friend RatPoly operator-(RatPoly a, const RatPoly& b) { return a -= b; }
  friend RatPoly operator-(const RatPoly& a) {
    RatPoly out = a;
    for (auto& c : out.c_) c = -c;
    return out;
  }
  friend RatPoly operator*(const RatPoly& a, const RatPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    RatPoly out;
    out.c_.resize(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) out.c_[i + j] += a.c_[i] * b.c_[j];
    out.trim();
    return out;
  }
  RatPoly& operator*=(const RatPoly& o) { return *this = *this * o; }
  RatPoly& operator*=(const Rat& r) {
    if (r == 0) {
      c_.clear();
    } else {
      for (auto& c : c_) c *= r;
    }
    return *this;
  }
  friend RatPoly operator*(RatPoly a, const Rat& r) { return a *= r; }
  friend RatPoly operator*(const Rat& r, RatPoly a) { return a *= r; }

  std::string str() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = c_.size(); i-- > 0;) {
      const Rat& c = c_[i];
      if (c == 0) continue;
      Rat a = abs(c);
      if (first) {
        if (c < 0) os << "-";
        first = false;
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      if (i == 0 || a != 1) {
        os << rat_to_string(a);
        if (i > 0) os << "*";
      }
      if (i > 0) {
        os << "X";
        if (i > 1) os << "^" << i;
      }
    }
    return os.str();
  }

 private:
  std::vector<Rat> c_;

  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
};

inline RatPoly derivative(const RatPoly& p) {
  RatPoly out;
  for (int i = 1; i <= p.degree(); ++i)
    out += RatPoly::monomial(unsigned(i - 1), p.coeff(unsigned(i)) * Rat(i));
  return out;
}

/// The automorphism datum: a polynomial with zero constant term (a free term
/// would make the exponential series on polynomials ill-defined). Derivatives
/// of a QPoly are plain RatPoly values, which may carry constants.
class QPoly {
 public:
  QPoly() = default;
  explicit QPoly(RatPoly p) : p_(std::move(p)) {
    if (p_.coeff(0) != 0)
      throw SpecError("q must have zero constant term, got constant " +
                      rat_to_string(p_.coeff(0)));
  }

  const RatPoly& poly() const { return p_; }
  int degree() const { return p_.degree(); }
  bool is_zero() const { return p_.is_zero(); }
  std::string str() const { return p_.str(); }

  friend bool operator==(const QPoly&, const QPoly&) = default;

 private:
  RatPoly p_;
};

inline RatPoly derivative(const QPoly& q) { return derivative(q.poly()); }

}  // namespace vop
