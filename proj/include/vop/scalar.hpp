#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <string_view>

#include "vop/error.hpp"
#include "vop/rat.hpp"

namespace vop {

/// The symbolic family parameters. The whole pipeline lives in Q[alpha, beta];
/// which of the two a concrete family may mention is enforced at the spec
/// boundary, not here.
enum class Param : unsigned { alpha = 0, beta = 1 };

inline constexpr std::array<std::string_view, 2> kParamNames{"alpha", "beta"};

inline std::string_view param_name(Param p) { return kParamNames[unsigned(p)]; }

struct Mono {
  std::uint32_t alpha = 0;
  std::uint32_t beta = 0;

  std::uint32_t total() const { return alpha + beta; }
  friend bool operator==(const Mono&, const Mono&) = default;
};

/// Graded-lexicographic order, leading monomial first (alpha before beta).
struct MonoOrder {
  bool operator()(const Mono& l, const Mono& r) const {
    if (l.total() != r.total()) return l.total() > r.total();
    if (l.alpha != r.alpha) return l.alpha > r.alpha;
    return l.beta > r.beta;
  }
};

/// Element of Q[alpha, beta]: the coefficient ring for everything downstream.
/// Canonical form: no zero terms stored, terms ordered graded-lex. Structural
/// equality of canonical forms is ring equality.
class Scalar {
 public:
  using Terms = std::map<Mono, Rat, MonoOrder>;

  Scalar() = default;
  Scalar(Rat c) {  // NOLINT: implicit by design, constants embed
    if (c != 0) terms_.emplace(Mono{}, std::move(c));
  }
  Scalar(long c) : Scalar(Rat(c)) {}
  Scalar(int c) : Scalar(Rat(c)) {}

  static Scalar symbol(Param p) {
    Scalar s;
    Mono m;
    (p == Param::alpha ? m.alpha : m.beta) = 1;
    s.terms_.emplace(m, Rat(1));
    return s;
  }

  bool is_zero() const { return terms_.empty(); }
  bool uses(Param p) const {
    for (const auto& [m, c] : terms_)
      if ((p == Param::alpha ? m.alpha : m.beta) > 0) return true;
    return false;
  }

  const Terms& terms() const { return terms_; }

  friend bool operator==(const Scalar&, const Scalar&) = default;

  Scalar& operator+=(const Scalar& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator-(const Scalar& a) {
    Scalar out;
    for (const auto& [m, c] : a.terms_) out.terms_.emplace(m, -c);
    return out;
  }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    Scalar out;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_)
        out.add_term(Mono{ma.alpha + mb.alpha, ma.beta + mb.beta}, ca * cb);
    return out;
  }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator*=(const Rat& c) {
    if (c == 0) {
      terms_.clear();
    } else {
      for (auto& [m, v] : terms_) v *= c;
    }
    return *this;
  }
  friend Scalar operator*(Scalar a, const Rat& c) { return a *= c; }
  friend Scalar operator*(const Rat& c, Scalar a) { return a *= c; }

  Scalar pow(unsigned e) const {
    Scalar out(1);
    for (unsigned i = 0; i < e; ++i) out *= *this;
    return out;
  }

  /// Exact evaluation. The assignment must cover every parameter that occurs;
  /// the error names the first absent one.
  Rat eval(const std::map<std::string, Rat>& assignment) const {
    std::array<Rat, 2> vals{Rat(0), Rat(0)};
    std::array<bool, 2> have{false, false};
    for (unsigned i = 0; i < 2; ++i) {
      auto it = assignment.find(std::string(kParamNames[i]));
      if (it != assignment.end()) {
        vals[i] = it->second;
        have[i] = true;
      }
    }
    Rat out(0);
    for (const auto& [m, c] : terms_) {
      if (m.alpha > 0 && !have[0]) throw MissingParameter(std::string(kParamNames[0]));
      if (m.beta > 0 && !have[1]) throw MissingParameter(std::string(kParamNames[1]));
      Rat t = c;
      for (std::uint32_t i = 0; i < m.alpha; ++i) t *= vals[0];
      for (std::uint32_t i = 0; i < m.beta; ++i) t *= vals[1];
      out += t;
    }
    return out;
  }

  /// Substitutes scalar values for the parameters (used to specialize
  /// symbolic identities at numeric parameter points).
  Scalar substitute(const Scalar& alpha_value, const Scalar& beta_value) const {
    Scalar out;
    for (const auto& [m, c] : terms_) {
      Scalar t(c);
      if (m.alpha > 0) t *= alpha_value.pow(m.alpha);
      if (m.beta > 0) t *= beta_value.pow(m.beta);
      out += t;
    }
    return out;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      Rat a = abs(c);
      if (first) {
        if (c < 0) os << "-";
        first = false;
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      bool has_sym = m.total() > 0;
      if (!has_sym || a != 1) {
        os << rat_to_string(a);
        if (has_sym) os << "*";
      }
      if (m.alpha > 0) {
        os << "alpha";
        if (m.alpha > 1) os << "^" << m.alpha;
        if (m.beta > 0) os << "*";
      }
      if (m.beta > 0) {
        os << "beta";
        if (m.beta > 1) os << "^" << m.beta;
      }
    }
    return os.str();
  }

 private:
  Terms terms_;

  void add_term(const Mono& m, const Rat& c) {
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_.emplace(m, c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }
};

/// Convenience symbols.
inline Scalar sym_alpha() { return Scalar::symbol(Param::alpha); }
inline Scalar sym_beta() { return Scalar::symbol(Param::beta); }

}  // namespace vop
