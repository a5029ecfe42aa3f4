#pragma once

#include <atomic>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "vop/error.hpp"
#include "vop/upoly.hpp"

namespace vop {

using CancelToken = std::atomic<bool>;

inline void check_cancel(const CancelToken* cancel) {
  if (cancel && cancel->load(std::memory_order_relaxed))
    throw Cancelled("operation cancelled");
}

/// Differential operator with polynomial coefficients, kept in normal form
/// sum_i p_i(x) D^i: all x-dependence to the left of the derivative powers,
/// no zero coefficients stored. Equality of normal forms is operator equality.
class DiffOp {
 public:
  using Terms = std::map<int, XPoly>;

  DiffOp() = default;

  static DiffOp zero() { return {}; }
  static DiffOp identity() { return multiplication(XPoly(1)); }
  /// D^k
  static DiffOp derivative(unsigned k = 1) {
    DiffOp op;
    op.t_.emplace(int(k), XPoly(1));
    return op;
  }
  /// Multiplication by a polynomial in x.
  static DiffOp multiplication(XPoly p) {
    DiffOp op;
    if (!p.is_zero()) op.t_.emplace(0, std::move(p));
    return op;
  }
  /// x d/dx, the grading operator of all three families.
  static DiffOp euler() {
    DiffOp op;
    op.t_.emplace(1, XPoly::variable());
    return op;
  }

  bool is_zero() const { return t_.empty(); }
  /// Highest derivative order; -1 for the zero operator.
  int order() const { return t_.empty() ? -1 : t_.rbegin()->first; }
  const XPoly& coeff(int k) const {
    static const XPoly kZero{};
    auto it = t_.find(k);
    return it == t_.end() ? kZero : it->second;
  }
  const Terms& terms() const { return t_; }

  friend bool operator==(const DiffOp&, const DiffOp&) = default;

  DiffOp& operator+=(const DiffOp& o) {
    for (const auto& [k, p] : o.t_) add_term(k, p);
    return *this;
  }
  DiffOp& operator-=(const DiffOp& o) {
    for (const auto& [k, p] : o.t_) add_term(k, -p);
    return *this;
  }
  friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
  friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a -= b; }
  friend DiffOp operator-(const DiffOp& a) {
    DiffOp out;
    for (const auto& [k, p] : a.t_) out.t_.emplace(k, -p);
    return out;
  }
  DiffOp& operator*=(const Scalar& s) {
    if (s.is_zero()) {
      t_.clear();
    } else {
      for (auto& [k, p] : t_) p *= s;
    }
    return *this;
  }
  friend DiffOp operator*(DiffOp a, const Scalar& s) { return a *= s; }
  friend DiffOp operator*(const Scalar& s, DiffOp a) { return a *= s; }
  DiffOp& operator*=(const Rat& r) { return *this *= Scalar(r); }
  friend DiffOp operator*(DiffOp a, const Rat& r) { return a *= r; }

  /// Composition (this after other), normal-ordered with the Leibniz rewrite
  /// D^i q(x) = sum_k C(i,k) q^(k)(x) D^(i-k).
  friend DiffOp operator*(const DiffOp& a, const DiffOp& b) {
    DiffOp out;
    for (const auto& [i, p] : a.t_) {
      for (const auto& [j, q] : b.t_) {
        XPoly dq = q;
        for (int k = 0; k <= i; ++k) {
          if (dq.is_zero()) break;
          Rat binom(binomial_int(unsigned(i), unsigned(k)));
          out.add_term(i + j - k, p * dq * binom);
          dq = vop::derivative(dq);
        }
      }
    }
    return out;
  }
  DiffOp& operator*=(const DiffOp& o) { return *this = *this * o; }

  /// Action on a polynomial: sum_i p_i(x) * d^i p / dx^i.
  XPoly apply(const XPoly& p) const {
    XPoly out, dp = p;
    int prev = 0;
    for (const auto& [i, q] : t_) {
      for (int k = prev; k < i; ++k) dp = vop::derivative(dp);
      prev = i;
      if (!dp.is_zero()) out += q * dp;
    }
    return out;
  }

  std::string str() const {
    if (t_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
      if (!first) os << " + ";
      first = false;
      const auto& [k, p] = *it;
      if (k == 0) {
        os << "(" << p.str() << ")";
      } else if (p == XPoly(1)) {
        os << "D" << (k > 1 ? "^" + std::to_string(k) : "");
      } else {
        os << "(" << p.str() << ")*D" << (k > 1 ? "^" + std::to_string(k) : "");
      }
    }
    return os.str();
  }

 private:
  Terms t_;

  void add_term(int k, XPoly p) {
    if (p.is_zero()) return;
    auto it = t_.find(k);
    if (it == t_.end()) {
      t_.emplace(k, std::move(p));
    } else {
      it->second += p;
      if (it->second.is_zero()) t_.erase(it);
    }
  }
};

inline DiffOp commutator(const DiffOp& a, const DiffOp& b) { return a * b - b * a; }

/// q evaluated at an operator argument (Horner). Constant terms are allowed
/// here: this is the entry point for q'(B), Q0(B) and friends.
inline DiffOp poly_of_op(const RatPoly& q, const DiffOp& arg) {
  DiffOp out;
  for (int i = q.degree(); i >= 0; --i) {
    out = out * arg;
    if (q.coeff(unsigned(i)) != 0) out += DiffOp::identity() * q.coeff(unsigned(i));
  }
  return out;
}

inline DiffOp poly_of_op(const QPoly& q, const DiffOp& arg) {
  return poly_of_op(q.poly(), arg);
}

/// exp(op) acting on p as the series sum_m op^m(p) / m!. Each application of
/// `op` must strictly lower the degree of every nonzero polynomial it meets
/// (checked dynamically), which makes the series finite.
inline XPoly exp_apply(const DiffOp& op, const XPoly& p, unsigned guard,
                       const CancelToken* cancel = nullptr) {
  if (guard == 0) throw GuardExceeded("exp_apply guard must be positive");
  XPoly sum = p, term = p;
  unsigned m = 0;
  while (!term.is_zero()) {
    check_cancel(cancel);
    if (++m > guard)
      throw GuardExceeded("exp_apply did not terminate within " +
                          std::to_string(guard) + " iterations");
    XPoly next = op.apply(term);
    if (!next.is_zero() && next.degree() >= term.degree())
      throw DegreeNotLowered("operator failed to lower degree at series step " +
                             std::to_string(m) + ": deg " +
                             std::to_string(term.degree()) + " -> " +
                             std::to_string(next.degree()));
    next *= Rat(1, m);
    term = std::move(next);
    sum += term;
  }
  return sum;
}

inline XPoly exp_apply(const DiffOp& op, const XPoly& p) {
  return exp_apply(op, p, unsigned(p.degree() < 0 ? 1 : p.degree() + 1));
}

/// exp(ad_gen) applied to a: sum_k ad_gen^k(a) / k!. Finite exactly when
/// ad_gen is locally nilpotent on a; the guard converts a violation of that
/// contract into an error instead of an endless loop.
inline DiffOp ad_exp(const DiffOp& gen, const DiffOp& a, unsigned guard,
                     const CancelToken* cancel = nullptr) {
  if (guard == 0) throw GuardExceeded("ad_exp guard must be positive");
  DiffOp sum = a, term = a;
  unsigned k = 0;
  while (!term.is_zero()) {
    check_cancel(cancel);
    if (++k > guard)
      throw GuardExceeded("ad series did not terminate within " +
                          std::to_string(guard) + " commutators");
    term = commutator(gen, term);
    term *= Rat(1, k);
    sum += term;
  }
  return sum;
}

/// k-th ad power, ad_gen^k(a); useful for auditing the closed forms the
/// series proofs rest on.
inline DiffOp ad_power(const DiffOp& gen, DiffOp a, unsigned k) {
  for (unsigned i = 0; i < k; ++i) a = commutator(gen, a);
  return a;
}

}  // namespace vop
