#pragma once

#include <map>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "vop/error.hpp"
#include "vop/upoly.hpp"

namespace vop {

/// Difference operator in normal form sum_k c_k(n) T^k: all n-dependence to
/// the left of the shifts, using T^k c(n) = c(n+k) T^k. T is the forward
/// shift in the index, T^-1 the backward one.
class ShiftOp {
 public:
  using Terms = std::map<int, NPoly>;

  ShiftOp() = default;

  static ShiftOp zero() { return {}; }
  static ShiftOp identity() { return multiplication(NPoly(1)); }
  /// T^k (k may be negative).
  static ShiftOp shift(int k) {
    ShiftOp op;
    op.t_.emplace(k, NPoly(1));
    return op;
  }
  /// Multiplication by a polynomial in n.
  static ShiftOp multiplication(NPoly c) {
    ShiftOp op;
    if (!c.is_zero()) op.t_.emplace(0, std::move(c));
    return op;
  }
  /// c(n) T^k in one step.
  static ShiftOp term(NPoly c, int k) {
    ShiftOp op;
    if (!c.is_zero()) op.t_.emplace(k, std::move(c));
    return op;
  }

  bool is_zero() const { return t_.empty(); }
  const NPoly& coeff(int k) const {
    static const NPoly kZero{};
    auto it = t_.find(k);
    return it == t_.end() ? kZero : it->second;
  }
  const Terms& terms() const { return t_; }

  friend bool operator==(const ShiftOp&, const ShiftOp&) = default;

  ShiftOp& operator+=(const ShiftOp& o) {
    for (const auto& [k, c] : o.t_) add_term(k, c);
    return *this;
  }
  ShiftOp& operator-=(const ShiftOp& o) {
    for (const auto& [k, c] : o.t_) add_term(k, -c);
    return *this;
  }
  friend ShiftOp operator+(ShiftOp a, const ShiftOp& b) { return a += b; }
  friend ShiftOp operator-(ShiftOp a, const ShiftOp& b) { return a -= b; }
  friend ShiftOp operator-(const ShiftOp& a) {
    ShiftOp out;
    for (const auto& [k, c] : a.t_) out.t_.emplace(k, -c);
    return out;
  }
  ShiftOp& operator*=(const Scalar& s) {
    if (s.is_zero()) {
      t_.clear();
    } else {
      for (auto& [k, c] : t_) c *= s;
    }
    return *this;
  }
  friend ShiftOp operator*(ShiftOp a, const Scalar& s) { return a *= s; }
  friend ShiftOp operator*(const Scalar& s, ShiftOp a) { return a *= s; }
  ShiftOp& operator*=(const Rat& r) { return *this *= Scalar(r); }
  friend ShiftOp operator*(ShiftOp a, const Rat& r) { return a *= r; }

  /// Composition (this after other): c(n)T^a . d(n)T^b = c(n) d(n+a) T^(a+b).
  friend ShiftOp operator*(const ShiftOp& a, const ShiftOp& b) {
    ShiftOp out;
    for (const auto& [ka, ca] : a.t_)
      for (const auto& [kb, cb] : b.t_)
        out.add_term(ka + kb, ca * shift_argument(cb, ka));
    return out;
  }
  ShiftOp& operator*=(const ShiftOp& o) { return *this = *this * o; }

  std::string str() const {
    if (t_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
      if (!first) os << " + ";
      first = false;
      const auto& [k, c] = *it;
      if (k == 0) {
        os << "(" << c.str() << ")";
      } else if (c == NPoly(1)) {
        os << "T" << (k != 1 ? "^" + std::to_string(k) : "");
      } else {
        os << "(" << c.str() << ")*T" << (k != 1 ? "^" + std::to_string(k) : "");
      }
    }
    return os.str();
  }

 private:
  Terms t_;

  void add_term(int k, const NPoly& c) {
    if (c.is_zero()) return;
    auto it = t_.find(k);
    if (it == t_.end()) {
      t_.emplace(k, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) t_.erase(it);
    }
  }
};

/// q evaluated at a shift-operator argument (Horner in the shift algebra).
/// Constants are allowed: q' and friends carry them.
inline ShiftOp qpoly_at_shiftop(const RatPoly& q, const ShiftOp& arg) {
  ShiftOp out;
  for (int i = q.degree(); i >= 0; --i) {
    out = out * arg;
    if (q.coeff(unsigned(i)) != 0) out += ShiftOp::identity() * q.coeff(unsigned(i));
  }
  return out;
}

inline ShiftOp qpoly_at_shiftop(const QPoly& q, const ShiftOp& arg) {
  return qpoly_at_shiftop(q.poly(), arg);
}

/// The table P_0..P_N of a generated family; each entry monic of its degree.
class PolyTable {
 public:
  PolyTable(std::vector<XPoly> polys, std::string spec_key)
      : p_(std::move(polys)), spec_key_(std::move(spec_key)) {
    if (p_.empty()) throw SpecError("polynomial table must not be empty");
    for (std::size_t n = 0; n < p_.size(); ++n) {
      if (p_[n].degree() != int(n) || !p_[n].is_monic())
        throw SpecError("table entry " + std::to_string(n) +
                        " is not monic of degree " + std::to_string(n) + ": " +
                        p_[n].str());
    }
  }

  int max_index() const { return int(p_.size()) - 1; }
  const XPoly& at(int n) const {
    if (n < 0 || n > max_index())
      throw TableOutOfRange("table index " + std::to_string(n) +
                            " outside 0.." + std::to_string(max_index()));
    return p_[std::size_t(n)];
  }
  const std::string& spec_key() const { return spec_key_; }

 private:
  std::vector<XPoly> p_;
  std::string spec_key_;
};

/// Action of a shift operator on a table at index n: sum_k c_k(n) P_{n+k};
/// entries below index 0 contribute zero, entries above the stored range are
/// an error unless their coefficient vanishes at this n.
inline XPoly apply_to_table(const ShiftOp& op, const PolyTable& table, int n) {
  XPoly out;
  for (const auto& [k, c] : op.terms()) {
    Scalar value = c(Rat(n));
    if (value.is_zero()) continue;
    int idx = n + k;
    if (idx < 0) continue;  // P_m := 0 for m < 0
    if (idx > table.max_index())
      throw TableOutOfRange("shift action at n=" + std::to_string(n) +
                            " references P_" + std::to_string(idx) +
                            " beyond table size " +
                            std::to_string(table.max_index()));
    out += table.at(idx) * value;
  }
  return out;
}

/// Family generators, in the roles they play in every family:
/// raising = multiplication by x, euler = x d/dx, lowering = the operator B.
enum class Gen { raising, euler, lowering };

/// Images of the generators under the bispectral anti-isomorphism
/// (raising -> T, euler -> n, lowering -> mu(n) T^-1). Extends to words
/// anti-multiplicatively.
struct BispectralMap {
  ShiftOp raising_img;
  ShiftOp euler_img;
  ShiftOp lowering_img;

  const ShiftOp& image(Gen g) const {
    switch (g) {
      case Gen::raising: return raising_img;
      case Gen::euler: return euler_img;
      default: return lowering_img;
    }
  }

  /// Image of the product word w[0] w[1] ... : composes the generator images
  /// in reverse order, because the map is an anti-isomorphism.
  ShiftOp word_image(std::span<const Gen> word) const {
    ShiftOp out = ShiftOp::identity();
    for (auto it = word.rbegin(); it != word.rend(); ++it) out = out * image(*it);
    return out;
  }
};

}  // namespace vop
