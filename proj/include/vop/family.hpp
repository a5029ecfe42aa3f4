#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vop/diffop.hpp"
#include "vop/error.hpp"
#include "vop/shiftop.hpp"

namespace vop {

enum class FamilyKind { weyl, sl2, cubic };

inline std::string_view kind_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::weyl: return "weyl";
    case FamilyKind::sl2: return "sl2";
    default: return "cubic";
  }
}

inline FamilyKind kind_from_name(std::string_view s) {
  if (s == "weyl") return FamilyKind::weyl;
  if (s == "sl2") return FamilyKind::sl2;
  if (s == "cubic") return FamilyKind::cubic;
  throw SpecError("unknown family kind: '" + std::string(s) + "'");
}

/// A declared family parameter: either kept symbolic or pinned to a rational.
struct ParamChoice {
  bool is_symbolic = true;
  Rat value{};

  static ParamChoice symbolic() { return {}; }
  static ParamChoice fixed(Rat v) { return {false, std::move(v)}; }
  friend bool operator==(const ParamChoice&, const ParamChoice&) = default;
};

/// What to build: which algebra, which automorphism datum q, parameter
/// bindings, and the table size N. weyl declares no parameters, sl2 declares
/// beta, cubic declares alpha and beta; anything else is rejected.
struct FamilySpec {
  FamilyKind kind = FamilyKind::weyl;
  QPoly q;
  std::optional<ParamChoice> alpha;
  std::optional<ParamChoice> beta;
  int table_size = 30;

  bool declares_alpha() const { return kind == FamilyKind::cubic; }
  bool declares_beta() const { return kind != FamilyKind::weyl; }

  void validate() const {
    if (q.is_zero()) throw SpecError("q must be a nonzero polynomial");
    if (table_size < 2) throw SpecError("table size N must be at least 2");
    if (declares_alpha() != alpha.has_value())
      throw SpecError(std::string(kind_name(kind)) +
                      (declares_alpha() ? " family requires parameter alpha"
                                        : " family declares no parameter alpha"));
    if (declares_beta() != beta.has_value())
      throw SpecError(std::string(kind_name(kind)) +
                      (declares_beta() ? " family requires parameter beta"
                                       : " family declares no parameter beta"));
  }

  friend bool operator==(const FamilySpec&, const FamilySpec&) = default;
};

inline FamilySpec weyl_spec(QPoly q, int n = 30) {
  return {FamilyKind::weyl, std::move(q), std::nullopt, std::nullopt, n};
}
inline FamilySpec sl2_spec(QPoly q, ParamChoice beta = ParamChoice::symbolic(),
                           int n = 30) {
  return {FamilyKind::sl2, std::move(q), std::nullopt, beta, n};
}
inline FamilySpec cubic_spec(QPoly q, ParamChoice alpha = ParamChoice::symbolic(),
                             ParamChoice beta = ParamChoice::symbolic(), int n = 30) {
  return {FamilyKind::cubic, std::move(q), alpha, beta, n};
}

/// Canonical one-line description; the stable identity of a spec.
inline std::string spec_key(const FamilySpec& s) {
  auto param = [](const std::optional<ParamChoice>& p) -> std::string {
    if (!p) return "none";
    return p->is_symbolic ? "symbolic" : rat_to_string(p->value);
  };
  std::ostringstream os;
  os << "kind=" << kind_name(s.kind) << ";q=" << s.q.str()
     << ";alpha=" << param(s.alpha) << ";beta=" << param(s.beta)
     << ";N=" << s.table_size;
  return os.str();
}

inline std::string fnv1a_hex(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[std::size_t(i)] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

inline std::string spec_fingerprint(const FamilySpec& s) {
  return fnv1a_hex(spec_key(s));
}

/// Exact coefficients of x P_n in the monic basis:
/// x P_n = P_{n+1} + sum_{j=0..n} gamma[n][j] P_{n-j}, rows n = 0..N-1.
/// bandwidth is the largest j with gamma[n][j] != 0 over all rows.
struct RecurrenceTable {
  std::vector<std::vector<Scalar>> gamma;
  int bandwidth = 0;
};

/// Closed-form lowering eigencoefficient mu(n), with B P_n = mu(n) P_{n-1}:
/// n for weyl, n(n-1+beta) for sl2, n[(n-1)(n-2)+alpha(n-1)+beta] for cubic.
inline NPoly lowering_mu(FamilyKind kind, const Scalar& alpha, const Scalar& beta) {
  NPoly n = NPoly::variable();
  switch (kind) {
    case FamilyKind::weyl: return n;
    case FamilyKind::sl2: return n * (n - NPoly(1) + NPoly(beta));
    default:
      return n * ((n - NPoly(1)) * (n - NPoly(2)) +
                  NPoly(alpha) * (n - NPoly(1)) + NPoly(beta));
  }
}

/// A fully built family: generators, eigenoperator, lowering coefficient,
/// the bispectral images, and the printed closed forms (kept verbatim as
/// audit targets, in as-written composition order).
struct Family {
  FamilySpec spec;
  Scalar alpha;  // symbol, pinned value, or 0 when the family declares none
  Scalar beta;
  DiffOp raising;        // multiplication by x
  DiffOp euler;          // x d/dx
  DiffOp lowering;       // B
  DiffOp lowering_poly;  // q(B)
  DiffOp eigenop;        // L1 = euler + q'(B) B, cross-checked against the ad series
  NPoly mu;              // lowering eigencoefficient
  BispectralMap dual;
  ShiftOp claimed_bprime_x;
  ShiftOp claimed_theorem_recurrence;
};

/// How to compose the two-factor products in the printed closed forms.
/// The displays are noncommutative words; as_written composes left-to-right
/// exactly as printed, reversed flips each such product.
enum class Ordering { as_written, reversed };

namespace detail {

inline ShiftOp ordered_product(const ShiftOp& left, const ShiftOp& right,
                               Ordering ord) {
  return ord == Ordering::as_written ? left * right : right * left;
}

inline unsigned ad_guard(const DiffOp& gen, const DiffOp& a, int q_degree) {
  int d = q_degree < 1 ? 1 : q_degree;
  long g = (long(a.order() < 0 ? 0 : a.order()) + long(gen.order()) * d) * (d + 2);
  return unsigned(g < 8 ? 8 : g);
}

/// Newton interpolation through integer nodes 0..values.size()-1.
inline NPoly interpolate_at_integers(const std::vector<Scalar>& values) {
  std::vector<Scalar> dd = values;
  NPoly out, basis(Rat(1));
  NPoly n = NPoly::variable();
  for (std::size_t level = 0; level < values.size(); ++level) {
    out += basis * dd[0];
    basis *= n - NPoly(Rat(long(level)));
    for (std::size_t i = 0; i + level + 1 < values.size(); ++i) {
      dd[i] = (dd[i + 1] - dd[i]) * Rat(1, long(level) + 1);
    }
  }
  return out;
}

}  // namespace detail

/// Q1(X) = (q'^2(X) - q''(X)) X / 2, from the cubic closed-form displays.
inline RatPoly q1_combination(const QPoly& q) {
  RatPoly d1 = derivative(q);
  RatPoly d2 = derivative(d1);
  return (d1 * d1 - d2) * RatPoly::variable() * Rat(1, 2);
}

/// Q0(X) = -q'''(X) X^2 + (2 q''(X) X + 3 q'(X) - q'^2(X) X) X q'(X),
/// assembled exactly as printed.
inline RatPoly q0_combination(const QPoly& q) {
  RatPoly x = RatPoly::variable();
  RatPoly d1 = derivative(q);
  RatPoly d2 = derivative(d1);
  RatPoly d3 = derivative(d2);
  return -(d3 * x * x) + (d2 * x * Rat(2) + d1 * Rat(3) - d1 * d1 * x) * x * d1;
}

/// The lemma-stated recurrence operator b'(x), assembled verbatim from the
/// printed closed form of the family's lemma.
inline ShiftOp claimed_bprime_x(FamilyKind kind, const QPoly& q, const Scalar& alpha,
                                const Scalar& beta, const NPoly& mu, Ordering ord) {
  ShiftOp g = ShiftOp::term(mu, -1);  // the image of B
  ShiftOp t = ShiftOp::shift(1);
  RatPoly d1 = derivative(q);
  RatPoly d2 = derivative(d1);
  NPoly n = NPoly::variable();
  switch (kind) {
    case FamilyKind::weyl:
      // T - q'(n T^-1)
      return t - qpoly_at_shiftop(d1, g);
    case FamilyKind::sl2: {
      // T - q'(b(B))(2n+beta) - q''(b(B)) b(B) + q'^2(b(B)) b(B)
      ShiftOp lin = ShiftOp::multiplication(n * Rat(2) + NPoly(beta));
      return t - detail::ordered_product(qpoly_at_shiftop(d1, g), lin, ord) -
             qpoly_at_shiftop(d2, g) * g + qpoly_at_shiftop(d1 * d1, g) * g;
    }
    default: {
      // T - q'(b(B))(3n^2+2 alpha n+beta) + Q1(b(B))(6n+3+alpha) + Q0(b(B))
      ShiftOp w_img = ShiftOp::multiplication(n * n * Rat(3) +
                                              n * (Scalar(2) * alpha) + NPoly(beta));
      ShiftOp r_img =
          ShiftOp::multiplication(n * Rat(6) + NPoly(Scalar(3) + alpha));
      return t - detail::ordered_product(qpoly_at_shiftop(d1, g), w_img, ord) +
             detail::ordered_product(qpoly_at_shiftop(q1_combination(q), g), r_img,
                                     ord) +
             qpoly_at_shiftop(q0_combination(q), g);
    }
  }
}

/// The theorem-stated right-hand side of the recurrence, assembled verbatim.
/// For sl2 and cubic this differs textually from the lemma form (a factor 2
/// on the q'' term, a factor 3 on the q' term); both are produced and it is
/// the verifier's job to adjudicate, never this builder's.
inline ShiftOp claimed_theorem_recurrence(FamilyKind kind, const QPoly& q,
                                          const Scalar& alpha, const Scalar& beta,
                                          const NPoly& mu, Ordering ord) {
  ShiftOp g = ShiftOp::term(mu, -1);
  ShiftOp t = ShiftOp::shift(1);
  RatPoly d1 = derivative(q);
  RatPoly d2 = derivative(d1);
  NPoly n = NPoly::variable();
  switch (kind) {
    case FamilyKind::weyl:
      // identical to the lemma form
      return t - qpoly_at_shiftop(d1, g);
    case FamilyKind::sl2: {
      // T - q'(b(B))(2n+beta) + {-2 q''(b(B)) + q'^2(b(B))} b(B)
      ShiftOp lin = ShiftOp::multiplication(n * Rat(2) + NPoly(beta));
      ShiftOp brace =
          qpoly_at_shiftop(d2, g) * Rat(-2) + qpoly_at_shiftop(d1 * d1, g);
      return t - detail::ordered_product(qpoly_at_shiftop(d1, g), lin, ord) +
             brace * g;
    }
    default: {
      // T + {-3 q'(b(B))(3n^2+2 alpha n+beta) + Q1(b(B))(6n+3+alpha) + Q0(b(B))}
      ShiftOp w_img = ShiftOp::multiplication(n * n * Rat(3) +
                                              n * (Scalar(2) * alpha) + NPoly(beta));
      ShiftOp r_img =
          ShiftOp::multiplication(n * Rat(6) + NPoly(Scalar(3) + alpha));
      return t +
             detail::ordered_product(qpoly_at_shiftop(d1, g), w_img, ord) *
                 Rat(-3) +
             detail::ordered_product(qpoly_at_shiftop(q1_combination(q), g), r_img,
                                     ord) +
             qpoly_at_shiftop(q0_combination(q), g);
    }
  }
}

/// [B, x] as it actually comes out of each concrete algebra: 1 for weyl,
/// 2H + beta for sl2, and 3H^2 + (2 alpha - 3)H + beta for cubic. The cubic
/// value follows from [B, x] x^n = (mu(n+1) - mu(n)) x^n; the printed display
/// W = 3H^2 + 2 alpha H + beta differs from it by 3H and is audited as a
/// claim, not enforced as an invariant.
inline DiffOp lowering_raising_commutator(FamilyKind kind, const Scalar& alpha,
                                          const Scalar& beta) {
  DiffOp h = DiffOp::euler();
  switch (kind) {
    case FamilyKind::weyl: return DiffOp::identity();
    case FamilyKind::sl2: return h * Rat(2) + DiffOp::identity() * beta;
    default:
      return h * h * Rat(3) + h * (Scalar(2) * alpha - Scalar(3)) +
             DiffOp::identity() * beta;
  }
}

/// W = 3H^2 + 2 alpha H + beta, the printed form of the cubic [B, x].
inline DiffOp w_operator(const Scalar& alpha, const Scalar& beta) {
  DiffOp h = DiffOp::euler();
  return h * h * Rat(3) + h * (Scalar(2) * alpha) + DiffOp::identity() * beta;
}

/// R = 3(2H + 1) + 2 alpha, as the cubic closed forms use it.
inline DiffOp r_operator(const Scalar& alpha) {
  return DiffOp::euler() * Rat(6) + DiffOp::identity() * (Scalar(3) + Scalar(2) * alpha);
}

/// Builds a family and verifies its structure on the way: the commutation
/// relations by actual composition, mu by direct application plus Newton
/// interpolation against the closed form, and the eigenoperator by the two
/// independent routes (composition vs ad series), which must agree.
inline Family build_family(const FamilySpec& spec) {
  spec.validate();
  Family f;
  f.spec = spec;
  f.alpha = spec.alpha ? (spec.alpha->is_symbolic ? sym_alpha() : Scalar(spec.alpha->value))
                       : Scalar(0);
  f.beta = spec.beta ? (spec.beta->is_symbolic ? sym_beta() : Scalar(spec.beta->value))
                     : Scalar(0);

  f.raising = DiffOp::multiplication(XPoly::variable());
  f.euler = DiffOp::euler();
  switch (spec.kind) {
    case FamilyKind::weyl:
      f.lowering = DiffOp::derivative();
      break;
    case FamilyKind::sl2:
      // x D^2 + beta D
      f.lowering = DiffOp::multiplication(XPoly::variable()) * DiffOp::derivative(2) +
                   DiffOp::derivative() * f.beta;
      break;
    case FamilyKind::cubic:
      // x^2 D^3 + alpha x D^2 + beta D
      f.lowering = DiffOp::multiplication(XPoly::monomial(2)) * DiffOp::derivative(3) +
                   DiffOp::multiplication(XPoly::variable()) * DiffOp::derivative(2) * f.alpha +
                   DiffOp::derivative() * f.beta;
      break;
  }

  // Commutation relations, by composition.
  if (commutator(f.euler, f.raising) != f.raising)
    throw RelationViolation("[H, x] != x for " + std::string(kind_name(spec.kind)));
  if (commutator(f.euler, f.lowering) != -f.lowering)
    throw RelationViolation("[H, B] != -B for " + std::string(kind_name(spec.kind)));
  if (commutator(f.lowering, f.raising) !=
      lowering_raising_commutator(spec.kind, f.alpha, f.beta))
    throw RelationViolation("[B, x] has the wrong value for " +
                            std::string(kind_name(spec.kind)));

  // mu three ways: closed form, direct application of B to every x^n in
  // range, and Newton interpolation through the first order(B)+1 samples.
  f.mu = lowering_mu(spec.kind, f.alpha, f.beta);
  for (int n = 0; n <= std::max(spec.table_size, f.lowering.order()); ++n) {
    XPoly image = f.lowering.apply(XPoly::monomial(unsigned(n)));
    XPoly predicted = n == 0 ? XPoly{} : XPoly::monomial(unsigned(n - 1), f.mu(Rat(n)));
    if (image != predicted)
      throw RelationViolation("B x^" + std::to_string(n) +
                              " != mu(n) x^(n-1): got " + image.str());
  }
  std::vector<Scalar> samples;
  for (int n = 0; n <= f.lowering.order(); ++n) {
    XPoly image = f.lowering.apply(XPoly::monomial(unsigned(n)));
    samples.push_back(n == 0 ? Scalar(0) : image.coeff(unsigned(n - 1)));
  }
  if (detail::interpolate_at_integers(samples) != f.mu)
    throw RelationViolation("interpolated mu disagrees with closed form for " +
                            std::string(kind_name(spec.kind)));

  // Eigenoperator, both routes.
  f.lowering_poly = poly_of_op(spec.q, f.lowering);
  DiffOp by_composition =
      f.euler + poly_of_op(derivative(spec.q), f.lowering) * f.lowering;
  DiffOp by_series = ad_exp(f.lowering_poly, f.euler,
                            detail::ad_guard(f.lowering_poly, f.euler, spec.q.degree()));
  if (by_composition != by_series)
    throw SigmaMismatch("eigenoperator differs between composition and ad series: " +
                        by_composition.str() + " vs " + by_series.str());
  f.eigenop = by_composition;

  f.dual = BispectralMap{ShiftOp::shift(1), ShiftOp::multiplication(NPoly::variable()),
                         ShiftOp::term(f.mu, -1)};
  f.claimed_bprime_x = claimed_bprime_x(spec.kind, spec.q, f.alpha, f.beta, f.mu,
                                        Ordering::as_written);
  f.claimed_theorem_recurrence = claimed_theorem_recurrence(
      spec.kind, spec.q, f.alpha, f.beta, f.mu, Ordering::as_written);
  return f;
}

inline ShiftOp claimed_bprime_x(const Family& f, Ordering ord) {
  return claimed_bprime_x(f.spec.kind, f.spec.q, f.alpha, f.beta, f.mu, ord);
}

inline ShiftOp claimed_theorem_recurrence(const Family& f, Ordering ord) {
  return claimed_theorem_recurrence(f.spec.kind, f.spec.q, f.alpha, f.beta, f.mu, ord);
}

/// P_n = exp(q(B)) x^n for n = 0..N; each entry must come out monic of
/// degree n, which the PolyTable constructor enforces.
inline PolyTable generate_table(const Family& f, int n_max,
                                const CancelToken* cancel = nullptr) {
  if (n_max < 2) throw SpecError("table size N must be at least 2");
  std::vector<XPoly> polys;
  polys.reserve(std::size_t(n_max) + 1);
  for (int n = 0; n <= n_max; ++n)
    polys.push_back(exp_apply(f.lowering_poly, XPoly::monomial(unsigned(n)),
                              unsigned(n) + 1, cancel));
  FamilySpec sized = f.spec;
  sized.table_size = n_max;
  return PolyTable(std::move(polys), spec_fingerprint(sized));
}

inline PolyTable generate_table(const Family& f) {
  return generate_table(f, f.spec.table_size);
}

}  // namespace vop
