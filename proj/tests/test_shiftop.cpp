#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <random>

#include "vop/family.hpp"
#include "vop/shiftop.hpp"

using namespace vop;

namespace {

const Scalar kBeta = sym_beta();

// Action on a scalar sequence f: (S f)(n) = sum_k c_k(n) f(n+k). This is the
// independent route used to check normal ordering.
Scalar act_on_sequence(const ShiftOp& op, const std::function<Scalar(int)>& f, int n) {
  Scalar out;
  for (const auto& [k, c] : op.terms()) out += c(Rat(n)) * f(n + k);
  return out;
}

ShiftOp n_shift_down() {  // n T^-1
  return ShiftOp::term(NPoly::variable(), -1);
}

NPoly sl2_mu() {
  NPoly n = NPoly::variable();
  return n * (n - NPoly(1) + NPoly(kBeta));
}

PolyTable hermite_table(int n_max) {
  // Independent construction through the classical three-term recurrence.
  std::vector<XPoly> he{XPoly(1), XPoly::variable()};
  for (int n = 1; n < n_max; ++n)
    he.push_back(XPoly::variable() * he[std::size_t(n)] -
                 he[std::size_t(n - 1)] * Scalar(Rat(n)));
  return PolyTable(std::move(he), "hermite-oracle");
}

}  // namespace

TEST_CASE("defining relations") {
  ShiftOp t = ShiftOp::shift(1);
  ShiftOp tinv = ShiftOp::shift(-1);
  ShiftOp n = ShiftOp::multiplication(NPoly::variable());

  CHECK(t * tinv == ShiftOp::identity());
  CHECK(tinv * t == ShiftOp::identity());
  // T n = (n+1) T
  CHECK(t * n == ShiftOp::term(NPoly::variable() + NPoly(1), 1));
  // (n T^-1)^2 = n(n-1) T^-2
  NPoly nn = NPoly::variable();
  CHECK(n_shift_down() * n_shift_down() ==
        ShiftOp::term(nn * (nn - NPoly(1)), -2));
}

TEST_CASE("composition matches sequence action") {
  auto f_id = [](int m) { return Scalar(Rat(m)); };
  auto f_one = [](int) { return Scalar(1); };
  ShiftOp g = n_shift_down();
  ShiftOp gg = g * g;
  for (int n = 0; n <= 6; ++n) {
    for (const auto& f : {std::function<Scalar(int)>(f_id), std::function<Scalar(int)>(f_one)}) {
      Scalar via_composed = act_on_sequence(gg, f, n);
      Scalar via_nested = act_on_sequence(g, [&](int m) { return act_on_sequence(g, f, m); }, n);
      CHECK(via_composed == via_nested);
    }
  }
}

TEST_CASE("composition-action soundness on random operators") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> offset(-2, 2);
  std::uniform_int_distribution<int> coeff(-3, 3);
  auto random_shiftop = [&] {
    ShiftOp s;
    for (int t = 0; t < 2; ++t) {
      NPoly c = NPoly(Rat(coeff(rng))) + NPoly::variable() * Rat(coeff(rng));
      s += ShiftOp::term(c, offset(rng));
    }
    return s;
  };
  auto f = [](int m) { return Scalar(Rat(m)) * Scalar(Rat(m)) + Scalar(Rat(3)); };
  for (int i = 0; i < 40; ++i) {
    ShiftOp a = random_shiftop(), b = random_shiftop();
    for (int n = -3; n <= 3; ++n) {
      Scalar lhs = act_on_sequence(a * b, f, n);
      Scalar rhs = act_on_sequence(a, [&](int m) { return act_on_sequence(b, f, m); }, n);
      CHECK(lhs == rhs);
    }
    CHECK((a * b) * a == a * (b * a));
  }
}

TEST_CASE("qpoly at shift-operator arguments") {
  // q'(X) = -X^(k-1) at n T^-1 gives the falling factorial coefficient
  for (unsigned k = 2; k <= 5; ++k) {
    RatPoly dq = RatPoly::monomial(k - 1, Rat(-1));
    ShiftOp horner = qpoly_at_shiftop(dq, n_shift_down());
    ShiftOp repeated = ShiftOp::identity();
    for (unsigned i = 0; i + 1 < k; ++i) repeated = repeated * n_shift_down();
    CHECK(horner == -repeated);
  }
  CHECK(qpoly_at_shiftop(RatPoly(1), n_shift_down()) == ShiftOp::identity());

  // X^2 at n(n-1+beta) T^-1 -> n(n-1)(n-1+beta)(n-2+beta) T^-2
  ShiftOp g = ShiftOp::term(sl2_mu(), -1);
  CHECK(qpoly_at_shiftop(RatPoly::monomial(2), g) == g * g);
  NPoly n = NPoly::variable();
  NPoly expect = n * (n - NPoly(1)) * (n - NPoly(1) + NPoly(kBeta)) *
                 (n - NPoly(2) + NPoly(kBeta));
  CHECK(g * g == ShiftOp::term(expect, -2));
}

TEST_CASE("apply_to_table") {
  PolyTable he = hermite_table(6);
  ShiftOp t = ShiftOp::shift(1);
  for (int n = 0; n < 6; ++n) CHECK(apply_to_table(t, he, n) == he.at(n + 1));

  // coefficient vanishes at n = 0, so P_{-1} never materializes
  CHECK(apply_to_table(n_shift_down(), he, 0).is_zero());

  // the classical three-term relation: (T + n T^-1) P_2 = x P_2
  ShiftOp rec = t + n_shift_down();
  CHECK(apply_to_table(rec, he, 2) == XPoly::variable() * he.at(2));

  CHECK_THROWS_AS(apply_to_table(t, he, 6), TableOutOfRange);
  // negative target indices with vanishing coefficient are fine;
  // a nonzero coefficient below zero contributes zero by convention
  CHECK(apply_to_table(ShiftOp::shift(-1), he, 0).is_zero());
}

TEST_CASE("table invariants") {
  CHECK_THROWS_AS(PolyTable({XPoly(1), XPoly::monomial(2)}, "bad"), SpecError);
  CHECK_THROWS_AS(PolyTable({XPoly(1), XPoly::variable() * Rat(2)}, "bad"), SpecError);
  CHECK_THROWS_AS(PolyTable({}, "empty"), SpecError);
}

TEST_CASE("bispectral images act like the generators on the seed table") {
  std::vector<XPoly> monomials;
  for (unsigned n = 0; n <= 10; ++n) monomials.push_back(XPoly::monomial(n));
  PolyTable seed(std::move(monomials), "seed");

  for (FamilyKind kind : {FamilyKind::weyl, FamilyKind::sl2, FamilyKind::cubic}) {
    FamilySpec spec;
    switch (kind) {
      case FamilyKind::weyl:
        spec = weyl_spec(QPoly(RatPoly::variable()), 10);
        break;
      case FamilyKind::sl2:
        spec = sl2_spec(QPoly(RatPoly::variable()), ParamChoice::symbolic(), 10);
        break;
      case FamilyKind::cubic:
        spec = cubic_spec(QPoly(RatPoly::variable()), ParamChoice::symbolic(),
                          ParamChoice::symbolic(), 10);
        break;
    }
    Family fam = build_family(spec);
    for (int n = 0; n < 10; ++n) {
      XPoly xn = XPoly::monomial(unsigned(n));
      CHECK(apply_to_table(fam.dual.raising_img, seed, n) == fam.raising.apply(xn));
      CHECK(apply_to_table(fam.dual.euler_img, seed, n) == fam.euler.apply(xn));
      CHECK(apply_to_table(fam.dual.lowering_img, seed, n) == fam.lowering.apply(xn));
    }
  }
}

TEST_CASE("anti-isomorphism on generator words at desk scale") {
  // b(uv) = b(v) b(u), checked through the defining property A psi = b(A) psi
  // on the seed table S_n = x^n, for words of length <= 3.
  FamilySpec spec = sl2_spec(QPoly(RatPoly::variable()), ParamChoice::symbolic(), 14);
  Family fam = build_family(spec);
  std::vector<XPoly> monomials;
  for (unsigned n = 0; n <= 14; ++n) monomials.push_back(XPoly::monomial(n));
  PolyTable seed(std::move(monomials), "seed");

  auto op_of = [&](Gen g) -> const DiffOp& {
    switch (g) {
      case Gen::raising: return fam.raising;
      case Gen::euler: return fam.euler;
      default: return fam.lowering;
    }
  };
  const Gen gens[] = {Gen::raising, Gen::euler, Gen::lowering};
  std::vector<std::vector<Gen>> words;
  for (Gen a : gens) {
    words.push_back({a});
    for (Gen b : gens) {
      words.push_back({a, b});
      for (Gen c : gens) words.push_back({a, b, c});
    }
  }
  for (const auto& word : words) {
    DiffOp composed = DiffOp::identity();
    for (Gen g : word) composed = composed * op_of(g);
    ShiftOp image = fam.dual.word_image(word);
    for (int n = 0; n <= 8; ++n)
      CHECK(apply_to_table(image, seed, n) ==
            composed.apply(XPoly::monomial(unsigned(n))));
  }
  // anti-multiplicativity of the word extension itself
  std::vector<Gen> u{Gen::raising, Gen::lowering};
  std::vector<Gen> v{Gen::euler, Gen::raising, Gen::lowering};
  std::vector<Gen> uv = u;
  uv.insert(uv.end(), v.begin(), v.end());
  CHECK(fam.dual.word_image(uv) == fam.dual.word_image(v) * fam.dual.word_image(u));
  // the empty word maps to the identity: b(1) = 1
  CHECK(fam.dual.word_image({}) == ShiftOp::identity());
}

TEST_CASE("shift operator rendering") {
  ShiftOp rec = ShiftOp::shift(1) + n_shift_down();
  CHECK(rec.str() == "T + (n)*T^-1");
  CHECK(ShiftOp::zero().str() == "0");
}
