#include <catch2/catch_amalgamated.hpp>

#include "vop/corpus.hpp"
#include "vop/verify.hpp"

using namespace vop;

namespace {

const Scalar kBeta = sym_beta();

QPoly q_mono(unsigned power, Rat coeff) {
  return QPoly(RatPoly::monomial(power, std::move(coeff)));
}

struct Built {
  Family fam;
  PolyTable table;
};

Built make(FamilySpec spec) {
  Family fam = build_family(spec);
  PolyTable table = generate_table(fam);
  return {std::move(fam), std::move(table)};
}

const CheckResult& find_check(const std::vector<CheckResult>& checks,
                              std::string_view id_part) {
  for (const auto& c : checks)
    if (c.id.find(id_part) != std::string::npos) return c;
  throw std::runtime_error("no check matching " + std::string(id_part));
}

}  // namespace

TEST_CASE("basis expansion is exact and triangular") {
  Built hermite = make(weyl_spec(q_mono(2, Rat(-1, 2)), 6));
  // x^2 = P_2 + P_0 in the monic Hermite basis
  auto coeffs = expand_in_basis(XPoly::monomial(2), hermite.table);
  REQUIRE(coeffs.size() == 3);
  CHECK(coeffs[2] == Scalar(1));
  CHECK(coeffs[1].is_zero());
  CHECK(coeffs[0] == Scalar(1));
  CHECK(expand_in_basis(XPoly{}, hermite.table).empty());
  CHECK_THROWS_AS(expand_in_basis(XPoly::monomial(9), hermite.table), TableOutOfRange);
}

TEST_CASE("recurrence extraction: Hermite") {
  Built h = make(weyl_spec(q_mono(2, Rat(-1, 2)), 12));
  RecurrenceTable r = extract_recurrence(h.table);
  CHECK(r.bandwidth == 1);
  for (int n = 0; n < 12; ++n) {
    CHECK(r.gamma[std::size_t(n)][0].is_zero());
    if (n >= 1) CHECK(r.gamma[std::size_t(n)][1] == Scalar(Rat(n)));
    for (int j = 2; j <= n; ++j) CHECK(r.gamma[std::size_t(n)][std::size_t(j)].is_zero());
  }
}

TEST_CASE("recurrence extraction: sl2 with q = X") {
  Built s = make(sl2_spec(q_mono(1, 1), ParamChoice::symbolic(), 10));
  RecurrenceTable r = extract_recurrence(s.table);
  CHECK(r.bandwidth == 1);
  for (int n = 0; n < 10; ++n) {
    CHECK(r.gamma[std::size_t(n)][0] == -(Scalar(2 * n) + kBeta));
    if (n >= 1)
      CHECK(r.gamma[std::size_t(n)][1] ==
            Scalar(Rat(n)) * (Scalar(n - 1) + kBeta));
  }
}

TEST_CASE("recurrence extraction: degenerate weyl q = X has bandwidth 0") {
  Built w = make(weyl_spec(q_mono(1, 1), 8));
  RecurrenceTable r = extract_recurrence(w.table);
  CHECK(r.bandwidth == 0);
  for (int n = 0; n < 8; ++n) CHECK(r.gamma[std::size_t(n)][0] == Scalar(-1));
  CHECK_THROWS_AS(maroni_check(w.table, r, "degenerate"), BandwidthZero);
}

TEST_CASE("eigenfunction and lowering checks") {
  Built s = make(sl2_spec(q_mono(2, Rat(1, 2)), ParamChoice::symbolic(), 12));
  CHECK(check_eigenfunction(s.fam, s.table, "t", "r").status == CheckStatus::match);
  CHECK(check_lowering(s.fam, s.table, "t", "r").status == CheckStatus::match);

  // a corrupted table shows up with the smallest failing index as witness
  std::vector<XPoly> polys;
  for (int n = 0; n <= 4; ++n) polys.push_back(s.table.at(n));
  polys[3] += XPoly::variable();  // still monic of degree 3, no longer P_3
  PolyTable bad(std::move(polys), "tampered");
  CheckResult res = check_eigenfunction(s.fam, bad, "t", "r");
  REQUIRE(res.status == CheckStatus::mismatch);
  REQUIRE(res.witness.has_value());
  CHECK(res.witness->n == 3);
  CHECK(!res.witness->lhs.empty());
  CHECK(!res.witness->diff.empty());
}

TEST_CASE("compare_recurrence adjudicates the printed operators") {
  // weyl lemma matches in both orderings for several q
  for (auto& q : {q_mono(2, Rat(-1, 2)), q_mono(3, Rat(-1, 3)), q_mono(4, Rat(2))}) {
    Built w = make(weyl_spec(q, 10));
    for (Ordering ord : {Ordering::as_written, Ordering::reversed}) {
      CHECK(compare_recurrence(w.table, claimed_bprime_x(w.fam, ord), "t", "r",
                               CheckKind::paper_claim)
                .status == CheckStatus::match);
    }
  }

  // sl2, q = X: lemma matches
  Built s1 = make(sl2_spec(q_mono(1, 1), ParamChoice::symbolic(), 10));
  CHECK(compare_recurrence(s1.table, s1.fam.claimed_bprime_x, "t", "r",
                           CheckKind::paper_claim)
            .status == CheckStatus::match);

  // sl2, q = X^2/2: lemma (as written) matches, theorem variant does not
  Built s2 = make(sl2_spec(q_mono(2, Rat(1, 2)), ParamChoice::symbolic(), 10));
  CHECK(compare_recurrence(s2.table, claimed_bprime_x(s2.fam, Ordering::as_written),
                           "t", "r", CheckKind::paper_claim)
            .status == CheckStatus::match);
  CheckResult thm = compare_recurrence(
      s2.table, claimed_theorem_recurrence(s2.fam, Ordering::as_written), "t", "r",
      CheckKind::paper_claim);
  REQUIRE(thm.status == CheckStatus::mismatch);
  REQUIRE(thm.witness.has_value());
  CHECK(thm.witness->n == 1);  // the -2q'' defect already shows at n = 1

  // a claimed operator must carry T with coefficient one
  CHECK_THROWS_AS(compare_recurrence(s1.table, ShiftOp::shift(-1), "t", "r",
                                     CheckKind::paper_claim),
                  Error);
}

TEST_CASE("sigma closed forms") {
  Built w = make(weyl_spec(q_mono(3, Rat(-1, 3)), 8));
  auto weyl_checks = check_sigma_closed_form(w.fam, "w");
  CHECK(find_check(weyl_checks, "sec3-sigma-x").status == CheckStatus::match);
  CHECK(find_check(weyl_checks, "sec3-ad2-vanishes").status == CheckStatus::match);

  // sl2, q = X: sigma(x) = x + (2H + beta) + B, spec example
  Built s = make(sl2_spec(q_mono(1, 1), ParamChoice::symbolic(), 8));
  auto sl2_checks = check_sigma_closed_form(s.fam, "s");
  CHECK(find_check(sl2_checks, "lemma-4.2-sigma-x").status == CheckStatus::match);
  CHECK(find_check(sl2_checks, "lemma-4.2-sigma-h").status == CheckStatus::match);
  CHECK(find_check(sl2_checks, "lemma-4.2-sigma-b").status == CheckStatus::match);
  CHECK(find_check(sl2_checks, "sec4-ad2-closed-form").status == CheckStatus::match);
  CHECK(find_check(sl2_checks, "sec4-ad3-vanishes").status == CheckStatus::match);
  DiffOp expected_sigma_x =
      DiffOp::multiplication(XPoly::variable()) + DiffOp::euler() * Rat(2) +
      DiffOp::identity() * kBeta + s.fam.lowering;
  CHECK(ad_exp(s.fam.lowering_poly, s.fam.raising, 32) == expected_sigma_x);

  // cubic: the series facts hold, the printed ad^2 display does not
  Built c = make(cubic_spec(q_mono(2, Rat(1, 2)), ParamChoice::symbolic(),
                            ParamChoice::symbolic(), 8));
  auto cubic_checks = check_sigma_closed_form(c.fam, "c");
  CHECK(find_check(cubic_checks, "sec5-ad3-closed-form").status == CheckStatus::match);
  CHECK(find_check(cubic_checks, "sec5-ad4-vanishes").status == CheckStatus::match);
  CHECK(find_check(cubic_checks, "sec5-ad2-closed-form").status == CheckStatus::mismatch);
  CHECK(find_check(cubic_checks, "lemma-5.2-sigma-x").status == CheckStatus::mismatch);
  CHECK(find_check(cubic_checks, "lemma-5.2-sigma-h").status == CheckStatus::match);
  CHECK(find_check(cubic_checks, "lemma-5.2-sigma-b").status == CheckStatus::match);
  CHECK(find_check(cubic_checks, "lemma-5.2-sigma-x").witness.has_value());
}

TEST_CASE("dual functionals: Hermite moments") {
  Built h = make(weyl_spec(q_mono(2, Rat(-1, 2)), 10));
  FunctionalTable ft = dual_functionals(h.table, 1);
  // u_0(x^j): 1, 0, 1, 0, 3, 0, 15, ... the double factorials
  const long expect[] = {1, 0, 1, 0, 3, 0, 15, 0, 105, 0, 945};
  for (int j = 0; j <= 10; ++j)
    CHECK(ft.moments[0][std::size_t(j)] == Scalar(Rat(expect[j])));
}

TEST_CASE("maroni checks: Hermite (d = 1)") {
  Built h = make(weyl_spec(q_mono(2, Rat(-1, 2)), 12));
  RecurrenceTable r = extract_recurrence(h.table);
  REQUIRE(r.bandwidth == 1);
  for (const auto& c : maroni_check(h.table, r, "h"))
    CHECK(c.status == CheckStatus::match);
}

TEST_CASE("maroni checks: weyl q = -X^3/3 (d = 2)") {
  Built w = make(weyl_spec(q_mono(3, Rat(-1, 3)), 14));
  RecurrenceTable r = extract_recurrence(w.table);
  REQUIRE(r.bandwidth == 2);
  for (const auto& c : maroni_check(w.table, r, "w"))
    CHECK(c.status == CheckStatus::match);
}

TEST_CASE("maroni vanishing detects a non-orthogonal table") {
  // Monomials satisfy x S_n = S_{n+1} (bandwidth 0), so feed a fake
  // bandwidth-1 recurrence and a tampered pair to see the scan bite.
  Built h = make(weyl_spec(q_mono(2, Rat(-1, 2)), 8));
  std::vector<XPoly> polys;
  for (int n = 0; n <= 8; ++n) polys.push_back(h.table.at(n));
  polys[5] += XPoly::monomial(1, Scalar(7));  // breaks orthogonality, keeps monicity
  PolyTable bad(std::move(polys), "tampered");
  RecurrenceTable r = extract_recurrence(bad);
  auto checks = maroni_check(bad, r, "bad");
  bool any_mismatch = false;
  for (const auto& c : checks) any_mismatch |= c.status == CheckStatus::mismatch;
  CHECK(any_mismatch);
}

TEST_CASE("example audits record the expected discrepancies") {
  auto e61 = example_6_1(2, 10);
  CHECK(find_check(e61, "print-l1").status == CheckStatus::match);
  auto& rec = find_check(e61, "print-recurrence");
  REQUIRE(rec.status == CheckStatus::mismatch);
  REQUIRE(rec.witness.has_value());
  CHECK(rec.witness->n == 3);  // n! vs n first separates at n = 3

  auto e63 = example_6_3(10);
  CHECK(find_check(e63, "print-p2").status == CheckStatus::match);
  CHECK(find_check(e63, "print-p3").status == CheckStatus::match);
  auto& five = find_check(e63, "print-5term");
  REQUIRE(five.status == CheckStatus::mismatch);
  CHECK(five.witness->n == 3);  // the P_{n-3} coefficient enters at n = 3

  auto e64 = example_6_4(8);
  auto& four = find_check(e64, "print-4term");
  REQUIRE(four.status == CheckStatus::mismatch);
  CHECK(four.witness->n == 0);  // (3 - 2 alpha) already fails at n = 0

  auto e65 = example_6_5(8);
  CHECK(find_check(e65, "print-l1").status == CheckStatus::match);
  CHECK(find_check(e65, "print-p3").status == CheckStatus::mismatch);
  CHECK(find_check(e65, "print-p4").status == CheckStatus::mismatch);
  CHECK(find_check(e65, "print-p3-eigen").status == CheckStatus::mismatch);
  CHECK(find_check(e65, "eigenfunction").status == CheckStatus::match);
}

TEST_CASE("family battery shape") {
  auto checks = family_battery("t", sl2_spec(q_mono(1, 1), ParamChoice::symbolic(), 8),
                               OrderingSelection::both);
  CHECK(find_check(checks, "build").status == CheckStatus::match);
  CHECK(find_check(checks, "eigenfunction").status == CheckStatus::match);
  CHECK(find_check(checks, "lemma-4.3-bprime-x-as-written").status == CheckStatus::match);
  CHECK(find_check(checks, "lemma-4.3-bprime-x-reversed").status == CheckStatus::match);
  CHECK(find_check(checks, "thm-4.4-ii-recurrence-as-written").status ==
        CheckStatus::match);
  CHECK(find_check(checks, "maroni-vanishing").status == CheckStatus::match);
  CHECK(find_check(checks, "maroni-nonzero").status == CheckStatus::match);
  CHECK(find_check(checks, "maroni-regularity").status == CheckStatus::match);

  // ordering selection prunes the claim variants
  auto only_as_written =
      family_battery("t", sl2_spec(q_mono(1, 1), ParamChoice::symbolic(), 8),
                     OrderingSelection::as_written);
  CHECK(only_as_written.size() < checks.size());
  CHECK_THROWS(find_check(only_as_written, "bprime-x-reversed"));
}

TEST_CASE("report over an empty spec list is empty and successful") {
  Report r = full_report({}, OrderingSelection::both, false);
  CHECK(r.checks.empty());
  CHECK(r.clean());
  CHECK(r.matches == 0);
}

TEST_CASE("report accepts extra specs") {
  std::vector<FamilySpec> extra{weyl_spec(q_mono(2, Rat(-1, 2)), 8)};
  Report r = full_report(extra, OrderingSelection::as_written, false);
  CHECK(!r.checks.empty());
  CHECK(r.clean());
  for (const auto& c : r.checks) CHECK(c.id.rfind("spec-", 0) == 0);
}

TEST_CASE("symbolic matches specialize to numeric parameter values") {
  // beta in {0, 1, 1/2, -2}: the spot-check values away from the small
  // integer degeneracies. A symbolic table specialized at beta must equal
  // the table generated with beta pinned.
  Built sym = make(sl2_spec(q_mono(2, Rat(1, 2)), ParamChoice::symbolic(), 8));
  auto specialize = [](const XPoly& p, const Scalar& a, const Scalar& b) {
    XPoly out;
    for (int i = 0; i <= p.degree(); ++i)
      out += XPoly::monomial(unsigned(i), p.coeff(unsigned(i)).substitute(a, b));
    return out;
  };
  for (Rat beta_val : {Rat(0), Rat(1), Rat(1, 2), Rat(-2)}) {
    Built num = make(sl2_spec(q_mono(2, Rat(1, 2)), ParamChoice::fixed(beta_val), 8));
    for (int n = 0; n <= 8; ++n)
      CHECK(specialize(sym.table.at(n), Scalar(0), Scalar(beta_val)) ==
            num.table.at(n));
  }
}

TEST_CASE("full report is deterministic and complete") {
  Report a = full_report({}, OrderingSelection::both);
  Report b = full_report({}, OrderingSelection::both);
  REQUIRE(a.checks.size() == b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    CHECK(a.checks[i].id == b.checks[i].id);
    CHECK(a.checks[i].status == b.checks[i].status);
  }
  CHECK(a.engine_mismatches == 0);
  CHECK(a.paper_discrepancies > 0);
  CHECK(!a.clean());

  for (std::string_view tag :
       {"lemma-3.1", "lemma-4.2", "lemma-4.3", "lemma-5.2", "lemma-5.3", "thm-3.2",
        "thm-4.4", "thm-5.4", "ex-6.1", "ex-6.2", "ex-6.3", "ex-6.4", "ex-6.5"})
    CHECK_NOTHROW(find_check(a.checks, tag));

  // ids are sorted and unique; every mismatch carries a witness
  for (std::size_t i = 1; i < a.checks.size(); ++i)
    CHECK(a.checks[i - 1].id < a.checks[i].id);
  for (const auto& c : a.checks)
    if (c.status == CheckStatus::mismatch) {
      CHECK(c.witness.has_value());
      CHECK(!c.witness->lhs.empty());
      CHECK(!c.witness->rhs.empty());
    }
}
