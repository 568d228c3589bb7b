#include <algorithm>
#include <random>

#include "doctest.h"
#include "reflat/discform.hpp"
#include "support/oracles.hpp"

using namespace reflat;

TEST_CASE("discriminant groups of standard lattices") {
  Fqm a1 = discriminant_form(lattice_ade(AdeKind::A, 1));
  REQUIRE(a1.ngen() == 1);
  CHECK(a1.orders[0] == 2);
  CHECK(a1.qdiag[0] == Rat(3, 2));

  Fqm pos2 = discriminant_form(lattice_rank1(Int(2)));
  REQUIRE(pos2.ngen() == 1);
  CHECK(pos2.qdiag[0] == Rat(1, 2));

  Fqm a2 = discriminant_form(lattice_ade(AdeKind::A, 2));
  REQUIRE(a2.ngen() == 1);
  CHECK(a2.orders[0] == 3);
  CHECK(a2.qdiag[0] == Rat(4, 3));

  CHECK(discriminant_form(lattice_ade(AdeKind::E, 8)).ngen() == 0);
  CHECK(discriminant_form(lattice_U()).ngen() == 0);

  Fqm d4 = discriminant_form(lattice_ade(AdeKind::D, 4));
  REQUIRE(d4.ngen() == 2);
  CHECK(d4.order() == 4);
  for (const auto& x : d4.elements())
    if (!d4.is_zero_elem(x)) CHECK(d4.q_of(x) == Rat(1));

  CHECK_THROWS_AS(discriminant_form(make_lattice(ZMat(1, 1))), std::invalid_argument);
}

TEST_CASE("quadratic form identity q(x+y) = q(x) + q(y) + 2b(x,y)") {
  std::mt19937 rng(47);
  for (int t = 0; t < 12; ++t) {
    Lattice l = oracle::random_even_lattice(rng, 5, false);
    if (det(l.gram) == 0) continue;
    Fqm a = discriminant_form(l);
    if (a.order() > 400) continue;
    auto elems = a.elements(Int(400));
    for (std::size_t i = 0; i < elems.size(); i += 3)
      for (std::size_t j = 0; j < elems.size(); j += 2) {
        ZVec sum(a.ngen());
        for (std::size_t k = 0; k < a.ngen(); ++k) sum[k] = elems[i][k] + elems[j][k];
        Rat lhs = a.q_of(sum);
        Rat rhs = mod_interval(a.q_of(elems[i]) + a.q_of(elems[j]) + Rat(2) * a.b_of(elems[i], elems[j]), Rat(2));
        CHECK(lhs == rhs);
      }
  }
}

TEST_CASE("lifts represent their classes") {
  std::mt19937 rng(53);
  for (int t = 0; t < 10; ++t) {
    Lattice l = oracle::random_even_lattice(rng, 5, false);
    Fqm a = discriminant_form(l);
    if (a.order() > 100) continue;
    QMat gq = to_qmat(l.gram);
    for (const auto& x : a.elements()) {
      QVec lift = a.lift_of(x);
      CHECK(a.class_of_dual(lift) == a.normalize(x));
      CHECK(mod_interval(form_value(lift, gq, lift), Rat(2)) == a.q_of(x));
    }
    // Lattice vectors are dual vectors of class zero.
    QVec inside(l.rank(), Rat(0));
    if (l.rank() > 0) inside[0] = 3;
    CHECK(a.is_zero_elem(a.class_of_dual(inside)));
  }
}

TEST_CASE("milgram: gauss sum signature matches lattice signature") {
  std::mt19937 rng(59);
  int checked = 0;
  while (checked < 15) {
    Lattice l = oracle::random_even_lattice(rng, 6, false);
    if (det(l.gram) == 0) continue;
    Fqm a = discriminant_form(l);
    if (a.order() > 3000) continue;
    ++checked;
    Signature sig = signature(l.gram);
    int expect = static_cast<int>(((static_cast<long>(sig.pos) - static_cast<long>(sig.neg)) % 8 + 8) % 8);
    CHECK(milgram_signature(a) == expect);
  }
  CHECK(milgram_signature(discriminant_form(lattice_rank1(Int(-2)))) == 7);
}

TEST_CASE("pi elements (2-torsion with q = -1/2)") {
  CHECK(pi_elements(discriminant_form(lattice_from_expr("2U+E8+A1"))).size() == 1);
  CHECK(pi_elements(discriminant_form(lattice_from_expr("2U+D4"))).empty());
  CHECK(pi_elements(discriminant_form(lattice_from_expr("U+<-4>"))).empty());
  CHECK(pi_elements(discriminant_form(lattice_from_expr("U+2A1"))).size() == 2);
  CHECK(pi_elements(discriminant_form(lattice_ade(AdeKind::A, 1))).size() == 1);
}

TEST_CASE("isotropic subgroups of 4A1 and 4A2 forms") {
  Fqm a = discriminant_form(lattice_from_expr("4A1"));
  auto subs = isotropic_subgroups(a);
  REQUIRE(subs.size() == 2);
  CHECK(subs[0].order == 1);
  CHECK(subs[1].order == 2);
  ZVec ones{1, 1, 1, 1};
  CHECK(a.q_of(ones) == 0);

  Fqm b = discriminant_form(lattice_from_expr("4A2"));
  auto subs2 = isotropic_subgroups(b);
  CHECK(subs2.size() > 2);
  Int max_order = 1;
  for (const auto& g : subs2) {
    max_order = std::max(max_order, g.order);
    for (const auto& x : span_elements(b, g.gens)) CHECK(b.q_of(x) == 0);
  }
  CHECK(max_order == 9);
}

TEST_CASE("overlattice of 4A1 along the diagonal class is D4") {
  Lattice l = lattice_from_expr("4A1");
  Fqm a = discriminant_form(l);
  ZVec ones{1, 1, 1, 1};
  OverlatticeResult ov = overlattice(l, a, {ones});
  CHECK(ov.index == 2);
  CHECK(abs(det(ov.lat.gram)) == 4);
  RootDecomposition dec = root_sublattice(ov.lat);
  REQUIRE(dec.components.size() == 1);
  CHECK(ade_label(dec.components[0].kind, dec.components[0].rank) == "D4");
  CHECK(dec.components[0].root_count == 24);
}

TEST_CASE("maximal even overlattice of D8 is E8") {
  OverlatticeResult ov = maximal_even_overlattice(lattice_ade(AdeKind::D, 8));
  CHECK(ov.index == 2);
  CHECK(abs(det(ov.lat.gram)) == 1);
  CHECK(roots(ov.lat).size() == 120);
  CHECK(discriminant_form(ov.lat).ngen() == 0);
}

TEST_CASE("maximal even overlattice stops at an anisotropic form") {
  std::mt19937 rng(61);
  for (int t = 0; t < 10; ++t) {
    Lattice l = oracle::random_even_lattice(rng, 6, false);
    if (det(l.gram) == 0) continue;
    Fqm a0 = discriminant_form(l);
    if (a0.order() > 2000) continue;
    OverlatticeResult ov = maximal_even_overlattice(l);
    Fqm a = discriminant_form(ov.lat);
    for (const auto& x : a.elements())
      if (!a.is_zero_elem(x)) CHECK(a.q_of(x) != 0);
    CHECK(abs(det(l.gram)) == abs(det(ov.lat.gram)) * ov.index * ov.index);
  }
}

TEST_CASE("quotient form matches the overlattice discriminant form") {
  std::mt19937 rng(67);
  int checked = 0;
  while (checked < 10) {
    Lattice l = oracle::random_even_lattice(rng, 6, false);
    if (det(l.gram) == 0) continue;
    Fqm a = discriminant_form(l);
    if (a.order() > 300) continue;
    ++checked;
    for (const auto& g : isotropic_subgroups(a)) {
      Fqm q = quotient_form(a, g.gens);
      OverlatticeResult ov = overlattice(l, a, g.gens);
      Fqm direct = discriminant_form(ov.lat);
      CHECK(fqm_fingerprint(q) == fqm_fingerprint(direct));
      CHECK(q.order() * g.order * g.order == a.order());
    }
  }
}

TEST_CASE("cyclic intermediate lattice") {
  // Index 4 sublattice of E8 cut out by two mod 2 conditions.
  Lattice e8 = lattice_ade(AdeKind::E, 8);
  ZMat rows(8, 8);
  auto set_row = [&](std::size_t r, std::initializer_list<long> vals) {
    std::size_t j = 0;
    for (long v : vals) rows.at(r, j++) = v;
  };
  set_row(0, {2, 0, 0, 0, 0, 0, 0, 0});
  set_row(1, {1, 0, 0, 1, 0, 0, 0, 0});
  set_row(2, {0, 1, 0, 0, 0, 0, 0, 0});
  set_row(3, {0, 0, 2, 0, 0, 0, 0, 0});
  set_row(4, {0, 0, 0, 0, 1, 0, 0, 0});
  set_row(5, {0, 0, 0, 0, 0, 1, 0, 0});
  set_row(6, {0, 0, 0, 0, 0, 0, 1, 0});
  set_row(7, {0, 0, 0, 0, 0, 0, 0, 1});
  Lattice sub = sublattice_from_rows(e8, rows).lat;
  CHECK(abs(det(sub.gram)) == 16);
  OverlatticeResult ov = maximal_even_overlattice(sub);
  CHECK(ov.index == 4);
  CHECK(abs(det(ov.lat.gram)) == 1);
  CyclicIntermediate ci = cyclic_intermediate(sub, ov.basis_in_old);
  CHECK(ci.quotient_order == 2);
  CHECK(abs(det(ci.lat.gram)) == 4);
  CHECK(fqm_length(discriminant_form(ci.lat)) <= 2);
  // The intermediate lattice contains the original one.
  QMat back = inverse(ci.basis_in_old);
  for (const auto& v : back.data) CHECK(is_integral(v));
}

TEST_CASE("length and exponent bookkeeping") {
  Fqm a = discriminant_form(lattice_from_expr("2U+8A1"));
  CHECK(fqm_length_p(a, Int(2)) == 8);
  CHECK(fqm_length_p(a, Int(3)) == 0);
  CHECK(fqm_length(a) == 8);
  CHECK(fqm_exponent(a) == 2);
  CHECK(!splits_2U_by_length(a, 10));

  Fqm b = discriminant_form(lattice_from_expr("2U+E8+A1"));
  CHECK(splits_2U_by_length(b, 11));
  CHECK(splits_2U_by_length(discriminant_form(lattice_from_expr("2U+E8")), 10));

  Fqm c = discriminant_form(lattice_from_expr("2U+4A2"));
  CHECK(fqm_length_p(c, Int(3)) == 4);
  CHECK(splits_2U_by_length(c, 10));  // 4 <= 10 - 4
  CHECK(!splits_2U_by_length(c, 7));  // 4 > 7 - 4
}

TEST_CASE("economic isotropic reduction") {
  // (Z/3)^4 with q = 4/3 on each generator: the order 9 subgroups quotient to
  // the trivial form (wrong exponent), an order 3 subgroup keeps exponent 3.
  Fqm a = discriminant_form(lattice_from_expr("4A2"));
  auto red = economic_isotropic(a);
  REQUIRE(red.has_value());
  CHECK(red->group.order == 3);
  CHECK(fqm_exponent(red->quotient) == 3);
  CHECK(fqm_length_p(red->quotient, Int(3)) == 2);

  // (Z/2)^8 with q = 3/2: the extended Hamming code is totally isotropic and
  // its quotient is trivial, which the halved exponent rule accepts.
  Fqm b = discriminant_form(lattice_from_expr("8A1"));
  auto red2 = economic_isotropic(b);
  REQUIRE(red2.has_value());
  CHECK(red2->group.order == 16);
  CHECK(red2->quotient.order() == 1);
}

TEST_CASE("synthetic block forms") {
  CHECK(fqm_fingerprint(fqm_from_blocks("c(2,3/2)")) ==
        fqm_fingerprint(discriminant_form(lattice_ade(AdeKind::A, 1))));
  CHECK(fqm_fingerprint(fqm_from_blocks("u(1)")) ==
        fqm_fingerprint(discriminant_form(lattice_ade(AdeKind::D, 8))));
  CHECK(fqm_fingerprint(fqm_from_blocks("v(1)")) ==
        fqm_fingerprint(discriminant_form(lattice_ade(AdeKind::D, 4))));
  CHECK(fqm_fingerprint(fqm_from_blocks("c(3,4/3)")) ==
        fqm_fingerprint(discriminant_form(lattice_ade(AdeKind::A, 2))));
  CHECK(milgram_signature(fqm_from_blocks("u(1)")) == 0);
  CHECK(milgram_signature(fqm_from_blocks("v(1)")) == 4);
  CHECK(milgram_signature(fqm_from_blocks("c(3,4/3)")) == 6);
  CHECK(fqm_from_blocks("c(4,7/4)+u(2)").order() == 64);
  CHECK_THROWS_AS(fqm_from_blocks("c(2,1/3)"), std::invalid_argument);
  CHECK_THROWS_AS(fqm_from_blocks("w(1)"), std::invalid_argument);
  CHECK_THROWS_AS(fqm_from_blocks(""), std::invalid_argument);
}

TEST_CASE("element enumeration cap") {
  Fqm big = fqm_from_blocks("c(600000,2/600000)");
  CHECK_THROWS_AS(big.elements(), CapExceeded);
  CHECK_THROWS_AS(milgram_signature(big), CapExceeded);
}
