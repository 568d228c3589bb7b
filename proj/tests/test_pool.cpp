#include <random>
#include <set>

#include "doctest.h"
#include "reflat/discform.hpp"
#include "reflat/pool.hpp"
#include "reflat/weilrep.hpp"
#include "support/oracles.hpp"

using namespace reflat;

TEST_CASE("interior minima match the closed form for the A series") {
  // For A_k the interior minimum is j(j+1)(2j+1)/3 with j = ceil(k/2).
  for (std::size_t k = 1; k <= 10; ++k) {
    Int j((k + 1) / 2);
    Int expected = j * (j + 1) * (2 * j + 1) / 3;
    CHECK(interior_minimum(AdeKind::A, k).value == expected);
  }
}

TEST_CASE("interior minima for D and E types") {
  CHECK(interior_minimum(AdeKind::D, 4).value == 14);
  CHECK(interior_minimum(AdeKind::D, 5).value == 30);
  CHECK(interior_minimum(AdeKind::D, 6).value == 66);
  CHECK(interior_minimum(AdeKind::D, 7).value == 104);
  CHECK(interior_minimum(AdeKind::D, 8).value == 140);
  CHECK(interior_minimum(AdeKind::D, 9).value == 204);
  CHECK(interior_minimum(AdeKind::D, 10).value == 304);
  CHECK(interior_minimum(AdeKind::E, 6).value == 78);
  CHECK(interior_minimum(AdeKind::E, 7).value == 228);
  CHECK(interior_minimum(AdeKind::E, 8).value == 620);
}

TEST_CASE("interior minima agree with the coefficient box oracle up to rank 6") {
  std::vector<std::pair<AdeKind, std::size_t>> types;
  for (std::size_t k = 1; k <= 6; ++k) types.push_back({AdeKind::A, k});
  for (std::size_t k = 4; k <= 6; ++k) types.push_back({AdeKind::D, k});
  types.push_back({AdeKind::E, 6});
  for (auto [kind, rank] : types)
    CHECK(interior_minimum(kind, rank).value == oracle::oracle_interior_minimum_small(kind, rank));
}

TEST_CASE("interior minima survive the exhaustive chamber scan above rank 6") {
  std::vector<std::pair<AdeKind, std::size_t>> types;
  for (std::size_t k = 7; k <= 10; ++k) types.push_back({AdeKind::A, k});
  for (std::size_t k = 7; k <= 10; ++k) types.push_back({AdeKind::D, k});
  types.push_back({AdeKind::E, 7});
  types.push_back({AdeKind::E, 8});
  for (auto [kind, rank] : types) {
    Int claimed = interior_minimum(kind, rank).value;
    CHECK(oracle::oracle_interior_minimum_tbox(kind, rank, claimed) == claimed);
  }
}

TEST_CASE("root system enumeration by total rank") {
  auto lists = enumerate_Rn(4);
  std::set<std::string> labels;
  for (const auto& l : lists) labels.insert(l.label);
  CHECK(lists.size() == 3);
  CHECK(labels == std::set<std::string>{"A1", "2A1", "A2"});

  auto five = enumerate_Rn(5);
  CHECK(five.size() == 6);
  std::set<std::string> l5;
  for (const auto& l : five) l5.insert(l.label);
  CHECK(l5.count("3A1") == 1);
  CHECK(l5.count("A1+A2") == 1);
  CHECK(l5.count("A3") == 1);
  CHECK(l5.count("D4") == 0);

  bool d4_at_6 = false;
  for (const auto& l : enumerate_Rn(6)) d4_at_6 = d4_at_6 || l.label == "D4";
  CHECK(d4_at_6);

  // Every label parses back to a definite lattice of the recorded rank.
  for (const auto& l : enumerate_Rn(7)) {
    Lattice lat = lattice_from_expr(l.label);
    CHECK(lat.rank() == l.total_rank);
    Signature sig = signature(lat.gram);
    CHECK(sig.pos == 0);
    CHECK(sig.neg == l.total_rank);
  }
}

TEST_CASE("interior vectors avoid every root and add over components") {
  CHECK(max_nonorthogonal_norm(lattice_ade(AdeKind::A, 1)) == -2);
  CHECK(max_nonorthogonal_norm(lattice_ade(AdeKind::A, 2)) == -2);
  CHECK(max_nonorthogonal_norm(lattice_from_expr("2A1")) == -4);

  std::mt19937 rng(977);
  std::vector<std::string> sums{"A2+A3", "D4+A1", "3A1+A2", "A1+A1+A4", "D4+A2"};
  for (const auto& expr : sums) {
    Lattice plain = lattice_from_expr(expr);
    Int whole = max_nonorthogonal_norm(plain);
    RootDecomposition rd = root_sublattice(plain);
    Int summed = 0;
    for (const auto& comp : rd.components)
      summed += max_nonorthogonal_norm(lattice_ade(comp.kind, comp.rank));
    CHECK(whole == summed);

    ZMat u = oracle::random_unimodular(rng, plain.rank(), static_cast<int>(3 * plain.rank()), 1);
    Lattice scrambled = oracle::change_basis(plain, u);
    CHECK(max_nonorthogonal_norm(scrambled) == whole);
  }

  NonorthWitness w = max_nonorthogonal_vector(lattice_ade(AdeKind::E, 8));
  CHECK(w.norm == -620);
  CHECK(norm_of(lattice_ade(AdeKind::E, 8), w.coords) == -620);

  CHECK_THROWS_AS(max_nonorthogonal_norm(lattice_ade(AdeKind::E, 8), Int(64)), CapExceeded);
  CHECK_THROWS_AS(max_nonorthogonal_norm(lattice_U()), std::invalid_argument);
  CHECK_THROWS_AS(max_nonorthogonal_norm(lattice_rank1(Int(-4))), std::invalid_argument);
}

TEST_CASE("a_n values and the independent oracle") {
  const Int expected[] = {4, 10, 14, 30, 78, 228, 620, 622, 624};
  for (std::size_t n = 4; n <= 12; ++n) {
    CHECK(compute_a_n(n) == expected[n - 4]);
    CHECK(oracle::oracle_a_n(n) == expected[n - 4]);
  }
}

TEST_CASE("chamber minima on U + k A_1") {
  ChamberPoint base = min_chamber_point(0);
  CHECK(base.norm == 4);
  REQUIRE(base.coords.size() == 2);
  CHECK(base.coords[0] == 1);
  CHECK(base.coords[1] == 2);

  const Int expected[] = {4, 22, 20, 18, 16, 14, 12, 10, 6, 6, 4};
  for (std::size_t k = 0; k <= 10; ++k) {
    ChamberPoint cp = min_chamber_point(k);
    CHECK(cp.norm == expected[k]);
    // Witness sanity: correct norm in U + k A_1 and a root free complement.
    std::vector<Lattice> blocks{lattice_U()};
    for (std::size_t i = 0; i < k; ++i) blocks.push_back(lattice_ade(AdeKind::A, 1));
    Lattice lk = direct_sum(blocks);
    CHECK(norm_of(lk, cp.coords) == cp.norm);
    ZMat row(1, cp.coords.size());
    for (std::size_t i = 0; i < cp.coords.size(); ++i) row.at(0, i) = cp.coords[i];
    CHECK(roots(orth_complement(lk, row).lat).empty());
  }

  for (std::size_t k = 0; k <= 10; ++k)
    CHECK(min_chamber_norm(k) == oracle::oracle_min_chamber_norm(k));

  CHECK_THROWS_AS(min_chamber_point(1, Int(2)), CapExceeded);
}

TEST_CASE("b_n values and the independent oracle") {
  for (std::size_t n = 4; n <= 12; ++n) {
    CHECK(compute_b_n(n) == 22);
    CHECK(oracle::oracle_b_n(n) == 22);
  }
}

TEST_CASE("pool membership") {
  auto pool = build_pool(4, Int(8), Int(6));
  CHECK(pool.size() == 7);
  std::size_t fours = 0, hyps = 0;
  for (const auto& m : pool) {
    Signature sig = signature(m.gram.gram);
    CHECK(sig.pos == 2);
    CHECK(sig.neg == 1);
    CHECK(sig.zero == 0);
    for (std::size_t i = 0; i < 3; ++i) CHECK(m.gram.gram.at(i, i) % 2 == 0);
    CHECK(m.parameter % 2 == 0);
    CHECK(m.parameter > 0);
    if (m.family == PoolFamily::PrimeFour) ++fours;
    if (m.family == PoolFamily::Hyperbolic) ++hyps;
    CHECK_FALSE(m.curve_data.has_value());
  }
  CHECK(fours == 4);
  CHECK(hyps == 3);
}

namespace {

void check_certificate(const Lattice& l, const HeegnerTarget& target, const std::string& tag,
                       PoolFamily family, const Int& parameter, std::size_t n) {
  GenericCurveCertificate cert = construct_generic_K(l, target);
  CHECK(cert.case_tag == tag);
  CHECK(cert.pool.family == family);
  CHECK(cert.pool.parameter == parameter);
  CHECK(cert.k_lat.gram == cert.pool.gram.gram);
  CHECK(check_condition_i(cert.k_rows, l));
  CHECK(check_condition_ii(cert, l));
  bool in_pool = false;
  for (const auto& m : build_pool(n))
    in_pool = in_pool || (m.family == cert.pool.family && m.parameter == cert.pool.parameter &&
                          m.gram.gram == cert.pool.gram.gram);
  CHECK(in_pool);
}

}  // namespace

TEST_CASE("generic curve certificates for the base divisor") {
  HeegnerTarget h0;
  h0.is_mu = false;
  check_certificate(lattice_from_expr("2U+E8"), h0, "a", PoolFamily::PrimeFour, Int(620), 10);
  check_certificate(lattice_from_expr("2U+E8+A1"), h0, "a", PoolFamily::PrimeFour, Int(622), 11);
  check_certificate(lattice_from_expr("2U+D4"), h0, "a", PoolFamily::PrimeFour, Int(14), 6);
  check_certificate(lattice_from_expr("2U+<-4>+<-4>"), h0, "b", PoolFamily::Hyperbolic, Int(4), 4);
}

TEST_CASE("generic curve certificate through the two torsion target") {
  Lattice l = lattice_from_expr("2U+E8+A1");
  Fqm a = discriminant_form(l);
  auto pis = pi_elements(a);
  REQUIRE(pis.size() == 1);
  HeegnerTarget t;
  t.is_mu = true;
  t.mu = pis[0];
  check_certificate(l, t, "mu-reduction", PoolFamily::PrimeFour, Int(622), 11);

  GenericCurveCertificate cert = construct_generic_K(l, t);
  CHECK(norm_of(l, cert.witness_root) == -2);
  CHECK(divisibility(l, cert.witness_root) == 2);
  ReflectiveInfo info = classify_reflective_vector(cert.witness_root, l);
  CHECK(info.kind == ReflectiveClass::ReflectiveFullDiv);
  CHECK(a.normalize(info.heegner_class) == a.normalize(pis[0]));
}

TEST_CASE("certificate construction rejects bad inputs") {
  HeegnerTarget h0;
  h0.is_mu = false;
  CHECK_THROWS_AS(construct_generic_K(lattice_from_expr("A2+2U"), h0), std::invalid_argument);
  CHECK_THROWS_AS(construct_generic_K(lattice_from_expr("U+A2"), h0), std::invalid_argument);

  Lattice no_pi = lattice_from_expr("2U+E8");
  HeegnerTarget bad;
  bad.is_mu = true;
  bad.mu = ZVec{};
  CHECK_THROWS_AS(construct_generic_K(no_pi, bad), std::invalid_argument);

  Lattice four = lattice_from_expr("2U+<-4>");
  Fqm a4 = discriminant_form(four);
  HeegnerTarget wrong;
  wrong.is_mu = true;
  wrong.mu = ZVec{Int(2)};  // order two but q = 1, not 3/2
  CHECK_THROWS_AS(construct_generic_K(four, wrong), std::invalid_argument);

  Lattice l = lattice_from_expr("2U+E8");
  GenericCurveCertificate cert = construct_generic_K(l, h0);
  ZMat degenerate(2, l.rank());
  degenerate.at(0, 0) = 1;
  degenerate.at(1, 0) = 1;  // repeated row
  CHECK_THROWS_AS(check_condition_i(degenerate, l), std::invalid_argument);

  GenericCurveCertificate hollow = cert;
  hollow.witness_root.clear();
  CHECK_THROWS_AS(check_condition_ii(hollow, l), std::invalid_argument);

  GenericCurveCertificate wrong_witness = cert;
  wrong_witness.witness_root = ZVec(l.rank(), Int(0));
  wrong_witness.witness_root[0] = 1;  // isotropic e_1, not a root
  CHECK_FALSE(check_condition_ii(wrong_witness, l));
}
