#include <cmath>
#include <complex>

#include "doctest.h"
#include "reflat/weilrep.hpp"

using namespace reflat;

namespace {

WeilRep rep_of(const std::string& expr) {
  Lattice m = lattice_from_expr(expr);
  return build_weilrep(discriminant_form(m), static_cast<int>(m.rank()) + 2);
}

double abs_err(const std::complex<double>& a, const std::complex<double>& b) {
  return std::abs(a - b);
}

}  // namespace

TEST_CASE("generator relations hold across a discriminant corpus") {
  for (const char* expr : {"A1", "A2", "A3", "A4", "D4", "D5", "E6", "E7", "2A1", "A1+A2",
                           "<-4>", "<-4>+<-4>", "D8", "E8+A1", "4A1", "<-6>", "<-8>+A2"}) {
    CAPTURE(expr);
    WeilRep w = rep_of(expr);
    CHECK(w.relation_residual < 1e-9);
    for (Eigen::Index i = 0; i < w.rho_t.size(); ++i)
      CHECK(std::abs(std::abs(w.rho_t(i)) - 1.0) < 1e-12);

    double target = 1.0 / std::sqrt(static_cast<double>(w.dimension()));
    Eigen::VectorXcd img = s_image_of_e0(w);
    for (Eigen::Index i = 0; i < img.size(); ++i) {
      CHECK(std::abs(std::abs(img(i)) - target) < 1e-12);
      auto ni = static_cast<Eigen::Index>(w.neg_index(static_cast<std::size_t>(i)));
      CHECK(abs_err(img(i), img(ni)) < 1e-12);
    }
  }
}

TEST_CASE("fourth power of S is a unimodular scalar") {
  WeilRep w = rep_of("D4");
  Eigen::MatrixXcd s4 = w.rho_s * w.rho_s * w.rho_s * w.rho_s;
  std::complex<double> scalar = s4(0, 0);
  CHECK(std::abs(std::abs(scalar) - 1.0) < 1e-12);
  Eigen::MatrixXcd expect = scalar * Eigen::MatrixXcd::Identity(s4.rows(), s4.cols());
  CHECK((s4 - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("octant mismatch is refused") {
  Fqm a = discriminant_form(lattice_from_expr("A1"));
  CHECK_THROWS_AS(build_weilrep(a, 10), std::runtime_error);
  CHECK_THROWS_AS(build_weilrep(a, 12), std::runtime_error);
  CHECK_NOTHROW(build_weilrep(a, 3));
  CHECK_NOTHROW(build_weilrep(a, 11));
  CHECK_NOTHROW(build_weilrep(a, 19));
}

TEST_CASE("order two matrices match the hand computation") {
  WeilRep w = build_weilrep(discriminant_form(lattice_from_expr("A1")), 11);
  double r = 1.0 / std::sqrt(2.0);
  std::complex<double> gamma = std::polar(1.0, M_PI / 4);
  CHECK(abs_err(w.rho_t(0), {1, 0}) < 1e-12);
  CHECK(abs_err(w.rho_t(1), std::polar(1.0, 3 * M_PI / 2)) < 1e-12);
  CHECK(abs_err(w.rho_s(0, 0), gamma * r) < 1e-12);
  CHECK(abs_err(w.rho_s(0, 1), gamma * r) < 1e-12);
  CHECK(abs_err(w.rho_s(1, 0), gamma * r) < 1e-12);
  CHECK(abs_err(w.rho_s(1, 1), -gamma * r) < 1e-12);

  Eigen::MatrixXcd st = w.rho_s * w.rho_t.asDiagonal().toDenseMatrix();
  Eigen::MatrixXcd st3 = st * st * st;
  Eigen::MatrixXcd s2 = w.rho_s * w.rho_s;
  CHECK((st3 - s2).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("trivial group representation is the identity") {
  Lattice e8 = lattice_from_expr("E8");
  WeilRep w = build_weilrep(discriminant_form(e8), 10);
  REQUIRE(w.dimension() == 1);
  CHECK(abs_err(w.rho_s(0, 0), {1, 0}) < 1e-12);
  CHECK(abs_err(w.rho_t(0), {1, 0}) < 1e-12);

  WeilRep w26 = build_weilrep(discriminant_form(lattice_from_expr("E8")), 26);
  CHECK(abs_err(w26.rho_s(0, 0), {1, 0}) < 1e-12);
}

TEST_CASE("invariant vectors") {
  SUBCASE("trivial group has the full line") {
    WeilRep w = build_weilrep(discriminant_form(lattice_from_expr("E8")), 10);
    InvariantSpace inv = invariant_vectors(w);
    REQUIRE(inv.basis.cols() == 1);
    CHECK(std::abs(std::abs(inv.basis(0, 0)) - 1.0) < 1e-9);
    CHECK_FALSE(inv.ill_conditioned);
  }
  SUBCASE("order two group at n = 11 has no invariants") {
    WeilRep w = build_weilrep(discriminant_form(lattice_from_expr("A1")), 11);
    InvariantSpace inv = invariant_vectors(w);
    CHECK(inv.basis.cols() == 0);
    CHECK_FALSE(inv.ill_conditioned);
  }
  SUBCASE("dimension ignores generator order") {
    WeilRep w1 = rep_of("A1+A2");
    WeilRep w2 = rep_of("A2+A1");
    CHECK(invariant_vectors(w1).basis.cols() == invariant_vectors(w2).basis.cols());
  }
  SUBCASE("fixed space is stable under S squared") {
    WeilRep w = rep_of("D8");
    InvariantSpace inv = invariant_vectors(w);
    Eigen::MatrixXcd s2 = w.rho_s * w.rho_s;
    for (Eigen::Index c = 0; c < inv.basis.cols(); ++c) {
      Eigen::VectorXcd v = s2 * inv.basis.col(c);
      CHECK((w.rho_s * v - v).cwiseAbs().maxCoeff() < 1e-8);
      CHECK((w.rho_t.asDiagonal() * v - v).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("obstruction verdicts") {
  SUBCASE("negative weight at n = 27") {
    ObstructionResult r = borcherds_obstruction(lattice_from_expr("2U+3E8+A1"), true);
    CHECK(r.verdict == ObstructionVerdict::ExcludedWeight);
    CHECK(r.weight == Rat(-1, 2));
    CHECK(r.witness.empty());
  }
  SUBCASE("negative weight at n = 28 regardless of the form") {
    ObstructionResult r = borcherds_obstruction(lattice_from_expr("2U+3E8+2A1"), true);
    CHECK(r.verdict == ObstructionVerdict::ExcludedWeight);
    CHECK(r.weight == Rat(-1));
  }
  SUBCASE("invariance exclusion at n = 26") {
    ObstructionResult r = borcherds_obstruction(lattice_from_expr("2U+2E8+D8"), true);
    CHECK(r.verdict == ObstructionVerdict::ExcludedInvariance);
    CHECK(r.weight == 0);
    REQUIRE(r.witness.size() == 4);
    for (const auto& c : r.witness) CHECK(std::abs(std::abs(c) - 0.5) < 1e-9);
  }
  SUBCASE("unimodular n = 26 is not excluded") {
    ObstructionResult r = borcherds_obstruction(lattice_from_expr("2U+3E8"), true);
    CHECK(r.verdict == ObstructionVerdict::NotExcluded);
  }
  SUBCASE("below the range") {
    ObstructionResult r = borcherds_obstruction(lattice_from_expr("2U+E8"), true);
    CHECK(r.verdict == ObstructionVerdict::Inconclusive);
    CHECK(r.weight == 8);
  }
  SUBCASE("caller must assert the 2U summand") {
    CHECK_THROWS_WITH_AS(borcherds_obstruction(lattice_from_expr("2U+3E8"), false),
                         "reduction required", std::runtime_error);
  }
  SUBCASE("wrong signature") {
    CHECK_THROWS_AS(borcherds_obstruction(lattice_from_expr("E8"), true), std::invalid_argument);
  }
}

TEST_CASE("reflective vector classification") {
  Lattice l = lattice_from_expr("2U+E8+A1");

  SUBCASE("divisibility one root") {
    ZVec v(13, Int(0));
    v[0] = 1;
    v[1] = -1;
    ReflectiveInfo info = classify_reflective_vector(v, l);
    CHECK(info.kind == ReflectiveClass::ReflectiveHalfDiv);
    CHECK(info.d == 1);
    CHECK(info.div == 1);
    CHECK(info.heegner_disc == Rat(-1));
    Fqm a = discriminant_form(l);
    CHECK(a.is_zero_elem(info.heegner_class));
  }
  SUBCASE("divisibility two root") {
    ZVec v(13, Int(0));
    v[12] = 1;
    ReflectiveInfo info = classify_reflective_vector(v, l);
    CHECK(info.kind == ReflectiveClass::ReflectiveFullDiv);
    CHECK(info.div == 2);
    CHECK(info.heegner_disc == Rat(-1, 4));
    Fqm a = discriminant_form(l);
    CHECK(a.q_of(info.heegner_class) == Rat(3, 2));
  }
  SUBCASE("every root of the definite part is reflective") {
    Lattice m = lattice_from_expr("E8+A1");
    for (const auto& r : roots(m)) {
      ZVec v(13, Int(0));
      for (std::size_t i = 0; i < 9; ++i) v[4 + i] = r[i];
      ReflectiveInfo info = classify_reflective_vector(v, l);
      CHECK(info.kind != ReflectiveClass::NotReflective);
      CHECK(info.d == 1);
    }
  }
  SUBCASE("norm -4 with divisibility 1 is not reflective") {
    Lattice l2 = lattice_from_expr("2U+<-4>");
    ZVec v{1, 0, 0, 0, 1};
    ReflectiveInfo info = classify_reflective_vector(v, l2);
    CHECK(info.kind == ReflectiveClass::NotReflective);
    CHECK(info.d == 2);
    CHECK(info.div == 1);
  }
  SUBCASE("norm -4 with divisibility 4") {
    Lattice l2 = lattice_from_expr("2U+<-4>");
    ZVec v{0, 0, 0, 0, 1};
    ReflectiveInfo info = classify_reflective_vector(v, l2);
    CHECK(info.kind == ReflectiveClass::ReflectiveFullDiv);
    CHECK(info.heegner_disc == Rat(-1, 8));
    Fqm a = discriminant_form(l2);
    CHECK(a.q_of(info.heegner_class) == Rat(7, 4));
  }
  SUBCASE("norm -4 with divisibility 2") {
    Lattice l2 = lattice_from_expr("2U+2A1");
    ZVec v{0, 0, 0, 0, 1, 1};
    ReflectiveInfo info = classify_reflective_vector(v, l2);
    CHECK(info.kind == ReflectiveClass::ReflectiveHalfDiv);
    CHECK(info.heegner_disc == Rat(-1, 2));
  }
  SUBCASE("rejects non-primitive and non-negative input") {
    ZVec twice(13, Int(0));
    twice[0] = 2;
    twice[1] = -2;
    CHECK_THROWS_AS(classify_reflective_vector(twice, l), std::invalid_argument);
    ZVec isotropic(13, Int(0));
    isotropic[0] = 1;
    CHECK_THROWS_AS(classify_reflective_vector(isotropic, l), std::invalid_argument);
  }
}

TEST_CASE("principal part and slope") {
  Fqm a = discriminant_form(lattice_from_expr("A1"));
  ZVec mu = a.elements()[1];
  REQUIRE(a.q_of(mu) == Rat(3, 2));

  SUBCASE("no order two classes") {
    DivisorPattern p{Rat(2), Int(1), {}};
    PrincipalPart pp = principal_part(p);
    REQUIRE(pp.terms.size() == 1);
    CHECK(std::get<1>(pp.terms[0]) == Rat(-1));
    CHECK(std::get<2>(pp.terms[0]) == 1);
    CHECK(max_slope(p) == Rat(1, 2));
  }
  SUBCASE("cancellation keeps the zero coefficient") {
    DivisorPattern p{Rat(1), Int(1), {{mu, Int(1)}}};
    PrincipalPart pp = principal_part(p);
    REQUIRE(pp.terms.size() == 2);
    CHECK(std::get<1>(pp.terms[1]) == Rat(-1, 4));
    CHECK(std::get<2>(pp.terms[1]) == 0);
  }
  SUBCASE("pure class term") {
    DivisorPattern p{Rat(5), Int(0), {{mu, Int(3)}}};
    PrincipalPart pp = principal_part(p);
    CHECK(std::get<2>(pp.terms[0]) == 0);
    CHECK(std::get<2>(pp.terms[1]) == 3);
    CHECK(max_slope(p) == Rat(3, 5));
  }
  SUBCASE("exponents are congruent to q over two") {
    DivisorPattern p{Rat(1), Int(2), {{mu, Int(5)}}};
    for (const auto& [cls, expo, mult] : principal_part(p).terms) {
      (void)mult;
      CHECK(mod_interval(expo - a.q_of(cls) / 2, Rat(1)) == 0);
    }
  }
  SUBCASE("input validation") {
    CHECK_THROWS_AS(max_slope(DivisorPattern{Rat(0), Int(1), {}}), std::invalid_argument);
    CHECK_THROWS_AS(principal_part(DivisorPattern{Rat(1), Int(-1), {}}), std::invalid_argument);
  }
}
