#pragma once

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "reflat/discform.hpp"

namespace reflat {

/** Action of the two standard generators on the group ring C[A]:
 *  T e_l = exp(pi i q(l)) e_l,
 *  S e_l = gamma |A|^{-1/2} sum_m exp(-2 pi i b(l, m)) e_m,
 *  gamma = exp(2 pi i (n - 2)/8) for a source lattice of signature (2, n).
 *  The element order is fixed by `elems`; index 0 is the zero element. */
struct WeilRep {
  Fqm form;
  int n = 0;
  int signature_octant = 0;  // (2 - n) mod 8, the Gauss sum octant of the form
  std::vector<ZVec> elems;
  Eigen::VectorXcd rho_t;  // diagonal of T
  Eigen::MatrixXcd rho_s;
  double relation_residual = 0;  // max deviation over the verified relations

  std::size_t dimension() const { return elems.size(); }
  std::size_t index_of(const ZVec& elem) const;
  std::size_t neg_index(std::size_t i) const;

  std::map<ZVec, std::size_t> index;
};

/** Builds the matrices and machine-verifies (ST)^3 = S^2 and that S^2 is a
 *  unimodular scalar times the antipode e_l -> e_{-l}. The Gauss sum octant
 *  of the form must match (2 - n) mod 8; any mismatch or residual above tol
 *  throws ("convention inconsistency"). |A| > 10^4 throws CapExceeded. */
WeilRep build_weilrep(const Fqm& a, int n, double tol = 1e-9);

/** Column of S at the zero element; every coordinate has modulus |A|^{-1/2}. */
Eigen::VectorXcd s_image_of_e0(const WeilRep& w);

struct InvariantSpace {
  Eigen::MatrixXcd basis;  // columns span the joint fixed space of S and T
  bool ill_conditioned = false;
};

/** Numerical kernel of the stacked system (S - I; T - I), rank decided at
 *  tol; singular values within a factor 10 of the cut raise the flag. */
InvariantSpace invariant_vectors(const WeilRep& w, double tol = 1e-9);

enum class ObstructionVerdict { ExcludedWeight, ExcludedInvariance, NotExcluded, Inconclusive };

const char* obstruction_verdict_name(ObstructionVerdict v);

struct ObstructionResult {
  ObstructionVerdict verdict = ObstructionVerdict::Inconclusive;
  Rat weight;          // (26 - n)/2
  std::string reason;
  std::vector<std::complex<double>> witness;  // S e_0 for invariance exclusions
};

/** Exclusion test for signature (2, n), n >= 26: negative weight for n >= 27,
 *  the invariance argument at n = 26 with |A| > 1, NotExcluded for the
 *  unimodular case, Inconclusive below 26. The caller must assert that L has
 *  a 2U direct summand; otherwise throws "reduction required". */
ObstructionResult borcherds_obstruction(const Lattice& l, bool caller_asserts_2u,
                                        double tol = 1e-9);

enum class ReflectiveClass { ReflectiveFullDiv, ReflectiveHalfDiv, NotReflective };

const char* reflective_class_name(ReflectiveClass c);

struct ReflectiveInfo {
  ReflectiveClass kind = ReflectiveClass::NotReflective;
  Int d;               // (l, l) = -2d
  Int div;             // divisibility of l in L
  ZVec heegner_class;  // class of l/div in A_L; empty when not reflective
  Rat heegner_disc;    // -1/(4d) at div = 2d, -1/d at div = d
};

/** A primitive vector of norm -2d is reflective iff div(l) is 2d or d. */
ReflectiveInfo classify_reflective_vector(const ZVec& l, const Lattice& lat);

/** Zero divisor data of a hypothetical form of weight alpha: multiplicity
 *  beta0 on the divisor cut out by norm -2 vectors of class 0, beta_mu on the
 *  class-mu divisors (mu of order 2, q(mu) = 3/2). */
struct DivisorPattern {
  Rat alpha;
  Int beta0 = 0;
  std::vector<std::pair<ZVec, Int>> beta_mu;
};

Rat max_slope(const DivisorPattern& p);

struct PrincipalPart {
  // (class, exponent, multiplicity); zero multiplicities are retained.
  std::vector<std::tuple<ZVec, Rat, Int>> terms;
};

/** beta0 q^{-1} e_0 + sum_mu (beta_mu - beta0) q^{-1/4} e_mu. */
PrincipalPart principal_part(const DivisorPattern& p);

}  // namespace reflat
