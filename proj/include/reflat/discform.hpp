#pragma once

#include <optional>
#include <string>
#include <vector>

#include "reflat/lattice.hpp"

namespace reflat {

/** Finite quadratic form (A, q), q: A -> Q/2Z, with bilinear b: A x A -> Q/Z,
 *  b(x,y) = (q(x+y) - q(x) - q(y))/2. Elements are residue vectors over the
 *  listed generators. Forms derived from a lattice carry rational lifts of the
 *  generators into L tensor Q. */
struct Fqm {
  ZVec orders;  // order of each generator, all > 1
  QVec qdiag;   // q(g_i) in [0, 2)
  QMat bmat;    // b(g_i, g_j) in [0, 1); diagonal is q mod 1

  bool has_lifts = false;
  QMat lifts;     // rows: generator lifts in source lattice coordinates
  QMat dual_map;  // x in L-dual coords -> full SNF residue vector
  ZVec full_orders;
  std::vector<std::size_t> kept;  // indices of nontrivial SNF factors

  std::size_t ngen() const { return orders.size(); }
  Int order() const;
  ZVec normalize(ZVec x) const;
  Rat q_of(const ZVec& x) const;               // in [0, 2)
  Rat b_of(const ZVec& x, const ZVec& y) const;  // in [0, 1)
  bool is_zero_elem(const ZVec& x) const;

  /** All elements; throws CapExceeded beyond max_elements. */
  std::vector<ZVec> elements(const Int& max_elements = Int(200000)) const;
  std::vector<ZVec> two_torsion() const;

  /** Class of a dual vector (rational coords in the source basis). */
  ZVec class_of_dual(const QVec& x) const;
  /** A rational representative of an element in the source basis. */
  QVec lift_of(const ZVec& elem) const;
};

Fqm discriminant_form(const Lattice& l);

/** Smallest number of generators of the p-part. */
std::size_t fqm_length_p(const Fqm& a, const Int& p);
/** max over primes of fqm_length_p. */
std::size_t fqm_length(const Fqm& a);
Int fqm_exponent(const Fqm& a);
std::vector<Int> fqm_prime_support(const Fqm& a);

Fqm direct_sum_fqm(const Fqm& a, const Fqm& b);

/** Synthetic form from a block expression: terms joined by '+', each either
 *  c(d,num/den) for a cyclic factor of order d with q(g) = num/den,
 *  or u(k) / v(k) for the even rank two forms on (Z/2^k)^2. */
Fqm fqm_from_blocks(const std::string& spec);

/** Isomorphism-grade fingerprint: elementary divisors of the group plus the
 *  multiset of (element order, q value) pairs. Used for deduplication. */
std::string fqm_fingerprint(const Fqm& a, const Int& max_elements = Int(200000));

/** Signature mod 8 recovered from the Gauss sum of q. Throws if the sum does
 *  not have the forced magnitude (within tol). */
int milgram_signature(const Fqm& a, const Int& max_elements = Int(200000), double tol = 1e-9);

/** Elements of order dividing 2 with q = -1/2 (the targets of half norm
 *  reflective vectors). */
std::vector<ZVec> pi_elements(const Fqm& a);

struct IsotropicSubgroup {
  std::vector<ZVec> gens;
  Int order = 1;
};

/** All totally isotropic subgroups (q vanishes identically), including the
 *  trivial one. */
std::vector<IsotropicSubgroup> isotropic_subgroups(const Fqm& a, const Int& max_elements = Int(100000),
                                                   std::size_t max_subgroups = 200000);

std::vector<ZVec> span_elements(const Fqm& a, const std::vector<ZVec>& gens);

/** Form induced on G-perp / G for a totally isotropic G. No lifts. */
Fqm quotient_form(const Fqm& a, const std::vector<ZVec>& gens);

struct OverlatticeResult {
  Lattice lat;
  QMat basis_in_old;  // rows: new basis in old coordinates
  Int index = 1;
};

/** Even overlattice L + Z-span of the lifts of a totally isotropic subgroup. */
OverlatticeResult overlattice(const Lattice& l, const Fqm& a, const std::vector<ZVec>& gens);

/** Greedy chain of index-raising steps until no nonzero isotropic element
 *  remains; the result is an even overlattice with anisotropic form. */
OverlatticeResult maximal_even_overlattice(const Lattice& l, const Int& max_elements = Int(200000));

struct CyclicIntermediate {
  Lattice lat;
  QMat basis_in_old;   // rows: basis of the intermediate lattice in L coords
  Int quotient_order;  // order of (overlattice / intermediate), cyclic
};

/** Given L inside an overlattice with basis rows `over_basis` (in L coords),
 *  returns an intermediate lattice containing L whose quotient inside the
 *  overlattice is cyclic of maximal order. */
CyclicIntermediate cyclic_intermediate(const Lattice& l, const QMat& over_basis);

/** Sufficient length test for a 2U direct summand in signature (2, n):
 *  l_2(A) <= n-3 and l_p(A) <= n-4 for odd p. */
bool splits_2U_by_length(const Fqm& a, std::size_t n);

struct EconomicReduction {
  IsotropicSubgroup group;
  Fqm quotient;
};

/** Largest totally isotropic G whose quotient keeps l_2 <= 4, l_p <= 3 for
 *  odd p, and exponent in {e(A), e(A)/2}. */
std::optional<EconomicReduction> economic_isotropic(const Fqm& a, const Int& max_elements = Int(100000),
                                                    std::size_t max_subgroups = 200000);

}  // namespace reflat
