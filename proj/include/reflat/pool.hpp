#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reflat/discform.hpp"

namespace reflat {

struct AdePart {
  AdeKind kind;
  std::size_t rank = 0;
};

/** Multiset of irreducible root lattice types, total rank in [1, n-2]. */
struct RootTypeList {
  std::vector<AdePart> parts;  // sorted canonically
  std::size_t total_rank = 0;
  std::string label;           // parseable direct sum expression
};

std::vector<RootTypeList> enumerate_Rn(std::size_t n);

/** Least |norm| over nonzero vectors of an irreducible root lattice pairing
 *  nonzero with every root, with a realizing vector in simple root
 *  coordinates. Exact branch and bound over the dominance cone. */
struct MinregResult {
  Int value;
  ZVec coords;
};
MinregResult interior_minimum(AdeKind kind, std::size_t rank);

struct NonorthWitness {
  Int norm;    // negative even
  ZVec coords; // in the basis of r
};

/** max (m,m) over m in r with (m, l) != 0 for every root l; r must be spanned
 *  by its roots. A positive cap bounds |norm| and throws CapExceeded when the
 *  true value lies beyond it; cap 0 means unlimited (the chamber search is
 *  exact and always terminates). */
NonorthWitness max_nonorthogonal_vector(const Lattice& r, const Int& norm_cap = Int(0));
Int max_nonorthogonal_norm(const Lattice& r, const Int& norm_cap = Int(0));

Int compute_a_n(std::size_t n);

/** Minimal positive norm of a vector in U + kA_1 pairing nonzero with every
 *  norm -2 vector, searched by ascending target norm over bounded coefficient
 *  boxes. coords = (x, y, c_1..c_k) with m = x e + y f + sum c_i r_i. */
struct ChamberPoint {
  Int norm;
  ZVec coords;
};
ChamberPoint min_chamber_point(std::size_t k, const Int& norm_cap = Int(64), long box_radius = 12);
Int min_chamber_norm(std::size_t k);

Int compute_b_n(std::size_t n);

struct CurveInvariants {
  Rat area_over_2pi;   // positive
  Int max_stabilizer;  // positive
  std::string source;
};

enum class PoolFamily { PrimeFour, Hyperbolic };

struct PoolMember {
  PoolFamily family = PoolFamily::PrimeFour;
  Int parameter;  // a for <4>+<4>+<-a>, b for U+<b>; positive even
  Lattice gram;
  std::optional<CurveInvariants> curve_data;
};

std::vector<PoolMember> build_pool(std::size_t n, const Int& a_n, const Int& b_n);
std::vector<PoolMember> build_pool(std::size_t n);

struct HeegnerTarget {
  bool is_mu = false;
  ZVec mu;  // class in A_L when is_mu
};

struct GenericCurveCertificate {
  ZMat k_rows;       // 3 basis rows in L coordinates
  Lattice k_lat;     // gram of those rows
  PoolMember pool;
  ZVec witness_root;  // L coordinates
  HeegnerTarget target;
  std::string case_tag;  // "a", "b" or "mu-reduction"
};

/** L must be presented with an explicit leading 2U block (gram starts with
 *  two hyperbolic planes, orthogonal to the rest). For a mu target, a
 *  divisibility 2 root representing mu is split off and the complement is
 *  re-split along a fresh 2U before running the interior construction. */
GenericCurveCertificate construct_generic_K(const Lattice& l, const HeegnerTarget& target);

/** True iff the orthogonal complement of K in L carries no norm -2 vector. */
bool check_condition_i(const ZMat& k_rows, const Lattice& l);

/** True iff the witness has norm -2, defines the target component, and
 *  projects to K with negative norm. */
bool check_condition_ii(const GenericCurveCertificate& cert, const Lattice& l);

}  // namespace reflat
