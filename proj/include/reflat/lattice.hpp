#pragma once

#include <string>
#include <vector>

#include "reflat/matrix.hpp"

namespace reflat {

/** An even lattice given by the Gram matrix of an integral basis.
 *  Vectors are coordinate rows; a sublattice is the row span of a matrix. */
struct Lattice {
  ZMat gram;
  std::string name;

  std::size_t rank() const { return gram.rows; }
};

struct Signature {
  std::size_t pos = 0, neg = 0, zero = 0;
};

/** Exact inertia of a symmetric integer matrix (congruence reduction). */
Signature signature(const ZMat& gram);

bool is_symmetric(const ZMat& gram);
bool is_even(const ZMat& gram);

/** Validates symmetry and evenness. */
Lattice make_lattice(ZMat gram, std::string name = "");

Lattice lattice_U();
/** Rank one lattice generated by a vector of norm k (k even, nonzero). */
Lattice lattice_rank1(const Int& k);

enum class AdeKind { A, D, E };

std::string ade_label(AdeKind kind, std::size_t rank);

/** Negative definite root lattice of the given type: A_k (k>=1), D_k (k>=4),
 *  E_6, E_7, E_8. Basis rows are simple roots, so -gram is the Cartan matrix. */
Lattice lattice_ade(AdeKind kind, std::size_t rank);

Lattice direct_sum(const Lattice& a, const Lattice& b);
Lattice direct_sum(const std::vector<Lattice>& parts);

Int norm_of(const Lattice& l, const ZVec& v);
Int inner(const Lattice& l, const ZVec& v, const ZVec& w);
/** gcd of (v, x) over x in the lattice; 0 for v = 0. */
Int divisibility(const Lattice& l, const ZVec& v);

struct Sublattice {
  ZMat basis;   // rows in ambient coordinates
  Lattice lat;  // gram of those rows
};

Sublattice sublattice_from_rows(const Lattice& l, const ZMat& rows);

/** Saturated orthogonal complement of the row span inside the ambient lattice. */
Sublattice orth_complement(const Lattice& l, const ZMat& rows);

/** Rational coordinates of the orthogonal projection of v onto the span of
 *  sub_basis, expressed in sub_basis coordinates. */
QVec project_coords(const Lattice& l, const ZMat& sub_basis, const ZVec& v);

Rat norm_q(const ZMat& gram, const QVec& v);

/** All integer points x with (x - center) c (x - center)^T <= bound,
 *  for c positive definite. Exact; no floating point. */
std::vector<ZVec> ellipsoid_points(const QMat& c, const QVec& center, const Rat& bound);

struct LatticeVector {
  ZVec coords;
  Int norm;
};

/** Nonzero vectors of a definite lattice with |norm| <= max_abs_norm,
 *  one representative per antipodal pair (first nonzero coordinate positive). */
std::vector<LatticeVector> short_vectors(const Lattice& l, const Int& max_abs_norm);

/** Norm -2 vectors of a negative definite lattice, one per antipodal pair. */
std::vector<ZVec> roots(const Lattice& l);

struct RootComponent {
  AdeKind kind;
  std::size_t rank = 0;
  std::size_t root_count = 0;  // counts both signs
  ZMat simple;                 // rows: a simple system, Z-basis of the component
  std::vector<ZVec> component_roots;  // one per antipodal pair
};

struct RootDecomposition {
  std::vector<RootComponent> components;
  std::size_t total_rank = 0;
  std::size_t total_root_count = 0;
};

/** Irreducible components of the sublattice generated by roots. */
RootDecomposition root_sublattice(const Lattice& l);

/** Type of an irreducible root lattice from (rank, number of roots). */
std::pair<AdeKind, std::size_t> classify_root_component(std::size_t rank, std::size_t root_count);

struct ParsedLattice {
  Lattice lat;
  struct Block {
    std::string label;
    std::size_t offset = 0;
    std::size_t rank = 0;
  };
  std::vector<Block> blocks;
};

/** Direct sum expression: terms joined by '+', each an optional multiplicity
 *  followed by U, Ak, Dk (k>=4), E6/E7/E8, or <m> with m even and nonzero.
 *  Example: "2U+E8+3A1", "U+<-4>". */
ParsedLattice parse_lattice_expr(const std::string& expr);

inline Lattice lattice_from_expr(const std::string& expr) { return parse_lattice_expr(expr).lat; }

}  // namespace reflat
