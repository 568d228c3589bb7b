#pragma once

#include <random>
#include <vector>

#include "reflat/lattice.hpp"

namespace reflat::oracle {

/** Brute force short vector search for a definite form: per-coordinate box
 *  radii from the diagonal of the inverse form, then an odometer scan.
 *  Returns nonzero vectors with |norm| <= max_abs_norm, first nonzero
 *  coordinate positive, sorted. Independent of the lattice layer's descent. */
std::vector<ZVec> box_short_vectors(const ZMat& gram, long max_abs_norm);

/** Product of `steps` random elementary matrices (shears and swaps). */
ZMat random_unimodular(std::mt19937& rng, std::size_t n, int steps, int coeff = 2);

/** Same lattice on a new basis: rows of u are the new basis vectors. */
Lattice change_basis(const Lattice& l, const ZMat& u);

/** Random direct sum of small blocks (U, <2k>, A/D/E) on a scrambled basis. */
Lattice random_even_lattice(std::mt19937& rng, std::size_t max_rank, bool definite_only);

/** Smallest norm among vectors not orthogonal to any root of the given root
 *  lattice, by float Fincke-Pohst over coefficient vectors with an exact
 *  integer recheck at every leaf. Feasible for rank <= 6. */
Int oracle_interior_minimum_small(AdeKind kind, std::size_t rank);

/** Exhaustive scan of the integrally constrained chamber parametrization up
 *  to cap_value, fixed bound, no branch ordering. Returns the minimum found
 *  or -1 if nothing qualifies under the cap. Confirms claimed values where
 *  the coefficient box is out of reach (rank 7 and up). */
Int oracle_interior_minimum_tbox(AdeKind kind, std::size_t rank, const Int& cap_value);

/** Max over root systems of total rank <= n-2 of summed interior minima;
 *  small ranks recomputed from scratch, large ranks confirmed against the
 *  library value by the chamber scan (-1 on any refutation). */
Int oracle_a_n(std::size_t n);

/** Naive chamber minimum on U + k A_1: ascending even norms, coefficient box
 *  of radius 8 reduced only by signed permutations, each candidate qualified
 *  through a kernel basis of its pairing form and the box root scan. */
Int oracle_min_chamber_norm(std::size_t k, long norm_cap = 64);

Int oracle_b_n(std::size_t n);

}  // namespace reflat::oracle
