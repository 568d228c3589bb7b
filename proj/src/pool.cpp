#include "reflat/pool.hpp"

#include "reflat/weilrep.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>

namespace reflat {

namespace {

using I64 = std::int64_t;
using Grid = std::vector<std::vector<I64>>;

Grid to_grid(const ZMat& m) {
  Grid g(m.rows, std::vector<I64>(m.cols));
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) g[i][j] = to_long(m.at(i, j), "cartan entry");
  return g;
}

// Scaled interior minimum: minimize t Adj t over integer t >= 1 with
// Adj t = 0 mod det (so that C^{-1} t is a lattice vector). All Adj entries
// are positive for an irreducible Cartan matrix, so the form is strictly
// increasing in every coordinate and branch and bound is exact.
MinregResult interior_minimum_impl(const ZMat& cartan) {
  const std::size_t r = cartan.rows;
  Int det_c = det(cartan);
  if (det_c <= 0) throw std::invalid_argument("not a Cartan matrix");
  QMat inv = inverse(cartan);
  QMat adj_q(r, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) adj_q.at(i, j) = inv.at(i, j) * Rat(det_c);
  Grid adj = to_grid(to_zmat_exact(adj_q));
  const I64 dc = to_long(det_c, "cartan determinant");
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      if (adj[i][j] <= 0) throw std::invalid_argument("not an irreducible Cartan matrix");

  auto scaled_form = [&](const std::vector<I64>& t) {
    I64 s = 0;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) s += adj[i][j] * t[i] * t[j];
    return s;
  };
  auto leaf_coords = [&](const std::vector<I64>& t, std::vector<I64>& y) {
    for (std::size_t i = 0; i < r; ++i) {
      I64 s = 0;
      for (std::size_t j = 0; j < r; ++j) s += adj[i][j] * t[j];
      if (s % dc != 0) return false;
      y[i] = s / dc;
    }
    return true;
  };

  // Doubled fundamental weights sum to a root lattice vector, giving a
  // feasible start.
  std::vector<I64> t(r, 2), y(r);
  if (!leaf_coords(t, y)) throw std::runtime_error("interior seed is not integral");
  I64 best = scaled_form(t);
  std::vector<I64> best_y = y;

  std::vector<std::size_t> ord(r);
  for (std::size_t i = 0; i < r; ++i) ord[i] = i;
  std::sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) { return adj[a][a] > adj[b][b]; });

  std::vector<I64> cur(r, 1);
  std::function<void(std::size_t)> dfs = [&](std::size_t pos) {
    if (pos == r) {
      I64 val = scaled_form(cur);
      if (val < best && leaf_coords(cur, y)) {
        best = val;
        best_y = y;
      }
      return;
    }
    std::size_t p = ord[pos];
    for (cur[p] = 1;; ++cur[p]) {
      // Unset coordinates sit at 1, the entrywise minimum, so this value is a
      // valid lower bound for the whole subtree.
      if (scaled_form(cur) >= best) break;
      dfs(pos + 1);
    }
    cur[p] = 1;
  };
  dfs(0);

  MinregResult out;
  if (best % dc != 0) throw std::runtime_error("interior minimum bookkeeping failed");
  out.value = Int(best / dc);
  out.coords.assign(r, Int(0));
  for (std::size_t i = 0; i < r; ++i) out.coords[i] = Int(best_y[i]);
  return out;
}

ZVec embed(const ZVec& v, std::size_t offset, std::size_t total) {
  ZVec out(total, Int(0));
  for (std::size_t i = 0; i < v.size(); ++i) out[offset + i] = v[i];
  return out;
}

ZVec unit_row(std::size_t i, std::size_t total) {
  ZVec out(total, Int(0));
  out[i] = 1;
  return out;
}

ZVec add_rows(const ZVec& a, const ZVec& b, const Int& scale) {
  ZVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + scale * b[i];
  return out;
}

ZMat rows_to_mat(const std::vector<ZVec>& rows) {
  ZMat m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < m.cols; ++j) m.at(i, j) = rows[i][j];
  return m;
}

struct USplit {
  ZVec z, w;
};

bool is_primitive(const ZVec& v) {
  Int g = 0;
  for (const Int& c : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g == 1;
}

/** Isotropic primitive vector of divisibility 1 completed to a hyperbolic
 *  pair, searched over small coefficient boxes. */
USplit split_off_u(const Lattice& s) {
  const std::size_t r = s.rank();
  auto try_candidate = [&](const ZVec& z) -> bool {
    if (!is_primitive(z)) return false;
    if (norm_of(s, z) != 0) return false;
    return divisibility(s, z) == 1;
  };
  ZVec found;
  bool have = false;
  for (std::size_t i = 0; i < r && !have; ++i) {
    ZVec z = unit_row(i, r);
    if (try_candidate(z)) {
      found = z;
      have = true;
    }
  }
  long radius_max = r <= 8 ? 2 : 1;
  for (long radius = 1; radius <= radius_max && !have; ++radius) {
    ZVec z(r, Int(-radius));
    while (!have) {
      if (try_candidate(z)) {
        found = z;
        have = true;
        break;
      }
      std::size_t k = 0;
      while (k < r && z[k] == radius) z[k++] = -radius;
      if (k == r) break;
      ++z[k];
    }
  }
  if (!have)
    throw CapExceeded("hyperbolic basis search cap exceeded at rank " + std::to_string(r));

  // Pair it: an integer combination with pairing 1 exists since div = 1;
  // then shift by a multiple of z to make the partner isotropic.
  ZVec pairings(r);
  for (std::size_t i = 0; i < r; ++i) pairings[i] = inner(s, found, unit_row(i, r));
  ZVec w0(r, Int(0));
  Int g = 0;
  for (std::size_t i = 0; i < r; ++i) {
    if (pairings[i] == 0) continue;
    if (g == 0) {
      // first nonzero pairing: start the chain
      Int inv_sign = pairings[i] < 0 ? -1 : 1;
      w0[i] = inv_sign;
      g = pairings[i] * inv_sign;
      continue;
    }
    Int snew, tnew, gnew;
    mpz_gcdext(gnew.get_mpz_t(), snew.get_mpz_t(), tnew.get_mpz_t(), g.get_mpz_t(),
               pairings[i].get_mpz_t());
    for (std::size_t j = 0; j < r; ++j) w0[j] *= snew;
    w0[i] += tnew;
    g = gnew;
  }
  if (g != 1) throw std::runtime_error("divisibility bookkeeping failed in the U split");
  Int n0 = norm_of(s, w0);
  USplit out;
  out.z = found;
  out.w = add_rows(w0, found, -n0 / 2);
  if (inner(s, out.z, out.w) != 1 || norm_of(s, out.w) != 0)
    throw std::runtime_error("hyperbolic pair completion failed");
  return out;
}

ZVec mul_row_int(const ZVec& v, const ZMat& a) { return mul_row(v, a); }

/** Integer coordinates of v (a lattice vector known to lie in the saturated
 *  row span of sub) with respect to sub's rows. */
ZVec coords_in_sublattice(const Lattice& l, const Sublattice& sub, const ZVec& v) {
  QVec proj = project_coords(l, sub.basis, v);
  ZVec out(proj.size());
  for (std::size_t i = 0; i < proj.size(); ++i) {
    if (!is_integral(proj[i])) throw std::runtime_error("vector is not in the sublattice");
    out[i] = proj[i].get_num();
  }
  if (mul_row_int(out, sub.basis) != v) throw std::runtime_error("sublattice coordinates failed");
  return out;
}

}  // namespace

MinregResult interior_minimum(AdeKind kind, std::size_t rank) {
  Lattice l = lattice_ade(kind, rank);
  ZMat cartan(rank, rank);
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = 0; j < rank; ++j) cartan.at(i, j) = -l.gram.at(i, j);
  return interior_minimum_impl(cartan);
}

std::vector<RootTypeList> enumerate_Rn(std::size_t n) {
  if (n < 3) throw std::invalid_argument("n must be at least 3");
  const std::size_t budget = n - 2;
  std::vector<AdePart> types;
  for (std::size_t k = 1; k <= budget; ++k) types.push_back({AdeKind::A, k});
  for (std::size_t k = 4; k <= budget; ++k) types.push_back({AdeKind::D, k});
  for (std::size_t k = 6; k <= budget && k <= 8; ++k) types.push_back({AdeKind::E, k});

  std::vector<RootTypeList> out;
  std::vector<AdePart> parts;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t first, std::size_t used) {
    if (!parts.empty()) {
      RootTypeList item;
      item.parts = parts;
      item.total_rank = used;
      std::map<std::string, std::size_t> counts;
      std::vector<std::string> order;
      for (const auto& p : parts) {
        std::string lbl = ade_label(p.kind, p.rank);
        if (counts[lbl]++ == 0) order.push_back(lbl);
      }
      for (const std::string& lbl : order) {
        if (!item.label.empty()) item.label += "+";
        if (counts[lbl] > 1) item.label += std::to_string(counts[lbl]);
        item.label += lbl;
      }
      out.push_back(std::move(item));
    }
    for (std::size_t i = first; i < types.size(); ++i) {
      if (used + types[i].rank > budget) continue;
      parts.push_back(types[i]);
      rec(i, used + types[i].rank);
      parts.pop_back();
    }
  };
  rec(0, 0);
  return out;
}

NonorthWitness max_nonorthogonal_vector(const Lattice& r, const Int& norm_cap) {
  RootDecomposition rd = root_sublattice(r);
  if (rd.total_rank != r.rank() || r.rank() == 0)
    throw std::invalid_argument("roots do not span the lattice");
  Int total = 0;
  ZVec witness(r.rank(), Int(0));
  for (const auto& comp : rd.components) {
    Lattice cl = sublattice_from_rows(r, comp.simple).lat;
    ZMat cartan(comp.rank, comp.rank);
    for (std::size_t i = 0; i < comp.rank; ++i)
      for (std::size_t j = 0; j < comp.rank; ++j) cartan.at(i, j) = -cl.gram.at(i, j);
    MinregResult mr = interior_minimum_impl(cartan);
    total += mr.value;
    for (std::size_t j = 0; j < comp.rank; ++j) {
      ZVec row(r.rank());
      for (std::size_t c = 0; c < r.rank(); ++c) row[c] = comp.simple.at(j, c);
      witness = add_rows(witness, row, mr.coords[j]);
    }
  }
  if (norm_cap > 0 && total > norm_cap) throw CapExceeded("cap exceeded");
  NonorthWitness out;
  out.norm = -total;
  out.coords = witness;
  if (norm_of(r, witness) != out.norm) throw std::runtime_error("interior vector norm mismatch");
  for (const auto& comp : rd.components)
    for (const auto& rt : comp.component_roots)
      if (inner(r, witness, rt) == 0) throw std::runtime_error("interior vector touches a wall");
  return out;
}

Int max_nonorthogonal_norm(const Lattice& r, const Int& norm_cap) {
  return max_nonorthogonal_vector(r, norm_cap).norm;
}

Int compute_a_n(std::size_t n) {
  std::map<std::pair<int, std::size_t>, Int> memo;
  auto value_of = [&](const AdePart& p) {
    auto key = std::make_pair(static_cast<int>(p.kind), p.rank);
    auto it = memo.find(key);
    if (it == memo.end()) it = memo.emplace(key, interior_minimum(p.kind, p.rank).value).first;
    return it->second;
  };
  Int best = 0;
  for (const auto& rt : enumerate_Rn(n)) {
    Int s = 0;
    for (const auto& p : rt.parts) s += value_of(p);
    if (s > best) best = s;
  }
  return best;
}

ChamberPoint min_chamber_point(std::size_t k, const Int& norm_cap, long box_radius) {
  std::vector<Lattice> blocks{lattice_U()};
  for (std::size_t i = 0; i < k; ++i) blocks.push_back(lattice_ade(AdeKind::A, 1));
  Lattice lk = direct_sum(blocks);

  auto qualifies = [&](const ZVec& coords) {
    Sublattice comp = orth_complement(lk, rows_to_mat({coords}));
    return roots(comp.lat).empty();
  };

  for (Int target = 2; target <= norm_cap; target += 2) {
    // m = x e + y f + sum c_i r_i with norm 2xy - 2 sum c_i^2. The
    // automorphisms allow 0 < x <= y and c sorted descending, c_i >= 1; a
    // coordinate x or y dividing some 2c_i, or x = y, always meets a wall.
    long need = to_long(target / 2, "target norm");
    for (long x = 1; x <= box_radius; ++x)
      for (long y = x + 1; y <= box_radius; ++y) {
        long s2 = x * y - need;
        if (s2 < static_cast<long>(k)) continue;
        if (k == 0 && s2 != 0) continue;
        std::vector<long> c(k);
        std::function<bool(std::size_t, long, long)> place = [&](std::size_t idx, long left,
                                                                 long hi) -> bool {
          if (idx == k) {
            if (left != 0) return false;
            ZVec coords(k + 2, Int(0));
            coords[0] = x;
            coords[1] = y;
            for (std::size_t i = 0; i < k; ++i) coords[2 + i] = c[i];
            if (!qualifies(coords)) return false;
            return true;
          }
          long remaining = static_cast<long>(k - idx);
          for (long v = std::min<long>(hi, box_radius); v >= 1; --v) {
            if (v * v > left - (remaining - 1)) continue;
            if ((2 * v) % x == 0 || (2 * v) % y == 0) continue;
            c[idx] = v;
            if (place(idx + 1, left - v * v, v)) return true;
          }
          return false;
        };
        long hi0 = 1;
        while ((hi0 + 1) * (hi0 + 1) <= s2) ++hi0;
        if (k == 0) {
          if (s2 == 0) {
            ZVec coords{Int(x), Int(y)};
            if (qualifies(coords)) return {target, coords};
          }
        } else if (place(0, s2, hi0)) {
          ZVec coords(k + 2, Int(0));
          coords[0] = x;
          coords[1] = y;
          for (std::size_t i = 0; i < k; ++i) coords[2 + i] = c[i];
          return {target, coords};
        }
      }
  }
  throw CapExceeded("cap exceeded");
}

Int min_chamber_norm(std::size_t k) { return min_chamber_point(k).norm; }

Int compute_b_n(std::size_t n) {
  if (n < 3) throw std::invalid_argument("n must be at least 3");
  Int best = 0;
  for (std::size_t k = 0; k + 2 <= n; ++k) {
    Int v = min_chamber_norm(k);
    if (v > best) best = v;
  }
  return best;
}

std::vector<PoolMember> build_pool(std::size_t n, const Int& a_n, const Int& b_n) {
  (void)n;
  std::vector<PoolMember> out;
  for (Int a = 2; a <= a_n; a += 2) {
    PoolMember m;
    m.family = PoolFamily::PrimeFour;
    m.parameter = a;
    ZMat g(3, 3);
    g.at(0, 0) = 4;
    g.at(1, 1) = 4;
    g.at(2, 2) = -a;
    m.gram = make_lattice(g, "<4>+<4>+<-" + a.get_str() + ">");
    out.push_back(std::move(m));
  }
  for (Int b = 2; b <= b_n; b += 2) {
    PoolMember m;
    m.family = PoolFamily::Hyperbolic;
    m.parameter = b;
    ZMat g(3, 3);
    g.at(0, 1) = 1;
    g.at(1, 0) = 1;
    g.at(2, 2) = b;
    m.gram = make_lattice(g, "U+<" + b.get_str() + ">");
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<PoolMember> build_pool(std::size_t n) {
  return build_pool(n, compute_a_n(n), compute_b_n(n));
}

GenericCurveCertificate construct_generic_K(const Lattice& l, const HeegnerTarget& target) {
  const std::size_t rank = l.rank();
  if (rank < 6) throw std::invalid_argument("rank too small for the pool construction");
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < rank; ++j) {
      Int want = 0;
      if ((i / 2 == j / 2) && j < 4 && i != j) want = 1;
      if (l.gram.at(i, j) != want)
        throw std::invalid_argument("explicit 2U + M split required");
    }
  const std::size_t mrank = rank - 4;
  ZMat mgram(mrank, mrank);
  for (std::size_t i = 0; i < mrank; ++i)
    for (std::size_t j = 0; j < mrank; ++j) mgram.at(i, j) = l.gram.at(4 + i, 4 + j);
  Lattice m_lat = make_lattice(mgram, "M");

  GenericCurveCertificate cert;
  cert.target = target;

  if (target.is_mu) {
    Fqm a = discriminant_form(l);
    ZVec mu = a.normalize(target.mu);
    ZVec twice(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) twice[i] = 2 * mu[i];
    if (a.is_zero_elem(mu) || !a.is_zero_elem(twice) || a.q_of(mu) != Rat(3, 2))
      throw std::invalid_argument("target class is not in pi_L");
    std::size_t n = rank - 2;
    if (!splits_2U_by_length(a, n)) throw std::invalid_argument("length condition fails");

    RootDecomposition rd = root_sublattice(m_lat);
    ZVec root_l;
    bool found = false;
    for (const auto& comp : rd.components) {
      for (const auto& rt : comp.component_roots) {
        if (divisibility(m_lat, rt) != 2) continue;
        ZVec in_l = embed(rt, 4, rank);
        QVec half(rank);
        for (std::size_t i = 0; i < rank; ++i) half[i] = Rat(in_l[i]) / 2;
        if (a.class_of_dual(half) == mu) {
          root_l = in_l;
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found) throw std::runtime_error("no divisibility two root represents the target class");

    // Split off the root, then pull a fresh 2U out of its complement; the
    // complement of that 2U in L holds the root and the interior construction
    // applies to it verbatim.
    Sublattice perp = orth_complement(l, rows_to_mat({root_l}));
    USplit u1 = split_off_u(perp.lat);
    ZVec z1 = mul_row_int(u1.z, perp.basis), w1 = mul_row_int(u1.w, perp.basis);
    Sublattice inner1 = orth_complement(perp.lat, rows_to_mat({u1.z, u1.w}));
    if (det(inner1.lat.gram) != -det(perp.lat.gram))
      throw std::runtime_error("U split bookkeeping failed");
    USplit u2 = split_off_u(inner1.lat);
    ZVec z2 = mul_row_int(mul_row_int(u2.z, inner1.basis), perp.basis);
    ZVec w2 = mul_row_int(mul_row_int(u2.w, inner1.basis), perp.basis);

    Sublattice m2 = orth_complement(l, rows_to_mat({z1, w1, z2, w2}));
    if (m2.lat.rank() != rank - 4) throw std::runtime_error("re-split rank bookkeeping failed");
    coords_in_sublattice(l, m2, root_l);  // validates membership

    NonorthWitness wit = max_nonorthogonal_vector(m2.lat);
    ZVec m_vec = mul_row_int(wit.coords, m2.basis);
    if (inner(l, root_l, m_vec) == 0)
      throw std::runtime_error("interior vector misses the target root");

    cert.k_rows = rows_to_mat({add_rows(z1, w1, 2), add_rows(z2, w2, 2), m_vec});
    cert.witness_root = root_l;
    cert.case_tag = "mu-reduction";
    cert.pool.family = PoolFamily::PrimeFour;
    cert.pool.parameter = -wit.norm;
  } else {
    RootDecomposition rd = root_sublattice(m_lat);
    ZVec div1_root;
    bool have_div1 = false;
    for (const auto& comp : rd.components) {
      for (const auto& rt : comp.component_roots)
        if (divisibility(m_lat, rt) == 1) {
          div1_root = rt;
          have_div1 = true;
          break;
        }
      if (have_div1) break;
    }

    if (have_div1) {
      NonorthWitness wit = max_nonorthogonal_vector(m_lat);
      ZVec m_vec = embed(wit.coords, 4, rank);
      ZVec e1 = unit_row(0, rank), f1 = unit_row(1, rank);
      ZVec e2 = unit_row(2, rank), f2 = unit_row(3, rank);
      cert.k_rows = rows_to_mat({add_rows(e1, f1, 2), add_rows(e2, f2, 2), m_vec});
      cert.witness_root = embed(div1_root, 4, rank);
      cert.case_tag = "a";
      cert.pool.family = PoolFamily::PrimeFour;
      cert.pool.parameter = -wit.norm;
    } else {
      // All roots have divisibility 2, so they are pairwise orthogonal and
      // split off as A_1 summands.
      std::vector<ZVec> root_rows;
      for (const auto& comp : rd.components) {
        if (comp.kind != AdeKind::A || comp.rank != 1)
          throw std::runtime_error("divisibility two roots must form split A_1 summands");
        ZVec row(mrank);
        for (std::size_t c = 0; c < mrank; ++c) row[c] = comp.simple.at(0, c);
        root_rows.push_back(row);
      }
      const std::size_t k = root_rows.size();
      if (k > 0) {
        Sublattice mprime = orth_complement(m_lat, rows_to_mat(root_rows));
        if (mprime.lat.rank() + k != mrank) throw std::runtime_error("A_1 split rank mismatch");
        Int lhs = det(m_lat.gram), rhs = det(mprime.lat.gram);
        for (std::size_t i = 0; i < k; ++i) rhs *= -2;
        if (lhs != rhs) throw std::runtime_error("A_1 summands do not split off");
        if (!roots(mprime.lat).empty()) throw std::runtime_error("residual roots after A_1 split");
      }
      ChamberPoint cp = min_chamber_point(k);
      ZVec m_vec(rank, Int(0));
      m_vec[2] = cp.coords[0];
      m_vec[3] = cp.coords[1];
      for (std::size_t i = 0; i < k; ++i)
        m_vec = add_rows(m_vec, embed(root_rows[i], 4, rank), cp.coords[2 + i]);
      ZVec e1 = unit_row(0, rank), f1 = unit_row(1, rank);
      cert.k_rows = rows_to_mat({e1, f1, m_vec});
      cert.witness_root = add_rows(e1, f1, -1);
      cert.case_tag = "b";
      cert.pool.family = PoolFamily::Hyperbolic;
      cert.pool.parameter = cp.norm;
    }
  }

  cert.k_lat = sublattice_from_rows(l, cert.k_rows).lat;
  ZMat want(3, 3);
  if (cert.pool.family == PoolFamily::PrimeFour) {
    want.at(0, 0) = 4;
    want.at(1, 1) = 4;
    want.at(2, 2) = -cert.pool.parameter;
    cert.pool.gram = make_lattice(want, "<4>+<4>+<-" + cert.pool.parameter.get_str() + ">");
  } else {
    want.at(0, 1) = 1;
    want.at(1, 0) = 1;
    want.at(2, 2) = cert.pool.parameter;
    cert.pool.gram = make_lattice(want, "U+<" + cert.pool.parameter.get_str() + ">");
  }
  if (!(cert.k_lat.gram == cert.pool.gram.gram))
    throw std::runtime_error("certificate gram does not match the pool member");
  return cert;
}

bool check_condition_i(const ZMat& k_rows, const Lattice& l) {
  Sublattice k = sublattice_from_rows(l, k_rows);
  if (det(k.lat.gram) == 0) throw std::invalid_argument("degenerate K");
  Sublattice comp = orth_complement(l, k_rows);
  return roots(comp.lat).empty();
}

bool check_condition_ii(const GenericCurveCertificate& cert, const Lattice& l) {
  if (cert.witness_root.empty()) throw std::invalid_argument("missing witness");
  if (norm_of(l, cert.witness_root) != -2) return false;
  ReflectiveInfo info = classify_reflective_vector(cert.witness_root, l);
  if (cert.target.is_mu) {
    if (info.kind != ReflectiveClass::ReflectiveFullDiv) return false;
    Fqm a = discriminant_form(l);
    if (a.normalize(info.heegner_class) != a.normalize(cert.target.mu)) return false;
  } else {
    if (info.kind != ReflectiveClass::ReflectiveHalfDiv || info.div != 1) return false;
  }
  QVec proj = project_coords(l, cert.k_rows, cert.witness_root);
  return norm_q(cert.k_lat.gram, proj) < 0;
}

}  // namespace reflat
