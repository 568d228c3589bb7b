#include "reflat/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>

namespace reflat {

bool is_symmetric(const ZMat& gram) {
  if (gram.rows != gram.cols) return false;
  for (std::size_t i = 0; i < gram.rows; ++i)
    for (std::size_t j = i + 1; j < gram.cols; ++j)
      if (gram.at(i, j) != gram.at(j, i)) return false;
  return true;
}

bool is_even(const ZMat& gram) {
  for (std::size_t i = 0; i < gram.rows; ++i)
    if (gram.at(i, i) % 2 != 0) return false;
  return true;
}

Lattice make_lattice(ZMat gram, std::string name) {
  if (!is_symmetric(gram)) throw std::invalid_argument("lattice gram not symmetric");
  if (!is_even(gram)) throw std::invalid_argument("lattice gram not even");
  return Lattice{std::move(gram), std::move(name)};
}

Signature signature(const ZMat& gram) {
  if (!is_symmetric(gram)) throw std::invalid_argument("signature: not symmetric");
  QMat m = to_qmat(gram);
  std::size_t n = m.rows;
  Signature sig;
  for (std::size_t k = 0; k < n; ++k) {
    if (m.at(k, k) == 0) {
      std::size_t j = n;
      for (std::size_t c = k + 1; c < n; ++c)
        if (m.at(k, c) != 0) {
          j = c;
          break;
        }
      if (j == n) {
        ++sig.zero;
        continue;
      }
      if (m.at(j, j) != 0) {
        for (std::size_t c = 0; c < n; ++c) std::swap(m.at(k, c), m.at(j, c));
        for (std::size_t r = 0; r < n; ++r) std::swap(m.at(r, k), m.at(r, j));
      } else {
        // Both diagonals vanish: adding row/col j to k yields 2*m(k,j) != 0.
        for (std::size_t c = 0; c < n; ++c) m.at(k, c) += m.at(j, c);
        for (std::size_t r = 0; r < n; ++r) m.at(r, k) += m.at(r, j);
      }
    }
    const Rat piv = m.at(k, k);
    if (piv > 0)
      ++sig.pos;
    else
      ++sig.neg;
    for (std::size_t i = k + 1; i < n; ++i) {
      Rat f = m.at(i, k) / piv;
      if (f == 0) continue;
      for (std::size_t c = 0; c < n; ++c) m.at(i, c) -= f * m.at(k, c);
      for (std::size_t r = 0; r < n; ++r) m.at(r, i) -= f * m.at(r, k);
    }
  }
  return sig;
}

Lattice lattice_U() {
  ZMat g(2, 2, {0, 1, 1, 0});
  return Lattice{g, "U"};
}

Lattice lattice_rank1(const Int& k) {
  if (k == 0 || k % 2 != 0) throw std::invalid_argument("rank1 lattice needs even nonzero norm");
  ZMat g(1, 1);
  g.at(0, 0) = k;
  return Lattice{g, "<" + k.get_str() + ">"};
}

std::string ade_label(AdeKind kind, std::size_t rank) {
  const char* letter = kind == AdeKind::A ? "A" : kind == AdeKind::D ? "D" : "E";
  return letter + std::to_string(rank);
}

Lattice lattice_ade(AdeKind kind, std::size_t rank) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  switch (kind) {
    case AdeKind::A:
      if (rank < 1) throw std::invalid_argument("A_k needs k >= 1");
      for (std::size_t i = 0; i + 1 < rank; ++i) edges.push_back({i, i + 1});
      break;
    case AdeKind::D:
      if (rank < 4) throw std::invalid_argument("D_k needs k >= 4");
      for (std::size_t i = 0; i + 3 < rank; ++i) edges.push_back({i, i + 1});
      edges.push_back({rank - 3, rank - 2});
      edges.push_back({rank - 3, rank - 1});
      break;
    case AdeKind::E:
      if (rank < 6 || rank > 8) throw std::invalid_argument("E_k needs k in {6,7,8}");
      // Chain 0-2-3-4-...-(rank-1) with node 1 attached to node 3.
      edges.push_back({0, 2});
      edges.push_back({1, 3});
      for (std::size_t i = 2; i + 1 < rank; ++i) edges.push_back({i, i + 1});
      break;
  }
  ZMat g(rank, rank);
  for (std::size_t i = 0; i < rank; ++i) g.at(i, i) = -2;
  for (auto [i, j] : edges) {
    g.at(i, j) = 1;
    g.at(j, i) = 1;
  }
  return Lattice{g, ade_label(kind, rank)};
}

Lattice direct_sum(const Lattice& a, const Lattice& b) {
  std::size_t n = a.rank(), m = b.rank();
  ZMat g(n + m, n + m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g.at(i, j) = a.gram.at(i, j);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) g.at(n + i, n + j) = b.gram.at(i, j);
  std::string name;
  if (!a.name.empty() && !b.name.empty()) name = a.name + "+" + b.name;
  return Lattice{g, name};
}

Lattice direct_sum(const std::vector<Lattice>& parts) {
  Lattice acc{ZMat(0, 0), ""};
  for (const auto& p : parts) acc = direct_sum(acc, p);
  return acc;
}

Int norm_of(const Lattice& l, const ZVec& v) { return form_value(v, l.gram, v); }

Int inner(const Lattice& l, const ZVec& v, const ZVec& w) { return form_value(v, l.gram, w); }

Int divisibility(const Lattice& l, const ZVec& v) {
  ZVec pair = mul_row(v, l.gram);
  Int g = 0;
  for (const Int& x : pair) g = gcd(g, x);
  return g;
}

Sublattice sublattice_from_rows(const Lattice& l, const ZMat& rows) {
  if (rows.cols != l.rank()) throw std::invalid_argument("sublattice: coordinate mismatch");
  ZMat g = mul(mul(rows, l.gram), transpose(rows));
  return Sublattice{rows, Lattice{g, ""}};
}

Sublattice orth_complement(const Lattice& l, const ZMat& rows) {
  if (rows.rows == 0) return sublattice_from_rows(l, ZMat::identity(l.rank()));
  ZMat pairings = mul(l.gram, transpose(rows));  // x * pairings == 0 <=> x orthogonal
  ZMat k = left_kernel(pairings);
  return sublattice_from_rows(l, k);
}

QVec project_coords(const Lattice& l, const ZMat& sub_basis, const ZVec& v) {
  Sublattice s = sublattice_from_rows(l, sub_basis);
  QVec rhs(sub_basis.rows, Rat(0));
  for (std::size_t i = 0; i < sub_basis.rows; ++i) {
    ZVec bi(sub_basis.cols);
    for (std::size_t j = 0; j < sub_basis.cols; ++j) bi[j] = sub_basis.at(i, j);
    rhs[i] = Rat(inner(l, v, bi));
  }
  QMat b(1, rhs.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) b.at(0, i) = rhs[i];
  QMat x = solve_left(s.lat.gram, b);
  QVec out(x.cols);
  for (std::size_t i = 0; i < x.cols; ++i) out[i] = x.at(0, i);
  return out;
}

Rat norm_q(const ZMat& gram, const QVec& v) { return form_value(v, to_qmat(gram), v); }

namespace {

// Max integer <= t + sqrt(r2) and min integer >= t - sqrt(r2), exactly.
Int upper_int(const Rat& t, const Rat& r2) {
  Int x = floor_rat(t);
  while (true) {
    Rat d = Rat(x + 1) - t;
    if (d <= 0 || d * d <= r2)
      ++x;
    else
      break;
  }
  return x;
}

Int lower_int(const Rat& t, const Rat& r2) {
  Int x = ceil_rat(t);
  while (true) {
    Rat d = Rat(x - 1) - t;
    if (d >= 0 || d * d <= r2)
      --x;
    else
      break;
  }
  return x;
}

void ellipsoid_rec(const Ldlt& f, const QVec& center, std::size_t i, QVec& partial, ZVec& x,
                   const Rat& budget, std::vector<ZVec>& out) {
  // partial[j] for j > i holds x_j - center_j of the chosen coordinates.
  std::size_t n = f.diag.size();
  Rat t = center[i];
  for (std::size_t j = i + 1; j < n; ++j) t -= f.lower.at(j, i) * partial[j];
  Rat r2 = budget / f.diag[i];
  Int lo = lower_int(t, r2), hi = upper_int(t, r2);
  for (Int xi = lo; xi <= hi; ++xi) {
    Rat z = Rat(xi) - t;
    Rat used = f.diag[i] * z * z;
    if (used > budget) continue;
    x[i] = xi;
    partial[i] = Rat(xi) - center[i];
    if (i == 0) {
      out.push_back(x);
    } else {
      ellipsoid_rec(f, center, i - 1, partial, x, budget - used, out);
    }
  }
}

}  // namespace

std::vector<ZVec> ellipsoid_points(const QMat& c, const QVec& center, const Rat& bound) {
  if (c.rows != c.cols || center.size() != c.rows)
    throw std::invalid_argument("ellipsoid_points: shape mismatch");
  std::vector<ZVec> out;
  if (bound < 0) return out;
  if (c.rows == 0) {
    out.push_back(ZVec{});
    return out;
  }
  Ldlt f = ldlt_positive(c);
  QVec partial(c.rows, Rat(0));
  ZVec x(c.rows, Int(0));
  ellipsoid_rec(f, center, c.rows - 1, partial, x, bound, out);
  return out;
}

namespace {

bool first_nonzero_positive(const ZVec& v) {
  for (const Int& c : v) {
    if (c > 0) return true;
    if (c < 0) return false;
  }
  return false;  // zero vector
}

}  // namespace

std::vector<LatticeVector> short_vectors(const Lattice& l, const Int& max_abs_norm) {
  Signature sig = signature(l.gram);
  if (sig.zero > 0 || (sig.pos > 0 && sig.neg > 0))
    throw std::invalid_argument("short_vectors: form not definite");
  bool negdef = sig.neg > 0;
  QMat c = to_qmat(l.gram);
  if (negdef)
    for (auto& v : c.data) v = -v;
  QVec center(l.rank(), Rat(0));
  std::vector<LatticeVector> out;
  for (auto& x : ellipsoid_points(c, center, Rat(max_abs_norm))) {
    if (!first_nonzero_positive(x)) continue;
    out.push_back(LatticeVector{x, norm_of(l, x)});
  }
  return out;
}

std::vector<ZVec> roots(const Lattice& l) {
  std::vector<ZVec> out;
  for (auto& sv : short_vectors(l, Int(2)))
    if (sv.norm == -2) out.push_back(sv.coords);
  return out;
}

std::pair<AdeKind, std::size_t> classify_root_component(std::size_t rank, std::size_t root_count) {
  if (root_count == rank * (rank + 1)) return {AdeKind::A, rank};
  if (rank >= 4 && root_count == 2 * rank * (rank - 1)) return {AdeKind::D, rank};
  if (rank == 6 && root_count == 72) return {AdeKind::E, 6};
  if (rank == 7 && root_count == 126) return {AdeKind::E, 7};
  if (rank == 8 && root_count == 240) return {AdeKind::E, 8};
  throw std::runtime_error("unrecognized root component: rank " + std::to_string(rank) +
                           ", " + std::to_string(root_count) + " roots");
}

namespace {

struct Dsu {
  std::vector<std::size_t> parent;
  explicit Dsu(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

// A simple system for an irreducible set of roots (reps, one per +/- pair):
// pick a linear functional vanishing on no root, take the indecomposable
// positive roots.
ZMat simple_system(const Lattice& l, const std::vector<ZVec>& reps) {
  std::vector<ZVec> all;
  for (const auto& r : reps) {
    all.push_back(r);
    ZVec neg(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) neg[i] = -r[i];
    all.push_back(neg);
  }
  std::size_t n = l.rank();
  std::vector<ZVec> positive;
  for (Int base = 3;; base *= 7) {
    positive.clear();
    bool ok = true;
    for (const auto& r : all) {
      Int phi = 0, p = 1;
      for (std::size_t i = 0; i < n; ++i) {
        phi += p * r[i];
        p *= base;
      }
      if (phi == 0) {
        ok = false;
        break;
      }
      if (phi > 0) positive.push_back(r);
    }
    if (ok) break;
  }
  std::set<ZVec> pos_set(positive.begin(), positive.end());
  std::vector<ZVec> simple;
  for (const auto& r : positive) {
    bool decomposable = false;
    for (const auto& s : positive) {
      if (s == r) continue;
      ZVec diff(r.size());
      for (std::size_t i = 0; i < r.size(); ++i) diff[i] = r[i] - s[i];
      if (pos_set.count(diff)) {
        decomposable = true;
        break;
      }
    }
    if (!decomposable) simple.push_back(r);
  }
  ZMat b(simple.size(), n);
  for (std::size_t i = 0; i < simple.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) b.at(i, j) = simple[i][j];
  return b;
}

}  // namespace

RootDecomposition root_sublattice(const Lattice& l) {
  std::vector<ZVec> reps = roots(l);
  RootDecomposition dec;
  if (reps.empty()) return dec;
  Dsu dsu(reps.size());
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (std::size_t j = i + 1; j < reps.size(); ++j)
      if (inner(l, reps[i], reps[j]) != 0) dsu.unite(i, j);
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < reps.size(); ++i) groups[dsu.find(i)].push_back(i);
  for (auto& [root_id, idxs] : groups) {
    RootComponent comp;
    for (std::size_t i : idxs) comp.component_roots.push_back(reps[i]);
    comp.root_count = 2 * idxs.size();
    comp.simple = simple_system(l, comp.component_roots);
    comp.rank = comp.simple.rows;
    auto [kind, rank] = classify_root_component(comp.rank, comp.root_count);
    comp.kind = kind;
    if (rank != comp.rank) throw std::runtime_error("root component rank mismatch");
    // The simple system must realize the component: Cartan matrix checks.
    for (std::size_t i = 0; i < comp.simple.rows; ++i) {
      ZVec ri(comp.simple.cols);
      for (std::size_t c = 0; c < comp.simple.cols; ++c) ri[c] = comp.simple.at(i, c);
      if (norm_of(l, ri) != -2) throw std::runtime_error("simple root has wrong norm");
      for (std::size_t j = i + 1; j < comp.simple.rows; ++j) {
        ZVec rj(comp.simple.cols);
        for (std::size_t c = 0; c < comp.simple.cols; ++c) rj[c] = comp.simple.at(j, c);
        Int p = inner(l, ri, rj);
        if (p != 0 && p != 1) throw std::runtime_error("simple system pairing out of range");
      }
    }
    dec.total_rank += comp.rank;
    dec.total_root_count += comp.root_count;
    dec.components.push_back(std::move(comp));
  }
  // Deterministic order: by rank, then root count, then first root.
  std::sort(dec.components.begin(), dec.components.end(),
            [](const RootComponent& a, const RootComponent& b) {
              if (a.rank != b.rank) return a.rank < b.rank;
              if (a.root_count != b.root_count) return a.root_count < b.root_count;
              return a.component_roots < b.component_roots;
            });
  return dec;
}

namespace {

std::size_t parse_uint(const std::string& tok, std::size_t& pos) {
  std::size_t start = pos;
  while (pos < tok.size() && std::isdigit(static_cast<unsigned char>(tok[pos]))) ++pos;
  if (pos == start) throw std::invalid_argument("expected number in lattice term: " + tok);
  return std::stoul(tok.substr(start, pos - start));
}

std::pair<Lattice, std::string> parse_term(const std::string& tok) {
  std::size_t pos = 0;
  if (tok.empty()) throw std::invalid_argument("empty lattice term");
  char c = tok[pos];
  if (c == '<') {
    if (tok.back() != '>') throw std::invalid_argument("unterminated <...> term: " + tok);
    std::string inner_s = tok.substr(1, tok.size() - 2);
    Int k;
    try {
      k = Int(inner_s);
    } catch (...) {
      throw std::invalid_argument("bad norm in <...> term: " + tok);
    }
    Lattice l = lattice_rank1(k);
    return {l, l.name};
  }
  ++pos;
  if (c == 'U') {
    if (pos != tok.size()) throw std::invalid_argument("bad lattice term: " + tok);
    return {lattice_U(), "U"};
  }
  if (c == 'A' || c == 'D' || c == 'E') {
    std::size_t k = parse_uint(tok, pos);
    if (pos != tok.size()) throw std::invalid_argument("bad lattice term: " + tok);
    AdeKind kind = c == 'A' ? AdeKind::A : c == 'D' ? AdeKind::D : AdeKind::E;
    Lattice l = lattice_ade(kind, k);
    return {l, l.name};
  }
  throw std::invalid_argument("bad lattice term: " + tok);
}

}  // namespace

ParsedLattice parse_lattice_expr(const std::string& expr) {
  std::string s;
  for (char c : expr)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty lattice expression");
  ParsedLattice result;
  result.lat = Lattice{ZMat(0, 0), ""};
  std::size_t start = 0;
  std::vector<std::string> names;
  while (start <= s.size()) {
    std::size_t plus = s.find('+', start);
    if (plus == std::string::npos) plus = s.size();
    std::string tok = s.substr(start, plus - start);
    if (tok.empty()) throw std::invalid_argument("empty term in lattice expression");
    std::size_t pos = 0;
    std::size_t mult = 1;
    if (std::isdigit(static_cast<unsigned char>(tok[0]))) {
      mult = parse_uint(tok, pos);
      if (mult == 0) throw std::invalid_argument("zero multiplicity in lattice expression");
    }
    auto [block, label] = parse_term(tok.substr(pos));
    for (std::size_t i = 0; i < mult; ++i) {
      ParsedLattice::Block b;
      b.label = label;
      b.offset = result.lat.rank();
      b.rank = block.rank();
      result.blocks.push_back(b);
      result.lat = direct_sum(result.lat, block);
      names.push_back(label);
    }
    if (plus == s.size()) break;
    start = plus + 1;
  }
  // Group equal consecutive labels for the display name.
  std::string name;
  for (std::size_t i = 0; i < names.size();) {
    std::size_t j = i;
    while (j < names.size() && names[j] == names[i]) ++j;
    if (!name.empty()) name += "+";
    if (j - i > 1) name += std::to_string(j - i);
    name += names[i];
    i = j;
  }
  result.lat.name = name;
  return result;
}

}  // namespace reflat
