#include "reflat/discform.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace reflat {

Int Fqm::order() const {
  Int n = 1;
  for (const Int& d : orders) n *= d;
  return n;
}

ZVec Fqm::normalize(ZVec x) const {
  if (x.size() != orders.size()) throw std::invalid_argument("fqm element size mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] %= orders[i];
    if (x[i] < 0) x[i] += orders[i];
  }
  return x;
}

Rat Fqm::q_of(const ZVec& x) const {
  ZVec v = normalize(x);
  Rat s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    s += qdiag[i] * Rat(v[i] * v[i]);
    for (std::size_t j = i + 1; j < v.size(); ++j) s += Rat(2) * bmat.at(i, j) * Rat(v[i] * v[j]);
  }
  return mod_interval(s, Rat(2));
}

Rat Fqm::b_of(const ZVec& x, const ZVec& y) const {
  ZVec v = normalize(x), w = normalize(y);
  Rat s = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j) s += bmat.at(i, j) * Rat(v[i] * w[j]);
  return mod_interval(s, Rat(1));
}

bool Fqm::is_zero_elem(const ZVec& x) const {
  for (const Int& c : normalize(x))
    if (c != 0) return false;
  return true;
}

std::vector<ZVec> Fqm::elements(const Int& max_elements) const {
  if (order() > max_elements) throw CapExceeded("finite form too large to enumerate");
  std::vector<ZVec> out;
  ZVec x(ngen(), Int(0));
  while (true) {
    out.push_back(x);
    std::size_t k = 0;
    while (k < ngen() && x[k] == orders[k] - 1) {
      x[k] = 0;
      ++k;
    }
    if (k == ngen()) break;
    ++x[k];
  }
  return out;
}

std::vector<ZVec> Fqm::two_torsion() const {
  std::vector<ZVec> out;
  std::vector<std::size_t> even_idx;
  for (std::size_t i = 0; i < ngen(); ++i)
    if (orders[i] % 2 == 0) even_idx.push_back(i);
  std::size_t m = even_idx.size();
  for (std::size_t mask = 0; mask < (std::size_t(1) << m); ++mask) {
    ZVec x(ngen(), Int(0));
    for (std::size_t b = 0; b < m; ++b)
      if (mask & (std::size_t(1) << b)) x[even_idx[b]] = orders[even_idx[b]] / 2;
    out.push_back(x);
  }
  return out;
}

ZVec Fqm::class_of_dual(const QVec& x) const {
  if (!has_lifts) throw std::runtime_error("fqm has no source lattice data");
  if (x.size() != dual_map.rows) throw std::invalid_argument("class_of_dual: size mismatch");
  QVec c = mul_row(x, dual_map);
  ZVec out(kept.size());
  for (std::size_t t = 0; t < kept.size(); ++t) {
    const Rat& v = c[kept[t]];
    if (!is_integral(v)) throw std::invalid_argument("vector is not in the dual lattice");
    out[t] = v.get_num();
  }
  // Non-kept coordinates must be integral too for dual membership.
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!is_integral(c[i])) throw std::invalid_argument("vector is not in the dual lattice");
  return normalize(out);
}

QVec Fqm::lift_of(const ZVec& elem) const {
  if (!has_lifts) throw std::runtime_error("fqm has no source lattice data");
  ZVec v = normalize(elem);
  QVec out(lifts.cols, Rat(0));
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < lifts.cols; ++j) out[j] += Rat(v[i]) * lifts.at(i, j);
  return out;
}

Fqm discriminant_form(const Lattice& l) {
  if (det(l.gram) == 0) throw std::invalid_argument("discriminant form needs a nondegenerate lattice");
  std::size_t n = l.rank();
  Snf s = snf(l.gram);
  Fqm a;
  a.has_lifts = true;
  a.full_orders.resize(n);
  for (std::size_t i = 0; i < n; ++i) a.full_orders[i] = s.d.at(i, i);
  for (std::size_t i = 0; i < n; ++i)
    if (a.full_orders[i] > 1) a.kept.push_back(i);
  std::size_t m = a.kept.size();
  a.orders.resize(m);
  a.lifts = QMat(m, n);
  for (std::size_t t = 0; t < m; ++t) {
    std::size_t i = a.kept[t];
    a.orders[t] = a.full_orders[i];
    for (std::size_t j = 0; j < n; ++j) a.lifts.at(t, j) = Rat(s.u.at(i, j)) / Rat(a.full_orders[i]);
  }
  QMat uinv = inverse(s.u);
  a.dual_map = QMat(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a.dual_map.at(i, j) = uinv.at(i, j) * Rat(a.full_orders[j]);
  QMat gq = to_qmat(l.gram);
  a.qdiag.resize(m);
  a.bmat = QMat(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    QVec li(a.lifts.cols);
    for (std::size_t c = 0; c < a.lifts.cols; ++c) li[c] = a.lifts.at(i, c);
    a.qdiag[i] = mod_interval(form_value(li, gq, li), Rat(2));
    for (std::size_t j = 0; j < m; ++j) {
      QVec lj(a.lifts.cols);
      for (std::size_t c = 0; c < a.lifts.cols; ++c) lj[c] = a.lifts.at(j, c);
      a.bmat.at(i, j) = mod_interval(form_value(li, gq, lj), Rat(1));
    }
  }
  return a;
}

std::size_t fqm_length_p(const Fqm& a, const Int& p) {
  std::size_t c = 0;
  for (const Int& d : a.orders)
    if (d % p == 0) ++c;
  return c;
}

std::vector<Int> fqm_prime_support(const Fqm& a) {
  std::set<Int> primes;
  for (Int d : a.orders) {
    for (Int p = 2; p * p <= d; ++p)
      while (d % p == 0) {
        primes.insert(p);
        d /= p;
      }
    if (d > 1) primes.insert(d);
  }
  return std::vector<Int>(primes.begin(), primes.end());
}

std::size_t fqm_length(const Fqm& a) {
  std::size_t best = 0;
  for (const Int& p : fqm_prime_support(a)) best = std::max(best, fqm_length_p(a, p));
  return best;
}

Int fqm_exponent(const Fqm& a) {
  Int e = 1;
  for (const Int& d : a.orders) e = lcm(e, d);
  return e;
}

Fqm direct_sum_fqm(const Fqm& a, const Fqm& b) {
  Fqm c;
  c.orders = a.orders;
  c.orders.insert(c.orders.end(), b.orders.begin(), b.orders.end());
  c.qdiag = a.qdiag;
  c.qdiag.insert(c.qdiag.end(), b.qdiag.begin(), b.qdiag.end());
  std::size_t na = a.ngen(), nb = b.ngen();
  c.bmat = QMat(na + nb, na + nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j) c.bmat.at(i, j) = a.bmat.at(i, j);
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = 0; j < nb; ++j) c.bmat.at(na + i, na + j) = b.bmat.at(i, j);
  return c;
}

namespace {

Fqm fqm_cyclic(const Int& d, const Rat& q) {
  if (d < 2) throw std::invalid_argument("cyclic block order must be >= 2");
  Rat qn = mod_interval(q, Rat(2));
  if (mod_interval(qn * Rat(d), Rat(1)) != 0)
    throw std::invalid_argument("cyclic block: d*q must be integral");
  if (mod_interval(qn * Rat(d * d), Rat(2)) != 0)
    throw std::invalid_argument("cyclic block: d^2*q must be even");
  Fqm a;
  a.orders = {d};
  a.qdiag = {qn};
  a.bmat = QMat(1, 1);
  a.bmat.at(0, 0) = mod_interval(qn, Rat(1));
  return a;
}

Fqm fqm_uv(char kind, unsigned k) {
  if (k < 1) throw std::invalid_argument("u/v block level must be >= 1");
  Int d = 1;
  for (unsigned i = 0; i < k; ++i) d *= 2;
  Fqm a;
  a.orders = {d, d};
  a.bmat = QMat(2, 2);
  Rat off = Rat(1) / Rat(d);
  a.bmat.at(0, 1) = a.bmat.at(1, 0) = off;
  if (kind == 'u') {
    a.qdiag = {Rat(0), Rat(0)};
  } else {
    Rat q = mod_interval(Rat(2) / Rat(d), Rat(2));
    a.qdiag = {q, q};
    a.bmat.at(0, 0) = a.bmat.at(1, 1) = mod_interval(q, Rat(1));
  }
  return a;
}

}  // namespace

Fqm fqm_from_blocks(const std::string& spec) {
  std::string s;
  for (char c : spec)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty form expression");
  Fqm acc;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t plus = s.find('+', start);
    if (plus == std::string::npos) plus = s.size();
    std::string tok = s.substr(start, plus - start);
    if (tok.size() < 4 || tok[1] != '(' || tok.back() != ')')
      throw std::invalid_argument("bad form block: " + tok);
    std::string args = tok.substr(2, tok.size() - 3);
    Fqm blk;
    if (tok[0] == 'c') {
      std::size_t comma = args.find(',');
      if (comma == std::string::npos) throw std::invalid_argument("bad form block: " + tok);
      Int d;
      try {
        d = Int(args.substr(0, comma));
      } catch (...) {
        throw std::invalid_argument("bad order in form block: " + tok);
      }
      blk = fqm_cyclic(d, rat_from_string(args.substr(comma + 1)));
    } else if (tok[0] == 'u' || tok[0] == 'v') {
      unsigned long k = std::stoul(args);
      blk = fqm_uv(tok[0], static_cast<unsigned>(k));
    } else {
      throw std::invalid_argument("bad form block: " + tok);
    }
    acc = direct_sum_fqm(acc, blk);
    if (plus == s.size()) break;
    start = plus + 1;
  }
  return acc;
}

namespace {

Int elem_order(const Fqm& a, const ZVec& x) {
  Int e = 1;
  ZVec v = a.normalize(x);
  for (std::size_t i = 0; i < v.size(); ++i) e = lcm(e, a.orders[i] / gcd(a.orders[i], v[i]));
  return e;
}

/** Elementary divisor chain d_1 | ... | d_k of the group, independent of the
 *  generator presentation. */
std::vector<Int> elementary_divisors(const ZVec& orders) {
  std::map<Int, std::vector<Int>> powers;  // prime -> descending prime powers
  for (Int d : orders) {
    for (Int p = 2; p * p <= d; ++p) {
      if (d % p != 0) continue;
      Int pk = 1;
      while (d % p == 0) {
        d /= p;
        pk *= p;
      }
      powers[p].push_back(pk);
    }
    if (d > 1) powers[d].push_back(d);
  }
  std::size_t k = 0;
  for (auto& [p, list] : powers) {
    std::sort(list.begin(), list.end(), std::greater<Int>());
    k = std::max(k, list.size());
  }
  std::vector<Int> divisors(k, Int(1));
  for (const auto& [p, list] : powers)
    for (std::size_t i = 0; i < list.size(); ++i) divisors[i] *= list[i];
  std::reverse(divisors.begin(), divisors.end());
  return divisors;
}

}  // namespace

std::string fqm_fingerprint(const Fqm& a, const Int& max_elements) {
  std::vector<std::string> vals;
  for (const auto& x : a.elements(max_elements))
    vals.push_back(elem_order(a, x).get_str() + ":" + a.q_of(x).get_str());
  std::sort(vals.begin(), vals.end());
  std::ostringstream os;
  os << "orders=";
  for (const Int& d : elementary_divisors(a.orders)) os << d.get_str() << ",";
  os << ";vals=";
  for (const auto& v : vals) os << v << ";";
  return os.str();
}

int milgram_signature(const Fqm& a, const Int& max_elements, double tol) {
  long double re = 0, im = 0;
  long double count = 0;
  for (const auto& x : a.elements(max_elements)) {
    long double ang = static_cast<long double>(M_PI) * a.q_of(x).get_d();
    re += std::cos(ang);
    im += std::sin(ang);
    count += 1;
  }
  long double mag = std::sqrt(re * re + im * im);
  long double expect = std::sqrt(count);
  if (std::abs(mag - expect) > tol * expect + 1e-12)
    throw std::runtime_error("gauss sum magnitude mismatch: form is degenerate or invalid");
  long double theta = std::atan2(im, re) * 4.0L / static_cast<long double>(M_PI);
  long long sigma = std::llroundl(theta);
  if (std::abs(theta - static_cast<long double>(sigma)) > 1e-6)
    throw std::runtime_error("gauss sum argument is not a multiple of pi/4");
  return static_cast<int>(((sigma % 8) + 8) % 8);
}

std::vector<ZVec> pi_elements(const Fqm& a) {
  std::vector<ZVec> out;
  for (const auto& x : a.two_torsion())
    if (a.q_of(x) == Rat(3, 2)) out.push_back(x);
  return out;
}

std::vector<ZVec> span_elements(const Fqm& a, const std::vector<ZVec>& gens) {
  std::set<ZVec> seen;
  std::queue<ZVec> work;
  ZVec zero(a.ngen(), Int(0));
  seen.insert(zero);
  work.push(zero);
  while (!work.empty()) {
    ZVec cur = work.front();
    work.pop();
    for (const auto& g : gens) {
      ZVec nxt(cur.size());
      for (std::size_t i = 0; i < cur.size(); ++i) nxt[i] = cur[i] + g[i];
      nxt = a.normalize(nxt);
      if (seen.insert(nxt).second) work.push(nxt);
    }
  }
  return std::vector<ZVec>(seen.begin(), seen.end());
}

std::vector<IsotropicSubgroup> isotropic_subgroups(const Fqm& a, const Int& max_elements,
                                                   std::size_t max_subgroups) {
  std::vector<ZVec> iso;
  for (const auto& x : a.elements(max_elements))
    if (!a.is_zero_elem(x) && a.q_of(x) == 0) iso.push_back(x);

  std::vector<IsotropicSubgroup> out;
  std::set<std::vector<ZVec>> visited;
  std::queue<std::pair<std::vector<ZVec>, std::vector<ZVec>>> work;  // (gens, elements)
  ZVec zero(a.ngen(), Int(0));
  std::vector<ZVec> trivial{zero};
  visited.insert(trivial);
  work.push({{}, trivial});
  out.push_back(IsotropicSubgroup{{}, Int(1)});
  while (!work.empty()) {
    auto [gens, elems] = work.front();
    work.pop();
    std::set<ZVec> in_span(elems.begin(), elems.end());
    for (const auto& x : iso) {
      if (in_span.count(x)) continue;
      bool ok = true;
      for (const auto& e : elems)
        if (a.b_of(x, e) != 0) {
          ok = false;
          break;
        }
      if (!ok) continue;
      std::vector<ZVec> gens2 = gens;
      gens2.push_back(x);
      std::vector<ZVec> elems2 = span_elements(a, gens2);
      if (!visited.insert(elems2).second) continue;
      if (visited.size() > max_subgroups) throw CapExceeded("too many isotropic subgroups");
      out.push_back(IsotropicSubgroup{gens2, Int(static_cast<long>(elems2.size()))});
      work.push({gens2, elems2});
    }
  }
  return out;
}

namespace {

ZMat gens_matrix(const Fqm& a, const std::vector<ZVec>& gens) {
  ZMat g(gens.size(), a.ngen());
  for (std::size_t i = 0; i < gens.size(); ++i) {
    ZVec v = a.normalize(gens[i]);
    for (std::size_t j = 0; j < a.ngen(); ++j) g.at(i, j) = v[j];
  }
  return g;
}

ZMat diag_orders(const Fqm& a) {
  ZMat d(a.ngen(), a.ngen());
  for (std::size_t i = 0; i < a.ngen(); ++i) d.at(i, i) = a.orders[i];
  return d;
}

// Square full-rank basis (rows) of the row span, from HNF.
ZMat full_rank_hnf(const ZMat& m) {
  ZMat h = hnf(m);
  std::size_t r = rank_of_hnf(h);
  if (r != m.cols) throw std::runtime_error("expected full rank span");
  ZMat b(r, m.cols);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) b.at(i, j) = h.at(i, j);
  return b;
}

}  // namespace

Fqm quotient_form(const Fqm& a, const std::vector<ZVec>& gens) {
  std::size_t r = a.ngen(), k = gens.size();
  for (const auto& g : gens) {
    if (a.q_of(g) != 0) throw std::invalid_argument("quotient_form: generator not isotropic");
    for (const auto& h : gens)
      if (a.b_of(g, h) != 0) throw std::invalid_argument("quotient_form: generators not orthogonal");
  }
  ZMat d = diag_orders(a);
  ZMat bk = full_rank_hnf(vstack(gens_matrix(a, gens), d));
  ZMat bh;
  if (k == 0) {
    bh = ZMat::identity(r);
  } else {
    // x in G-perp <=> x * bmat * gens^T is integral.
    QMat mq = mul(to_qmat(gens_matrix(a, gens)), a.bmat);  // k x r
    QMat pairings = transpose(mq);                         // r x k
    Int m = 1;
    for (const auto& v : pairings.data) m = lcm(m, v.get_den());
    ZMat p(r, k);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        Rat scaled = pairings.at(i, j) * Rat(m);
        p.at(i, j) = scaled.get_num();
      }
    ZMat mi(k, k);
    for (std::size_t i = 0; i < k; ++i) mi.at(i, i) = -m;
    ZMat ker = left_kernel(vstack(p, mi));  // rows: (x | y)
    ZMat sx(ker.rows, r);
    for (std::size_t i = 0; i < ker.rows; ++i)
      for (std::size_t j = 0; j < r; ++j) sx.at(i, j) = ker.at(i, j);
    bh = full_rank_hnf(vstack(sx, d));
  }
  ZMat c = to_zmat_exact(mul(to_qmat(bk), inverse(bh)));
  Snf s = snf(c);
  ZMat w = to_zmat_exact(inverse(s.v));
  std::vector<ZVec> qgens;
  Fqm q;
  for (std::size_t i = 0; i < r; ++i) {
    Int si = s.d.at(i, i);
    if (si <= 1) continue;
    ZVec wrow(r);
    for (std::size_t j = 0; j < r; ++j) wrow[j] = w.at(i, j);
    qgens.push_back(a.normalize(mul_row(wrow, bh)));
    q.orders.push_back(si);
  }
  std::size_t m2 = qgens.size();
  q.qdiag.resize(m2);
  q.bmat = QMat(m2, m2);
  for (std::size_t i = 0; i < m2; ++i) {
    q.qdiag[i] = a.q_of(qgens[i]);
    for (std::size_t j = 0; j < m2; ++j) q.bmat.at(i, j) = a.b_of(qgens[i], qgens[j]);
  }
  return q;
}

OverlatticeResult overlattice(const Lattice& l, const Fqm& a, const std::vector<ZVec>& gens) {
  if (!a.has_lifts) throw std::invalid_argument("overlattice needs a form with source lattice data");
  std::size_t n = l.rank();
  Int big = 1;
  std::vector<QVec> lift_rows;
  for (const auto& g : gens) {
    QVec x = a.lift_of(g);
    lift_rows.push_back(x);
    for (const auto& v : x) big = lcm(big, v.get_den());
  }
  ZMat m(n + lift_rows.size(), n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = big;
  for (std::size_t i = 0; i < lift_rows.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rat scaled = lift_rows[i][j] * Rat(big);
      if (!is_integral(scaled)) throw std::runtime_error("overlattice: denominator bookkeeping failed");
      m.at(n + i, j) = scaled.get_num();
    }
  ZMat b = full_rank_hnf(m);
  QMat basis(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) basis.at(i, j) = Rat(b.at(i, j)) / Rat(big);
  ZMat gram = to_zmat_exact(mul(mul(basis, to_qmat(l.gram)), transpose(basis)));
  OverlatticeResult res;
  res.lat = make_lattice(gram, "");
  res.basis_in_old = basis;
  Int hdet = 1;
  for (std::size_t i = 0; i < n; ++i) hdet *= b.at(i, i);
  Int bign = 1;
  for (std::size_t i = 0; i < n; ++i) bign *= big;
  if (bign % hdet != 0) throw std::runtime_error("overlattice: index bookkeeping failed");
  res.index = bign / hdet;
  Int span = Int(static_cast<long>(span_elements(a, gens).size()));
  if (res.index != span) throw std::runtime_error("overlattice index does not match subgroup order");
  return res;
}

OverlatticeResult maximal_even_overlattice(const Lattice& l, const Int& max_elements) {
  OverlatticeResult acc;
  acc.lat = l;
  acc.basis_in_old = QMat::identity(l.rank());
  acc.index = 1;
  while (true) {
    Fqm a = discriminant_form(acc.lat);
    std::optional<ZVec> pick;
    for (const auto& x : a.elements(max_elements)) {
      if (!a.is_zero_elem(x) && a.q_of(x) == 0) {
        pick = x;
        break;
      }
    }
    if (!pick) break;
    OverlatticeResult step = overlattice(acc.lat, a, {*pick});
    acc.basis_in_old = mul(step.basis_in_old, acc.basis_in_old);
    acc.lat = step.lat;
    acc.index *= step.index;
  }
  return acc;
}

CyclicIntermediate cyclic_intermediate(const Lattice& l, const QMat& over_basis) {
  std::size_t r = l.rank();
  if (over_basis.rows != r || over_basis.cols != r)
    throw std::invalid_argument("cyclic_intermediate: basis shape mismatch");
  ZMat c = to_zmat_exact(inverse(over_basis));  // L in overlattice coordinates
  Snf s = snf(c);
  ZMat w = to_zmat_exact(inverse(s.v));
  Int top = s.d.at(r - 1, r - 1);
  QMat scale = QMat::identity(r);
  scale.at(r - 1, r - 1) = Rat(top);
  QMat basis = mul(mul(scale, to_qmat(w)), over_basis);
  ZMat gram = to_zmat_exact(mul(mul(basis, to_qmat(l.gram)), transpose(basis)));
  CyclicIntermediate res;
  res.lat = make_lattice(gram, "");
  res.basis_in_old = basis;
  res.quotient_order = top;
  return res;
}

bool splits_2U_by_length(const Fqm& a, std::size_t n) {
  long nn = static_cast<long>(n);
  if (static_cast<long>(fqm_length_p(a, Int(2))) > nn - 3) return false;
  for (const Int& p : fqm_prime_support(a)) {
    if (p == 2) continue;
    if (static_cast<long>(fqm_length_p(a, p)) > nn - 4) return false;
  }
  return true;
}

std::optional<EconomicReduction> economic_isotropic(const Fqm& a, const Int& max_elements,
                                                    std::size_t max_subgroups) {
  auto subs = isotropic_subgroups(a, max_elements, max_subgroups);
  std::stable_sort(subs.begin(), subs.end(),
                   [](const IsotropicSubgroup& x, const IsotropicSubgroup& y) { return x.order > y.order; });
  Int e = fqm_exponent(a);
  for (const auto& g : subs) {
    Fqm q = quotient_form(a, g.gens);
    if (fqm_length_p(q, Int(2)) > 4) continue;
    bool odd_ok = true;
    for (const Int& p : fqm_prime_support(q)) {
      if (p == 2) continue;
      if (fqm_length_p(q, p) > 3) {
        odd_ok = false;
        break;
      }
    }
    if (!odd_ok) continue;
    Int eq = fqm_exponent(q);
    bool exp_ok = (eq == e) || (e % 2 == 0 && eq == e / 2);
    if (!exp_ok) continue;
    return EconomicReduction{g, q};
  }
  return std::nullopt;
}

}  // namespace reflat
