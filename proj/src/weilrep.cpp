#include "reflat/weilrep.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace reflat {

namespace {

using Cplx = std::complex<double>;

Cplx unit_phase(const Rat& turns) {
  // exp(2 pi i * turns); the rational is small by construction.
  return std::polar(1.0, 2.0 * M_PI * turns.get_d());
}

constexpr std::size_t kFullCheckDim = 1024;

ZVec negate_elem(const Fqm& a, const ZVec& x) {
  ZVec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = -x[i];
  return a.normalize(y);
}

// Max |(ST)^3 v - S^2 v| and antipode deviation on random probes; used when
// the dimension makes dense matrix products too expensive.
double probe_residual(const WeilRep& w, const Cplx& flip_scalar) {
  std::mt19937 rng(20260814);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const auto d = static_cast<Eigen::Index>(w.dimension());
  double worst = 0;
  for (int probe = 0; probe < 16; ++probe) {
    Eigen::VectorXcd v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = Cplx(unif(rng), unif(rng));
    v /= v.norm();
    Eigen::VectorXcd lhs = v;
    for (int k = 0; k < 3; ++k) lhs = w.rho_s * (w.rho_t.asDiagonal() * lhs);
    Eigen::VectorXcd s2v = w.rho_s * (w.rho_s * v);
    worst = std::max(worst, (lhs - s2v).cwiseAbs().maxCoeff());
    Eigen::VectorXcd flipped(d);
    for (Eigen::Index i = 0; i < d; ++i)
      flipped(static_cast<Eigen::Index>(w.neg_index(static_cast<std::size_t>(i)))) = v(i);
    worst = std::max(worst, (s2v - flip_scalar * flipped).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace

std::size_t WeilRep::index_of(const ZVec& elem) const {
  auto it = index.find(form.normalize(elem));
  if (it == index.end()) throw std::invalid_argument("element not in the discriminant group");
  return it->second;
}

std::size_t WeilRep::neg_index(std::size_t i) const {
  return index.at(negate_elem(form, elems[i]));
}

WeilRep build_weilrep(const Fqm& a, int n, double tol) {
  if (a.order() > 10000) throw CapExceeded("discriminant group too large for the Weil matrices");
  int want = ((2 - n) % 8 + 8) % 8;
  if (milgram_signature(a) != want)
    throw std::runtime_error("convention inconsistency: Gauss sum octant differs from (2-n) mod 8");

  WeilRep w;
  w.form = a;
  w.n = n;
  w.signature_octant = want;
  w.elems = a.elements(Int(10000));
  for (std::size_t i = 0; i < w.elems.size(); ++i) w.index.emplace(w.elems[i], i);

  const auto d = static_cast<Eigen::Index>(w.elems.size());
  w.rho_t.resize(d);
  for (Eigen::Index i = 0; i < d; ++i)
    w.rho_t(i) = unit_phase(a.q_of(w.elems[static_cast<std::size_t>(i)]) / 2);

  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  Rat octant_turns(n - 2, 8);
  octant_turns.canonicalize();
  const Cplx gamma = unit_phase(octant_turns);
  w.rho_s.resize(d, d);
  for (Eigen::Index col = 0; col < d; ++col)
    for (Eigen::Index row = col; row < d; ++row) {
      Rat b = a.b_of(w.elems[static_cast<std::size_t>(row)], w.elems[static_cast<std::size_t>(col)]);
      Cplx val = gamma * scale * unit_phase(-b);
      w.rho_s(row, col) = val;
      w.rho_s(col, row) = val;
    }

  const Cplx flip_scalar = gamma * gamma;
  if (w.dimension() <= kFullCheckDim) {
    Eigen::MatrixXcd st = w.rho_s * w.rho_t.asDiagonal().toDenseMatrix();
    Eigen::MatrixXcd st3 = st * st * st;
    Eigen::MatrixXcd s2 = w.rho_s * w.rho_s;
    w.relation_residual = (st3 - s2).cwiseAbs().maxCoeff();
    Eigen::MatrixXcd flip = Eigen::MatrixXcd::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      flip(static_cast<Eigen::Index>(w.neg_index(static_cast<std::size_t>(i))), i) = flip_scalar;
    w.relation_residual = std::max(w.relation_residual, (s2 - flip).cwiseAbs().maxCoeff());
  } else {
    w.relation_residual = probe_residual(w, flip_scalar);
  }
  if (!(w.relation_residual < tol))
    throw std::runtime_error("convention inconsistency: generator relation residual above tolerance");
  return w;
}

Eigen::VectorXcd s_image_of_e0(const WeilRep& w) { return w.rho_s.col(0); }

InvariantSpace invariant_vectors(const WeilRep& w, double tol) {
  const auto d = static_cast<Eigen::Index>(w.dimension());
  Eigen::MatrixXcd stacked(2 * d, d);
  stacked.topRows(d) = w.rho_s - Eigen::MatrixXcd::Identity(d, d);
  stacked.bottomRows(d) =
      w.rho_t.asDiagonal().toDenseMatrix() - Eigen::MatrixXcd::Identity(d, d);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stacked, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  InvariantSpace out;
  Eigen::Index kernel = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) < tol) ++kernel;
    if (sv(i) >= tol / 10 && sv(i) <= tol * 10) out.ill_conditioned = true;
  }
  out.basis = svd.matrixV().rightCols(kernel);
  return out;
}

const char* obstruction_verdict_name(ObstructionVerdict v) {
  switch (v) {
    case ObstructionVerdict::ExcludedWeight: return "ExcludedWeight";
    case ObstructionVerdict::ExcludedInvariance: return "ExcludedInvariance";
    case ObstructionVerdict::NotExcluded: return "NotExcluded";
    case ObstructionVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

ObstructionResult borcherds_obstruction(const Lattice& l, bool caller_asserts_2u, double tol) {
  Signature sig = signature(l.gram);
  if (sig.pos != 2 || sig.zero != 0)
    throw std::invalid_argument("signature (2, n) required");
  if (!caller_asserts_2u) throw std::runtime_error("reduction required");
  const int n = static_cast<int>(sig.neg);

  ObstructionResult res;
  res.weight = Rat(26 - n, 2);
  res.weight.canonicalize();
  if (n >= 27) {
    res.verdict = ObstructionVerdict::ExcludedWeight;
    res.reason = "required input weight " + rat_to_string(res.weight) +
                 " is negative, so the input form vanishes identically";
    return res;
  }
  if (n <= 25) {
    res.verdict = ObstructionVerdict::Inconclusive;
    res.reason = "input weight " + rat_to_string(res.weight) +
                 " is positive; no obstruction from the weight argument";
    return res;
  }
  Fqm a = discriminant_form(l);
  if (a.order() == 1) {
    res.verdict = ObstructionVerdict::NotExcluded;
    res.reason = "unimodular at n = 26; the invariance argument is vacuous";
    return res;
  }
  WeilRep w = build_weilrep(a, n, tol);
  Eigen::VectorXcd img = s_image_of_e0(w);
  res.witness.assign(img.data(), img.data() + img.size());
  res.verdict = ObstructionVerdict::ExcludedInvariance;
  res.reason = "weight 0 input must be an invariant vector, but S spreads e_0 over all " +
               a.order().get_str() + " classes with equal modulus";
  return res;
}

const char* reflective_class_name(ReflectiveClass c) {
  switch (c) {
    case ReflectiveClass::ReflectiveFullDiv: return "ReflectiveFullDiv";
    case ReflectiveClass::ReflectiveHalfDiv: return "ReflectiveHalfDiv";
    case ReflectiveClass::NotReflective: return "NotReflective";
  }
  return "?";
}

ReflectiveInfo classify_reflective_vector(const ZVec& l, const Lattice& lat) {
  if (l.size() != lat.rank()) throw std::invalid_argument("coordinate size mismatch");
  Int g = 0;
  for (const Int& c : l) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (g != 1) throw std::invalid_argument("vector is not primitive");
  Int norm = norm_of(lat, l);
  if (norm >= 0) throw std::invalid_argument("negative norm required");

  ReflectiveInfo info;
  info.d = -norm / 2;
  info.div = divisibility(lat, l);
  if (info.div != 2 * info.d && info.div != info.d) {
    info.kind = ReflectiveClass::NotReflective;
    return info;
  }
  info.kind = info.div == 2 * info.d ? ReflectiveClass::ReflectiveFullDiv
                                     : ReflectiveClass::ReflectiveHalfDiv;
  info.heegner_disc = info.div == 2 * info.d ? Rat(-1) / Rat(4 * info.d) : Rat(-1) / Rat(info.d);
  Fqm a = discriminant_form(lat);
  QVec scaled(l.size());
  for (std::size_t i = 0; i < l.size(); ++i) scaled[i] = Rat(l[i]) / Rat(info.div);
  info.heegner_class = a.class_of_dual(scaled);
  return info;
}

Rat max_slope(const DivisorPattern& p) {
  if (p.alpha <= 0) throw std::invalid_argument("weight must be positive");
  Rat best = Rat(p.beta0) / p.alpha;
  for (const auto& [mu, beta] : p.beta_mu) {
    (void)mu;
    Rat s = Rat(beta) / p.alpha;
    if (s > best) best = s;
  }
  return best;
}

PrincipalPart principal_part(const DivisorPattern& p) {
  if (p.beta0 < 0) throw std::invalid_argument("multiplicities must be nonnegative");
  std::size_t ngen = p.beta_mu.empty() ? 0 : p.beta_mu.front().first.size();
  PrincipalPart out;
  out.terms.emplace_back(ZVec(ngen, Int(0)), Rat(-1), p.beta0);
  for (const auto& [mu, beta] : p.beta_mu) {
    if (beta < 0) throw std::invalid_argument("multiplicities must be nonnegative");
    out.terms.emplace_back(mu, Rat(-1, 4), beta - p.beta0);
  }
  return out;
}

}  // namespace reflat
