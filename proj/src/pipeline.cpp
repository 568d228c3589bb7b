#include "reflat/pipeline.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace reflat {

namespace {

using nlohmann::json;

Rat parse_rat(const json& v, const std::string& what) {
  std::string s;
  if (v.is_string())
    s = v.get<std::string>();
  else if (v.is_number_integer())
    s = std::to_string(v.get<long>());
  else
    throw std::invalid_argument("config: " + what + " must be a rational string");
  Rat r;
  if (mpq_set_str(r.get_mpq_t(), s.c_str(), 10) != 0 || r.get_den() == 0)
    throw std::invalid_argument("config: bad rational '" + s + "' for " + what);
  r.canonicalize();
  return r;
}

Rat pow_rat(const Rat& base, std::size_t e) {
  Rat out = 1;
  for (std::size_t i = 0; i < e; ++i) out *= base;
  return out;
}

std::string pool_member_name(PoolFamily family, const Int& parameter) {
  if (family == PoolFamily::Hyperbolic) return "U+<" + parameter.get_str() + ">";
  return "<4>+<4>+<-" + parameter.get_str() + ">";
}

StepRecord make_step(std::string op, std::string outcome, std::string detail,
                     bool config_dependent = false, bool decisive = false) {
  StepRecord s;
  s.op = std::move(op);
  s.outcome = std::move(outcome);
  s.detail = std::move(detail);
  s.config_dependent = config_dependent;
  s.decisive = decisive;
  return s;
}

Int abs_det(const Lattice& l) {
  Int d = det(l.gram);
  return d < 0 ? Int(-d) : d;
}

void require_even_2n(const Lattice& l, Signature& sig) {
  for (std::size_t i = 0; i < l.rank(); ++i)
    if (l.gram.at(i, i) % 2 != 0) throw std::invalid_argument("even lattice required");
  sig = signature(l.gram);
  if (sig.pos != 2 || sig.zero != 0 || sig.neg < 3)
    throw std::invalid_argument("signature (2, n) with n >= 3 required");
}

ClassificationVerdict classify_depth(const Lattice& l, const Config& cfg, int depth);

void finish(ClassificationVerdict& v) {
  for (const auto& s : v.reason_chain)
    if (s.decisive && s.config_dependent) v.config_dependent = true;
  if (v.status == VerdictStatus::NotTwoReflective) {
    bool decisive = false;
    for (const auto& s : v.reason_chain) decisive = decisive || s.decisive;
    if (!decisive) throw std::runtime_error("exclusion verdict without a decisive step");
  }
}

}  // namespace

Config default_config() { return Config{}; }

Config config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  Config cfg;
  if (j.contains("lambda_table")) {
    for (const auto& entry : j.at("lambda_table")) {
      LambdaEntry le;
      std::string fam = entry.at("family").get<std::string>();
      if (fam == "U+<b>") {
        le.family = PoolFamily::Hyperbolic;
        le.parameter = Int(entry.at("b").get<long>());
      } else if (fam == "<4>+<4>+<-a>") {
        le.family = PoolFamily::PrimeFour;
        le.parameter = Int(entry.at("a").get<long>());
      } else {
        throw std::invalid_argument("config: unknown family '" + fam + "'");
      }
      if (le.parameter <= 0 || le.parameter % 2 != 0)
        throw std::invalid_argument("config: pool parameter must be positive even");
      if (entry.contains("lambda")) {
        Rat lam = parse_rat(entry.at("lambda"), "lambda");
        if (lam <= 0) throw std::invalid_argument("config: lambda must be positive");
        le.lambda = lam;
      }
      if (entry.contains("curve")) {
        const auto& cj = entry.at("curve");
        CurveInvariants ci;
        ci.area_over_2pi = parse_rat(cj.at("area_over_2pi"), "area_over_2pi");
        ci.max_stabilizer = Int(cj.at("max_stabilizer").get<long>());
        if (cj.contains("source")) ci.source = cj.at("source").get<std::string>();
        if (ci.area_over_2pi <= 0 || ci.max_stabilizer <= 0)
          throw std::invalid_argument("config: curve invariants must be positive");
        le.curve = ci;
      }
      if (!le.lambda && !le.curve)
        throw std::invalid_argument("config: entry needs lambda or curve");
      cfg.lambda_table.push_back(std::move(le));
    }
  }
  for (auto [key, target] : {std::pair<const char*, std::map<std::size_t, Rat>*>{"f_AI", &cfg.f_ai},
                             {"f_AII", &cfg.f_aii}}) {
    if (!j.contains(key)) continue;
    for (const auto& [nk, val] : j.at(key).items()) {
      if (nk.empty() || nk.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("config: f table keys are decimal n values");
      std::size_t n = std::stoul(nk);
      Rat f = parse_rat(val, key);
      if (f <= 0) throw std::invalid_argument("config: f values must be positive");
      (*target)[n] = f;
    }
  }
  if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
  if (j.contains("drop_h0")) cfg.drop_h0 = j.at("drop_h0").get<bool>();
  if (j.contains("caps")) {
    const auto& caps = j.at("caps");
    if (caps.contains("max_elements")) cfg.max_elements = Int(caps.at("max_elements").get<long>());
    if (caps.contains("chamber_norm")) cfg.chamber_cap = Int(caps.at("chamber_norm").get<long>());
    if (caps.contains("box_radius")) cfg.box_radius = caps.at("box_radius").get<long>();
  }
  return cfg;
}

Rat slope_bound_from_curve(const CurveInvariants& inv) {
  if (inv.area_over_2pi <= 0 || inv.max_stabilizer <= 0)
    throw std::invalid_argument("curve invariants must be positive");
  Rat out = inv.area_over_2pi * Rat(inv.max_stabilizer);
  return out;
}

std::optional<Rat> lambda_for(const Config& cfg, const PoolMember& member) {
  for (const auto& e : cfg.lambda_table) {
    if (e.family != member.family || e.parameter != member.parameter) continue;
    if (e.lambda) return e.lambda;
    if (e.curve) return slope_bound_from_curve(*e.curve);
  }
  if (member.curve_data) return slope_bound_from_curve(*member.curve_data);
  return std::nullopt;
}

Rat discriminant_bound(std::size_t n, const Rat& lambda, const Config& cfg) {
  if (n < 3) throw std::invalid_argument("n >= 3 required");
  if (lambda < 0) throw std::invalid_argument("negative slope bound");
  auto it_ai = cfg.f_ai.find(n);
  if (it_ai == cfg.f_ai.end()) throw std::runtime_error("config incomplete");
  Rat term = Rat(9) * it_ai->second;
  if (!cfg.drop_h0) {
    auto it_aii = cfg.f_aii.find(n);
    if (it_aii == cfg.f_aii.end()) throw std::runtime_error("config incomplete");
    term += pow_rat(Rat(2), n - 2) * it_aii->second;
  }
  Rat b = Rat(Int(n)) * lambda / 2 * pow_rat(Rat(1) + lambda, n - 1) * term;
  return b;
}

const char* verdict_status_name(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::NotTwoReflective: return "NotTwoReflective";
    case VerdictStatus::Candidate: return "Candidate";
    case VerdictStatus::Unknown: return "Unknown";
  }
  return "Unknown";
}

ReductionChain reduce_for_obstruction(const Lattice& l) {
  Signature sig;
  require_even_2n(l, sig);
  if (sig.neg < 26) throw std::invalid_argument("n >= 26 required");
  const std::size_t n = sig.neg;

  ReductionChain rc;
  OverlatticeResult over = maximal_even_overlattice(l);
  Fqm aover = discriminant_form(over.lat);
  rc.steps.push_back(make_step(
      "maximal-even-overlattice",
      "index=" + over.index.get_str() + ",detA=" + aover.order().get_str(),
      "maximal even overlattice of index " + over.index.get_str() +
          "; exclusion of an overlattice excludes every finite index sublattice"));

  if (aover.order() == 1 && over.index > 1) {
    rc.steps.push_back(make_step(
        "unimodular-overlattice", "reached",
        "reduction reached the even unimodular lattice; inconclusive for the input by this "
        "route; switching to an intermediate lattice with cyclic unimodular quotient"));
    CyclicIntermediate ci = cyclic_intermediate(l, over.basis_in_old);
    rc.steps.push_back(make_step("cyclic-intermediate",
                                 "order=" + ci.quotient_order.get_str(),
                                 "intermediate lattice with cyclic quotient of order " +
                                     ci.quotient_order.get_str() + " inside the unimodular one"));
    rc.reduced = ci.lat;
    rc.basis_in_old = ci.basis_in_old;
  } else {
    rc.reduced = over.lat;
    rc.basis_in_old = over.basis_in_old;
  }

  Fqm ared = discriminant_form(rc.reduced);
  bool len = splits_2U_by_length(ared, n);
  rc.steps.push_back(make_step(
      "length-condition", len ? "holds" : "fails",
      "length " + std::to_string(fqm_length(ared)) + " against n = " + std::to_string(n) +
          "; a pass certifies a 2U direct summand"));
  if (!len) throw std::runtime_error("reduced lattice fails the length condition");
  return rc;
}

namespace {

ClassificationVerdict classify_depth(const Lattice& l, const Config& cfg, int depth) {
  Signature sig;
  require_even_2n(l, sig);
  const std::size_t n = sig.neg;
  ClassificationVerdict v;

  if (n >= 26) {
    ReductionChain rc = reduce_for_obstruction(l);
    for (auto& s : rc.steps) v.reason_chain.push_back(std::move(s));
    ObstructionResult ob = borcherds_obstruction(rc.reduced, true, cfg.tol);
    std::string name = obstruction_verdict_name(ob.verdict);
    bool excluded = ob.verdict == ObstructionVerdict::ExcludedWeight ||
                    ob.verdict == ObstructionVerdict::ExcludedInvariance;
    v.reason_chain.push_back(make_step(
        "obstruction", name + ",weight=" + ob.weight.get_str(),
        ob.reason + (excluded ? "; the input embeds with finite index, so exclusion transfers"
                              : ""),
        false, excluded));
    if (excluded) {
      v.status = VerdictStatus::NotTwoReflective;
    } else if (ob.verdict == ObstructionVerdict::NotExcluded) {
      if (abs_det(l) == 1) {
        v.reason_chain.push_back(make_step("unimodular-identity", "candidate",
                                           "the input is the even unimodular lattice itself, "
                                           "the known exception",
                                           false, true));
        v.status = VerdictStatus::Candidate;
      } else {
        v.reason_chain.push_back(make_step("unimodular-identity", "unreachable",
                                           "reduction ended unimodular for a proper sublattice"));
        v.status = VerdictStatus::Unknown;
      }
    } else {
      throw std::runtime_error("inconclusive obstruction at n >= 26");
    }
    finish(v);
    return v;
  }

  Fqm a = discriminant_form(l);
  bool len = splits_2U_by_length(a, n);
  v.reason_chain.push_back(make_step(
      "length-condition", len ? "holds" : "fails",
      "length " + std::to_string(fqm_length(a)) + " against n = " + std::to_string(n)));

  if (len) {
    Int an = compute_a_n(n);
    Int bn = compute_b_n(n);
    std::vector<PoolMember> pool = build_pool(n, an, bn);
    v.reason_chain.push_back(make_step(
        "pool", "a_n=" + an.get_str() + ",b_n=" + bn.get_str() +
                    ",members=" + std::to_string(pool.size()),
        "finite pool of modular curve lattices for n = " + std::to_string(n)));

    std::optional<Rat> lambda_max;
    std::string missing;
    for (const auto& m : pool) {
      std::optional<Rat> lam = lambda_for(cfg, m);
      if (!lam) {
        missing = pool_member_name(m.family, m.parameter);
        break;
      }
      if (!lambda_max || *lam > *lambda_max) lambda_max = lam;
    }
    if (!missing.empty()) {
      v.reason_chain.push_back(make_step("slope-table", "missing=" + missing,
                                         "no slope value configured for pool member " + missing,
                                         true));
      v.status = VerdictStatus::Unknown;
      finish(v);
      return v;
    }
    v.reason_chain.push_back(make_step("slope-table", "lambda_max=" + lambda_max->get_str(),
                                       "largest configured slope bound over the pool", true));
    Rat bound;
    try {
      bound = discriminant_bound(n, *lambda_max, cfg);
    } catch (const std::runtime_error&) {
      v.reason_chain.push_back(make_step("discriminant-bound", "config-incomplete",
                                         "f values missing for n = " + std::to_string(n), true));
      v.status = VerdictStatus::Unknown;
      finish(v);
      return v;
    }
    v.reason_chain.push_back(make_step("discriminant-bound", "B=" + bound.get_str(),
                                       "discriminant bound from the slope and f values", true));
    Int absA = abs_det(l);
    Rat b2 = bound * bound;
    if (Rat(absA) >= b2) {
      v.reason_chain.push_back(make_step(
          "bound-compare", "excluded,|A|=" + absA.get_str() + ",B2=" + b2.get_str(),
          "|A| meets or exceeds the squared bound", true, true));
      v.status = VerdictStatus::NotTwoReflective;
    } else {
      v.reason_chain.push_back(make_step(
          "bound-compare", "within,|A|=" + absA.get_str() + ",B2=" + b2.get_str(),
          "|A| is below the squared bound; the lattice survives every implemented test", true,
          true));
      v.status = VerdictStatus::Candidate;
    }
    finish(v);
    return v;
  }

  if (depth >= 1) {
    v.reason_chain.push_back(make_step("economic-overlattice", "exhausted",
                                       "length condition still fails after one reduction"));
    v.status = VerdictStatus::Unknown;
    finish(v);
    return v;
  }
  std::optional<EconomicReduction> eco = economic_isotropic(a, cfg.max_elements);
  if (!eco || eco->group.order == 1) {
    v.reason_chain.push_back(make_step("economic-overlattice", "none",
                                       "no isotropic subgroup reduces the length"));
    v.status = VerdictStatus::Unknown;
    finish(v);
    return v;
  }
  OverlatticeResult ov = overlattice(l, a, eco->group.gens);
  Fqm aov = discriminant_form(ov.lat);
  v.reason_chain.push_back(make_step(
      "economic-overlattice", "index=" + ov.index.get_str() + ",detA=" + aov.order().get_str(),
      "economic isotropic overlattice; exclusion transfers to the input"));
  ClassificationVerdict inner = classify_depth(ov.lat, cfg, depth + 1);
  for (auto& s : inner.reason_chain) v.reason_chain.push_back(std::move(s));
  if (inner.status == VerdictStatus::NotTwoReflective) {
    v.reason_chain.push_back(make_step("sublattice-transfer", "excluded",
                                       "the overlattice is excluded and the input has finite "
                                       "index in it",
                                       false, true));
    v.status = VerdictStatus::NotTwoReflective;
  } else {
    v.reason_chain.push_back(make_step("sublattice-transfer", "inconclusive",
                                       "the overlattice is not excluded; no conclusion "
                                       "descends to the input"));
    v.status = VerdictStatus::Unknown;
  }
  finish(v);
  return v;
}

}  // namespace

ClassificationVerdict classify(const Lattice& l, const Config& cfg) {
  return classify_depth(l, cfg, 0);
}

bool replay_chain(const Lattice& l, const Config& cfg, const ClassificationVerdict& recorded) {
  ClassificationVerdict again = classify(l, cfg);
  if (again.status != recorded.status) return false;
  if (again.config_dependent != recorded.config_dependent) return false;
  if (again.reason_chain.size() != recorded.reason_chain.size()) return false;
  for (std::size_t i = 0; i < again.reason_chain.size(); ++i) {
    const StepRecord& x = again.reason_chain[i];
    const StepRecord& y = recorded.reason_chain[i];
    if (x.op != y.op || x.outcome != y.outcome || x.config_dependent != y.config_dependent ||
        x.decisive != y.decisive)
      return false;
  }
  return true;
}

namespace {

struct Block {
  std::string text;
  Int order;
  bool cyclic = false;
  Int d;  // cyclic order
  Rat q;  // cyclic q value
  Lattice gram{ZMat(0, 0), ""};
  bool has_gram = false;
};

bool is_prime_power(const Int& d) {
  if (d < 2) return false;
  Int m = d;
  for (Int p = 2; p * p <= m; ++p)
    if (m % p == 0) {
      while (m % p == 0) m /= p;
      return m == 1;
    }
  return true;  // prime
}

/** Rank one and two realizations per block: <w> for cyclic groups whose q is
 *  a unit square multiple of 1/w, and the scaled hyperbolic / scaled A_2-like
 *  grams for u(k), v(k). */
std::optional<Lattice> rank1_for_group(const Int& d, const Rat& q) {
  if (d % 2 != 0) return std::nullopt;
  for (Int t = 1; t < 2 * d; ++t) {
    Int g;
    mpz_gcd(g.get_mpz_t(), t.get_mpz_t(), d.get_mpz_t());
    if (g != 1) continue;
    for (int sign = 1; sign >= -1; sign -= 2) {
      Int num = Int(sign) * t * t;
      Rat want(num, d);
      want.canonicalize();
      if (mod_interval(q - want, Rat(2)) == 0) {
        Int entry = Int(sign) * d;
        ZMat gr(1, 1);
        gr.at(0, 0) = entry;
        return make_lattice(gr, "<" + entry.get_str() + ">");
      }
    }
  }
  return std::nullopt;
}

std::optional<std::vector<Lattice>> realize_cyclics(const std::vector<const Block*>& cyclics) {
  struct Group {
    Int d = 1;
    Rat q = 0;
  };
  std::vector<Group> groups;
  std::vector<Lattice> out;
  std::function<bool(std::size_t)> assign = [&](std::size_t idx) -> bool {
    if (idx == cyclics.size()) {
      std::vector<Lattice> parts;
      for (const auto& g : groups) {
        auto r1 = rank1_for_group(g.d, g.q);
        if (!r1) return false;
        parts.push_back(*r1);
      }
      out = parts;
      return true;
    }
    const Block* b = cyclics[idx];
    for (auto& g : groups) {
      Int gc;
      mpz_gcd(gc.get_mpz_t(), g.d.get_mpz_t(), b->d.get_mpz_t());
      if (gc != 1) continue;
      Group saved = g;
      g.d *= b->d;
      g.q += b->q;
      if (assign(idx + 1)) return true;
      g = saved;
    }
    groups.push_back({b->d, b->q});
    if (assign(idx + 1)) return true;
    groups.pop_back();
    return false;
  };
  if (!assign(0)) return std::nullopt;
  return out;
}

std::optional<Lattice> realize_blocks(const std::vector<const Block*>& blocks, const Fqm& form,
                                      const Config& cfg) {
  std::vector<Lattice> parts{lattice_U(), lattice_U()};
  std::vector<const Block*> cyclics;
  for (const Block* b : blocks) {
    if (b->cyclic)
      cyclics.push_back(b);
    else if (b->has_gram)
      parts.push_back(b->gram);
    else
      return std::nullopt;
  }
  auto found = realize_cyclics(cyclics);
  if (!found) return std::nullopt;
  for (const auto& l : found.value()) parts.push_back(l);
  Lattice real = direct_sum(parts);
  Fqm check = discriminant_form(real);
  if (fqm_fingerprint(check, cfg.max_elements) != fqm_fingerprint(form, cfg.max_elements))
    return std::nullopt;
  return real;
}

}  // namespace

std::vector<CandidateForm> enumerate_candidates(std::size_t n, const Rat& bound,
                                                const Config& cfg) {
  if (n < 3 || n > 25) throw std::invalid_argument("3 <= n <= 25 required");
  Rat b2 = bound * bound;
  Int limit = 0;
  while (Rat(limit + 1) < b2) {
    ++limit;
    if (limit > 4096) throw CapExceeded("candidate enumeration cap exceeded");
  }
  if (limit < 1) limit = 1;  // the unimodular genus is never cut by its own bound
  const int want = static_cast<int>(((2 - static_cast<long>(n)) % 8 + 8) % 8);

  std::vector<Block> catalog;
  for (Int d = 2; d <= limit; ++d) {
    if (!is_prime_power(d)) continue;
    // Generators need gcd(a, d) = 1; q d^2 must be even, which forces an even
    // numerator at odd d and leaves odd numerators at d a power of two.
    bool two_adic = d % 2 == 0;
    for (Int a = two_adic ? 1 : 2; a < 2 * d; a += 2) {
      Int g;
      mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t());
      if (g != 1) continue;
      Block b;
      b.cyclic = true;
      b.d = d;
      b.q = Rat(a, d);
      b.q.canonicalize();
      b.order = d;
      b.text = "c(" + d.get_str() + "," + b.q.get_str() + ")";
      catalog.push_back(std::move(b));
    }
  }
  for (Int k = 1, order = 4; order <= limit; ++k, order *= 4) {
    long kk = to_long(k, "block scale");
    Int two_k = 1;
    for (long i = 0; i < kk; ++i) two_k *= 2;
    {
      Block b;
      b.order = order;
      b.text = "u(" + k.get_str() + ")";
      ZMat g(2, 2);
      g.at(0, 1) = two_k;
      g.at(1, 0) = two_k;
      b.gram = make_lattice(g, b.text);
      b.has_gram = true;
      catalog.push_back(std::move(b));
    }
    {
      Block b;
      b.order = order;
      b.text = "v(" + k.get_str() + ")";
      ZMat g(2, 2);
      g.at(0, 0) = 2 * two_k;
      g.at(1, 1) = 2 * two_k;
      g.at(0, 1) = two_k;
      g.at(1, 0) = two_k;
      b.gram = make_lattice(g, b.text);
      b.has_gram = true;
      catalog.push_back(std::move(b));
    }
  }
  // Numeric ordering keeps the smallest numerator as the kept representative
  // of each isomorphism class during deduplication.
  std::sort(catalog.begin(), catalog.end(), [](const Block& a, const Block& b) {
    if (a.order != b.order) return a.order < b.order;
    if (a.cyclic != b.cyclic) return a.cyclic;
    if (a.cyclic) return a.q < b.q;
    return a.text < b.text;
  });

  std::vector<CandidateForm> out;
  std::set<std::string> seen;
  std::vector<const Block*> chosen;
  std::function<void(std::size_t, Int)> rec = [&](std::size_t first, Int total) {
    {
      Fqm form;
      for (std::size_t bi = 0; bi < chosen.size(); ++bi) {
        Fqm piece = fqm_from_blocks(chosen[bi]->text);
        form = bi == 0 ? piece : direct_sum_fqm(form, piece);
      }
      bool pass = true;
      if (total > 1 && !(Rat(total) < b2)) pass = false;
      if (pass && milgram_signature(form, cfg.max_elements, cfg.tol) != want) pass = false;
      if (pass && !splits_2U_by_length(form, n)) pass = false;
      if (pass) {
        std::string fp = fqm_fingerprint(form, cfg.max_elements);
        if (seen.insert(fp).second) {
          CandidateForm cf;
          for (const Block* b : chosen) {
            if (!cf.blocks.empty()) cf.blocks += "+";
            cf.blocks += b->text;
          }
          cf.form = form;
          cf.realization = realize_blocks(chosen, form, cfg);
          out.push_back(std::move(cf));
        }
      }
    }
    for (std::size_t i = first; i < catalog.size(); ++i) {
      Int next = total * catalog[i].order;
      if (next > limit) continue;
      chosen.push_back(&catalog[i]);
      rec(i, next);
      chosen.pop_back();
    }
  };
  rec(0, Int(1));

  std::sort(out.begin(), out.end(), [](const CandidateForm& a, const CandidateForm& b) {
    if (a.form.order() != b.form.order()) return a.form.order() < b.form.order();
    return a.blocks < b.blocks;
  });
  return out;
}

}  // namespace reflat
