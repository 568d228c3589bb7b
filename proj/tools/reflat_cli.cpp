#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "reflat/pipeline.hpp"
#include "support/oracles.hpp"

using nlohmann::json;
using namespace reflat;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ZMat gram_from_json(const json& j) {
  const json& rows = j.is_object() ? j.at("gram") : j;
  if (!rows.is_array() || rows.empty()) throw std::invalid_argument("gram must be a matrix");
  std::size_t n = rows.size();
  ZMat g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != n)
      throw std::invalid_argument("gram must be square");
    for (std::size_t k = 0; k < n; ++k) g.at(i, k) = Int(rows[i][k].get<long>());
  }
  return g;
}

/** Inline JSON, a .json file path, or a direct sum expression. */
Lattice lattice_from_arg(const std::string& arg) {
  std::string text = arg;
  std::size_t first = text.find_first_not_of(" \t\n");
  if (first != std::string::npos && (text[first] == '[' || text[first] == '{')) {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw std::invalid_argument(std::string("bad gram JSON: ") + e.what());
    }
    std::string name = j.is_object() && j.contains("name") ? j.at("name").get<std::string>()
                                                           : std::string("input");
    return make_lattice(gram_from_json(j), name);
  }
  if (arg.size() > 5 && arg.rfind(".json") == arg.size() - 5)
    return lattice_from_arg(slurp(arg));
  return lattice_from_expr(arg);
}

Config config_from_arg(const std::string& path) {
  if (path.empty()) return default_config();
  return config_from_json(slurp(path));
}

long jint(const Int& v) { return to_long(v, "output value"); }

json jmat(const ZMat& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows; ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols; ++k) row.push_back(jint(m.at(i, k)));
    rows.push_back(row);
  }
  return rows;
}

json jvec(const ZVec& v) {
  json out = json::array();
  for (const Int& x : v) out.push_back(jint(x));
  return out;
}

json step_json(const StepRecord& s) {
  return json{{"op", s.op},
              {"outcome", s.outcome},
              {"detail", s.detail},
              {"config_dependent", s.config_dependent},
              {"decisive", s.decisive}};
}

void emit(const json& j, const std::string& summary) {
  std::cout << j.dump(2) << "\n";
  std::cerr << summary << "\n";
}

json form_json(const Fqm& a) {
  json orders = json::array();
  for (const Int& d : a.orders) orders.push_back(jint(d));
  json qs = json::array();
  for (const Rat& q : a.qdiag) qs.push_back(q.get_str());
  return json{{"orders", orders},
              {"q", qs},
              {"order", jint(a.order())},
              {"length", a.ngen()},
              {"milgram", milgram_signature(a)}};
}

int cmd_discform(const std::string& arg) {
  Lattice l = lattice_from_arg(arg);
  Fqm a = discriminant_form(l);
  Signature sig = signature(l.gram);
  json j = form_json(a);
  j["lattice"] = l.name;
  j["signature"] = json::array({sig.pos, sig.neg});
  emit(j, "discriminant group of order " + a.order().get_str() + " with " +
              std::to_string(a.ngen()) + " generators, signature octant " +
              std::to_string(milgram_signature(a)));
  return 0;
}

int cmd_roots(const std::string& arg) {
  Lattice l = lattice_from_arg(arg);
  RootDecomposition rd = root_sublattice(l);
  json comps = json::array();
  for (const auto& c : rd.components)
    comps.push_back(json{{"type", ade_label(c.kind, c.rank)},
                         {"rank", c.rank},
                         {"roots", c.root_count}});
  json j{{"lattice", l.name},
         {"components", comps},
         {"total_rank", rd.total_rank},
         {"root_count", rd.total_root_count}};
  emit(j, std::to_string(rd.components.size()) + " irreducible components, total rank " +
              std::to_string(rd.total_rank));
  return 0;
}

int cmd_heegner(const std::string& arg) {
  Lattice l = lattice_from_arg(arg);
  Fqm a = discriminant_form(l);
  std::vector<ZVec> pi = pi_elements(a);
  json mus = json::array();
  json targets = json::array();
  targets.push_back("H0");
  for (std::size_t i = 0; i < pi.size(); ++i) {
    mus.push_back(json{{"index", i}, {"elem", jvec(pi[i])}, {"q", a.q_of(pi[i]).get_str()}});
    targets.push_back("mu:" + std::to_string(i));
  }
  json j{{"lattice", l.name}, {"pi", mus}, {"targets", targets}};
  emit(j, "base component plus " + std::to_string(pi.size()) + " two-torsion components");
  return 0;
}

int cmd_an(std::size_t n) {
  Int a = compute_a_n(n);
  emit(json{{"n", n}, {"a_n", jint(a)}}, "a_" + std::to_string(n) + " = " + a.get_str());
  return 0;
}

int cmd_bn(std::size_t n) {
  Int b = compute_b_n(n);
  emit(json{{"n", n}, {"b_n", jint(b)}}, "b_" + std::to_string(n) + " = " + b.get_str());
  return 0;
}

int cmd_pool(std::size_t n) {
  Int a = compute_a_n(n);
  Int b = compute_b_n(n);
  std::vector<PoolMember> pool = build_pool(n, a, b);
  json members = json::array();
  for (const auto& m : pool)
    members.push_back(json{
        {"family", m.family == PoolFamily::Hyperbolic ? "U+<b>" : "<4>+<4>+<-a>"},
        {"parameter", jint(m.parameter)},
        {"name", m.gram.name},
        {"gram", jmat(m.gram.gram)}});
  json j{{"n", n}, {"a_n", jint(a)}, {"b_n", jint(b)}, {"members", members}};
  emit(j, std::to_string(pool.size()) + " pool members at n = " + std::to_string(n));
  return 0;
}

int cmd_curve(const std::string& arg, const std::string& target_text) {
  Lattice l = lattice_from_arg(arg);
  HeegnerTarget target;
  if (target_text == "H0") {
    target.is_mu = false;
  } else if (target_text.rfind("mu:", 0) == 0) {
    std::size_t idx = std::stoul(target_text.substr(3));
    std::vector<ZVec> pi = pi_elements(discriminant_form(l));
    if (idx >= pi.size())
      throw std::invalid_argument("target index " + std::to_string(idx) + " out of range (" +
                                  std::to_string(pi.size()) + " two-torsion components)");
    target.is_mu = true;
    target.mu = pi[idx];
  } else {
    throw std::invalid_argument("target must be H0 or mu:<index>");
  }
  GenericCurveCertificate cert = construct_generic_K(l, target);
  bool cond_i = check_condition_i(cert.k_rows, l);
  bool cond_ii = check_condition_ii(cert, l);
  json j{{"lattice", l.name},
         {"target", target_text},
         {"case", cert.case_tag},
         {"k_rows", jmat(cert.k_rows)},
         {"k_gram", jmat(cert.k_lat.gram)},
         {"witness", jvec(cert.witness_root)},
         {"pool_member",
          json{{"family", cert.pool.family == PoolFamily::Hyperbolic ? "U+<b>" : "<4>+<4>+<-a>"},
               {"parameter", jint(cert.pool.parameter)},
               {"name", cert.pool.gram.name}}},
         {"condition_i", cond_i},
         {"condition_ii", cond_ii}};
  emit(j, "certificate case " + cert.case_tag + " against pool member " + cert.pool.gram.name +
              (cond_i && cond_ii ? "; both conditions hold" : "; CONDITION FAILED"));
  return cond_i && cond_ii ? 0 : 1;
}

int cmd_obstruct(const std::string& arg) {
  Lattice l = lattice_from_arg(arg);
  Signature sig = signature(l.gram);
  if (sig.pos != 2 || sig.zero != 0) throw std::invalid_argument("signature (2, n) required");
  if (sig.neg < 26) {
    json j{{"lattice", l.name},
           {"verdict", "Inconclusive"},
           {"reason", "the exclusion argument applies to signature (2, n) with n >= 26"}};
    emit(j, "inconclusive below n = 26");
    return 0;
  }
  ReductionChain rc = reduce_for_obstruction(l);
  ObstructionResult ob = borcherds_obstruction(rc.reduced, true);
  json steps = json::array();
  for (const auto& s : rc.steps) steps.push_back(step_json(s));
  json j{{"lattice", l.name},
         {"verdict", obstruction_verdict_name(ob.verdict)},
         {"weight", ob.weight.get_str()},
         {"reason", ob.reason},
         {"steps", steps}};
  emit(j, std::string(obstruction_verdict_name(ob.verdict)) + " at weight " +
              ob.weight.get_str());
  return 0;
}

int cmd_classify(const std::string& arg, const std::string& config_path) {
  Lattice l = lattice_from_arg(arg);
  Config cfg = config_from_arg(config_path);
  ClassificationVerdict v = classify(l, cfg);
  json chain = json::array();
  for (const auto& s : v.reason_chain) chain.push_back(step_json(s));
  json j{{"lattice", l.name},
         {"status", verdict_status_name(v.status)},
         {"config_dependent", v.config_dependent},
         {"chain", chain}};
  emit(j, std::string(verdict_status_name(v.status)) + " after " +
              std::to_string(v.reason_chain.size()) + " steps" +
              (v.config_dependent ? " (config dependent)" : ""));
  return 0;
}

int cmd_enumerate(std::size_t n, const std::string& bound_text, const std::string& config_path,
                  std::size_t limit, std::size_t offset) {
  Config cfg = config_from_arg(config_path);
  Rat bound;
  if (!bound_text.empty()) {
    if (mpq_set_str(bound.get_mpq_t(), bound_text.c_str(), 10) != 0 || bound.get_den() == 0)
      throw std::invalid_argument("bad bound '" + bound_text + "'");
    bound.canonicalize();
    if (bound <= 0) throw std::invalid_argument("bound must be positive");
  } else {
    std::optional<Rat> lambda_max;
    for (const auto& m : build_pool(n)) {
      std::optional<Rat> lam = lambda_for(cfg, m);
      if (!lam) throw std::invalid_argument("config has no slope for " + m.gram.name +
                                            "; pass --bound or complete the table");
      if (!lambda_max || *lam > *lambda_max) lambda_max = lam;
    }
    bound = discriminant_bound(n, *lambda_max, cfg);
  }
  std::vector<CandidateForm> forms = enumerate_candidates(n, bound, cfg);
  json out = json::array();
  std::size_t end = limit == 0 ? forms.size() : std::min(forms.size(), offset + limit);
  for (std::size_t i = offset; i < end && i < forms.size(); ++i) {
    const CandidateForm& c = forms[i];
    json f = form_json(c.form);
    f["blocks"] = c.blocks;
    if (c.realization) f["realization"] = jmat(c.realization->gram);
    out.push_back(f);
  }
  json j{{"n", n},
         {"bound", bound.get_str()},
         {"count", forms.size()},
         {"offset", offset},
         {"forms", out}};
  emit(j, std::to_string(forms.size()) + " candidate forms below bound " + bound.get_str() +
              " at n = " + std::to_string(n));
  return 0;
}

int cmd_selftest() {
  struct Check {
    std::string name;
    bool ok = false;
    std::string detail;
  };
  std::vector<Check> checks;
  auto run = [&](const std::string& name, auto fn) {
    Check c;
    c.name = name;
    try {
      fn(c);
      if (c.detail.empty()) c.ok = true;
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = e.what();
    }
    checks.push_back(std::move(c));
  };

  run("interior minima vs coefficient box oracle", [](Check& c) {
    for (auto [kind, rank] : {std::pair<AdeKind, std::size_t>{AdeKind::A, 3},
                              {AdeKind::A, 5}, {AdeKind::D, 4}, {AdeKind::E, 6}}) {
      Int got = interior_minimum(kind, rank).value;
      Int want = oracle::oracle_interior_minimum_small(kind, rank);
      if (got != want) {
        c.detail = ade_label(kind, rank) + ": " + got.get_str() + " vs " + want.get_str();
        return;
      }
    }
  });
  run("a_n vs oracle for n = 4..8", [](Check& c) {
    for (std::size_t n = 4; n <= 8; ++n)
      if (compute_a_n(n) != oracle::oracle_a_n(n)) {
        c.detail = "mismatch at n = " + std::to_string(n);
        return;
      }
  });
  run("b_n vs oracle for n = 4..8", [](Check& c) {
    for (std::size_t n = 4; n <= 8; ++n)
      if (compute_b_n(n) != oracle::oracle_b_n(n)) {
        c.detail = "mismatch at n = " + std::to_string(n);
        return;
      }
  });
  run("base chamber value", [](Check& c) {
    if (min_chamber_point(0).norm != 4) c.detail = "k = 0 chamber is not 4";
  });
  run("root counts vs box scan", [](Check& c) {
    for (auto [kind, rank, count] :
         {std::tuple<AdeKind, std::size_t, std::size_t>{AdeKind::E, 8, 120},
          {AdeKind::D, 4, 12},
          {AdeKind::A, 5, 15}}) {
      Lattice l = lattice_ade(kind, rank);
      std::size_t got = roots(l).size();
      std::size_t scan = oracle::box_short_vectors(l.gram, 2).size();
      if (got != count || scan != count) {
        c.detail = ade_label(kind, rank) + ": " + std::to_string(got) + "/" +
                   std::to_string(scan) + " vs " + std::to_string(count);
        return;
      }
    }
  });
  run("signature octants", [](Check& c) {
    if (milgram_signature(discriminant_form(lattice_ade(AdeKind::E, 8))) != 0 ||
        milgram_signature(discriminant_form(lattice_ade(AdeKind::A, 1))) != 7 ||
        milgram_signature(discriminant_form(lattice_ade(AdeKind::A, 2))) != 6)
      c.detail = "octant mismatch on a fixed form";
  });
  run("representation relations at small order", [](Check& c) {
    WeilRep w = build_weilrep(discriminant_form(lattice_ade(AdeKind::A, 1)), 3);
    if (w.relation_residual > 1e-9) c.detail = "relation residual too large";
  });

  bool all = true;
  json out = json::array();
  for (const auto& c : checks) {
    all = all && c.ok;
    json e{{"name", c.name}, {"ok", c.ok}};
    if (!c.detail.empty()) e["detail"] = c.detail;
    out.push_back(e);
  }
  emit(json{{"ok", all}, {"checks", out}},
       all ? "all " + std::to_string(checks.size()) + " self tests passed"
           : "SELF TEST FAILURE");
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact-arithmetic toolkit for even lattices of signature (2, n): discriminant "
               "forms, reflective obstructions, and the classification pipeline"};
  app.require_subcommand(1);

  std::string lattice_arg, target_text = "H0", config_path, bound_text;
  std::size_t n_arg = 0, limit = 0, offset = 0;

  CLI::App* c_discform = app.add_subcommand("discform", "Discriminant form of a lattice");
  c_discform->add_option("lattice", lattice_arg, "expression, JSON, or .json file")->required();

  CLI::App* c_roots = app.add_subcommand("roots", "Root system decomposition");
  c_roots->add_option("lattice", lattice_arg)->required();

  CLI::App* c_heegner = app.add_subcommand("heegner", "Two-torsion divisor components");
  c_heegner->add_option("lattice", lattice_arg)->required();

  CLI::App* c_an = app.add_subcommand("an", "Interior minimum constant a_n");
  c_an->add_option("n", n_arg)->required()->check(CLI::Range(std::size_t(3), std::size_t(24)));

  CLI::App* c_bn = app.add_subcommand("bn", "Chamber constant b_n");
  c_bn->add_option("n", n_arg)->required()->check(CLI::Range(std::size_t(3), std::size_t(24)));

  CLI::App* c_pool = app.add_subcommand("pool", "Finite pool of rank 3 curve lattices");
  c_pool->add_option("n", n_arg)->required()->check(CLI::Range(std::size_t(3), std::size_t(24)));

  CLI::App* c_curve = app.add_subcommand("curve", "Generic curve certificate for a divisor");
  c_curve->add_option("lattice", lattice_arg)->required();
  c_curve->add_option("--target", target_text, "H0 or mu:<index>")->capture_default_str();

  CLI::App* c_obstruct = app.add_subcommand("obstruct", "Exclusion test at n >= 26");
  c_obstruct->add_option("lattice", lattice_arg)->required();

  CLI::App* c_classify = app.add_subcommand("classify", "Full decision procedure");
  c_classify->add_option("lattice", lattice_arg)->required();
  c_classify->add_option("--config", config_path, "JSON config file");

  CLI::App* c_enum = app.add_subcommand("enumerate", "Candidate discriminant forms under a bound");
  c_enum->add_option("--n", n_arg, "negative rank")->required();
  c_enum->add_option("--bound", bound_text, "rational bound B; derived from config if absent");
  c_enum->add_option("--config", config_path, "JSON config file");
  c_enum->add_option("--limit", limit, "page size, 0 = all");
  c_enum->add_option("--offset", offset, "page start");

  CLI::App* c_selftest = app.add_subcommand("selftest", "Cross-check against built-in oracles");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(c_discform)) return cmd_discform(lattice_arg);
    if (app.got_subcommand(c_roots)) return cmd_roots(lattice_arg);
    if (app.got_subcommand(c_heegner)) return cmd_heegner(lattice_arg);
    if (app.got_subcommand(c_an)) return cmd_an(n_arg);
    if (app.got_subcommand(c_bn)) return cmd_bn(n_arg);
    if (app.got_subcommand(c_pool)) return cmd_pool(n_arg);
    if (app.got_subcommand(c_curve)) return cmd_curve(lattice_arg, target_text);
    if (app.got_subcommand(c_obstruct)) return cmd_obstruct(lattice_arg);
    if (app.got_subcommand(c_classify)) return cmd_classify(lattice_arg, config_path);
    if (app.got_subcommand(c_enum))
      return cmd_enumerate(n_arg, bound_text, config_path, limit, offset);
    if (app.got_subcommand(c_selftest)) return cmd_selftest();
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
