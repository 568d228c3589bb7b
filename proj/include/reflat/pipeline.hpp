#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reflat/discform.hpp"
#include "reflat/pool.hpp"
#include "reflat/weilrep.hpp"

namespace reflat {

/** Slope bound entry for one pool member: either a ready lambda value or
 *  curve invariants to derive it from. */
struct LambdaEntry {
  PoolFamily family;
  Int parameter;
  std::optional<Rat> lambda;
  std::optional<CurveInvariants> curve;
};

struct Config {
  std::vector<LambdaEntry> lambda_table;
  std::map<std::size_t, Rat> f_ai;   // n -> f value
  std::map<std::size_t, Rat> f_aii;  // n -> f value
  double tol = 1e-9;
  Int max_elements = Int(200000);
  Int chamber_cap = Int(64);
  long box_radius = 12;
  bool drop_h0 = false;  // the base divisor term of the bound is dropped
};

/** Empty tables: classification stays honest and reports Unknown wherever a
 *  slope or f value would be needed. */
Config default_config();

/** Parse the JSON config document. Throws std::invalid_argument on malformed
 *  input; rationals are strings like "3/2". */
Config config_from_json(const std::string& text);

/** Slope value for a pool member, from the table entry or derived from curve
 *  invariants; nullopt when the config has no entry. */
std::optional<Rat> lambda_for(const Config& cfg, const PoolMember& member);

/** lambda = max_stabilizer * area_over_2pi. */
Rat slope_bound_from_curve(const CurveInvariants& inv);

/** B = (n*lambda/2) * (1+lambda)^(n-1) * (9 f_AI(n) + 2^(n-2) f_AII(n));
 *  the second summand is dropped under cfg.drop_h0. Missing f values raise
 *  std::runtime_error("config incomplete"). */
Rat discriminant_bound(std::size_t n, const Rat& lambda, const Config& cfg);

struct StepRecord {
  std::string op;       // stable operation token
  std::string outcome;  // canonical outcome token, compared on replay
  std::string detail;   // human-readable note
  bool config_dependent = false;
  bool decisive = false;
};

enum class VerdictStatus { NotTwoReflective, Candidate, Unknown };
const char* verdict_status_name(VerdictStatus s);

struct ClassificationVerdict {
  VerdictStatus status = VerdictStatus::Unknown;
  bool config_dependent = false;  // a decisive step used external config
  std::vector<StepRecord> reason_chain;
};

struct ReductionChain {
  Lattice reduced;
  QMat basis_in_old;  // rows of the reduced lattice basis in L coordinates
  std::vector<StepRecord> steps;
};

/** For signature (2, n), n >= 26: pass to the maximal even overlattice; when
 *  that is unimodular and proper, step back to an intermediate lattice with
 *  cyclic unimodular quotient. The result provably contains 2U (recorded
 *  length-condition step) and its exclusion excludes the input. */
ReductionChain reduce_for_obstruction(const Lattice& l);

/** End-to-end decision for an even lattice of signature (2, n), n >= 3. */
ClassificationVerdict classify(const Lattice& l, const Config& cfg);

/** Re-runs the decision procedure and confirms it reproduces the recorded
 *  chain (ops, outcomes, status) exactly. */
bool replay_chain(const Lattice& l, const Config& cfg, const ClassificationVerdict& recorded);

struct CandidateForm {
  std::string blocks;  // block expression, empty for the trivial form
  Fqm form;
  std::optional<Lattice> realization;  // 2U + block lattices when available
};

/** All block-built finite quadratic forms with |A| < B^2, Milgram signature
 *  == (2-n) mod 8, and the 2U length condition for signature (2, n); grams
 *  are attached where the rank 1/2 realization table covers every block. */
std::vector<CandidateForm> enumerate_candidates(std::size_t n, const Rat& bound,
                                                const Config& cfg);

}  // namespace reflat
