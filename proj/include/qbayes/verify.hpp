// Copyright 2026 The qbayes Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Seeded generators for every object kind, and a harness that evaluates the
// equational laws of classical and quantum conditioning on random draws.
//
// Each trial owns an RNG stream derived from (seed, trial index), so a suite
// gives the same report for the same (suite, trials, seed, dims) whatever the
// number of worker threads.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

#include "qbayes/classical.hpp"
#include "qbayes/correspond.hpp"
#include "qbayes/error.hpp"
#include "qbayes/io.hpp"
#include "qbayes/matrix.hpp"
#include "qbayes/quantum.hpp"

namespace qbayes::verify {

using Rng = std::mt19937_64;
using nlohmann::json;

/// Independent stream for one trial.
inline Rng trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return Rng(seq);
}

// ---------------------------------------------------------------------------
// Generators.

/// Matrix with independent complex standard-normal entries.
inline CMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index r = 0; r < g.rows(); ++r)
    for (Eigen::Index c = 0; c < g.cols(); ++c) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex(re, im);
    }
  return g;
}

/// Uniform on the open interval (0, 1).
inline double open_unit(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double x = 0.0;
  while (x == 0.0) x = u(rng);
  return x;
}

/// G G^dagger / tr(G G^dagger); full rank almost surely.
inline quantum::QState random_qstate(const DimList& dims, Rng& rng) {
  check_dims(dims);
  const std::size_t n = flat_dim(dims);
  const CMatrix g = ginibre(n, n, rng);
  const CMatrix p = g * g.adjoint();
  return quantum::QState(p / p.trace().real(), dims);
}

/// u P / ||P||_op with P = G G^dagger and u uniform on (0, 1).
inline quantum::Effect random_effect(const DimList& dims, Rng& rng) {
  check_dims(dims);
  const std::size_t n = flat_dim(dims);
  const CMatrix g = ginibre(n, n, rng);
  const CMatrix p = hermitian_part(g * g.adjoint());
  const double u = open_unit(rng);
  return quantum::Effect(u * p / eigenvalues(p).maxCoeff(), dims);
}

/// Unital channel from the Kraus operators of a random isometry H -> C^r (x) K.
inline quantum::QChannel random_qchannel(const DimList& in_dims, const DimList& out_dims, Rng& rng) {
  check_dims(in_dims);
  check_dims(out_dims);
  const std::size_t n = flat_dim(in_dims), m = flat_dim(out_dims);
  // r * m rows are needed for an isometry out of C^n.
  const std::size_t r = std::max(m, (n + m - 1) / m);
  const auto rows = static_cast<Eigen::Index>(r * m), cols = static_cast<Eigen::Index>(n);
  Eigen::HouseholderQR<CMatrix> qr(ginibre(r * m, n, rng));
  const CMatrix v = qr.householderQ() * CMatrix::Identity(rows, cols);
  std::vector<CMatrix> kraus;
  for (std::size_t s = 0; s < r; ++s)
    kraus.push_back(v.middleRows(static_cast<Eigen::Index>(s * m), static_cast<Eigen::Index>(m)));
  return quantum::QChannel::from_kraus(in_dims, out_dims, kraus);
}

namespace detail {

inline RVector uniform_weights(std::size_t n, Rng& rng) {
  RVector w(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = open_unit(rng);
  return w;
}

}  // namespace detail

inline classical::Dist random_dist(const classical::Space& space, Rng& rng) {
  RVector w = detail::uniform_weights(space.size(), rng);
  return classical::Dist(space, RVector(w / w.sum()));
}

inline classical::FuzzyPred random_fuzzy_pred(const classical::Space& space, Rng& rng) {
  return classical::FuzzyPred(space, detail::uniform_weights(space.size(), rng));
}

inline classical::StochChannel random_stoch_channel(const classical::Space& dom,
                                                    const classical::Space& cod, Rng& rng) {
  classical::RMatrix m(static_cast<Eigen::Index>(dom.size()), static_cast<Eigen::Index>(cod.size()));
  for (Eigen::Index x = 0; x < m.rows(); ++x) {
    RVector w = detail::uniform_weights(cod.size(), rng);
    m.row(x) = (w / w.sum()).transpose();
  }
  return classical::StochChannel(dom, cod, std::move(m));
}

inline std::size_t uniform_size(std::size_t lo, std::size_t hi, Rng& rng) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// ---------------------------------------------------------------------------
// Reports.

enum class Suite {
  kClassicalBayes,
  kSemiExp,
  kQuantumBayes,
  kQuantumDuality,
  kPairExtract,
  kInference,
  kWitnesses,
  kEmbedding,
};

inline const std::vector<Suite>& all_suites() {
  static const std::vector<Suite> s{Suite::kClassicalBayes, Suite::kSemiExp,     Suite::kQuantumBayes,
                                    Suite::kQuantumDuality, Suite::kPairExtract, Suite::kInference,
                                    Suite::kWitnesses,      Suite::kEmbedding};
  return s;
}

inline std::string_view suite_name(Suite s) {
  switch (s) {
    case Suite::kClassicalBayes: return "classical-bayes";
    case Suite::kSemiExp: return "semiexp";
    case Suite::kQuantumBayes: return "quantum-bayes";
    case Suite::kQuantumDuality: return "quantum-duality";
    case Suite::kPairExtract: return "pair-extract";
    case Suite::kInference: return "inference";
    case Suite::kWitnesses: return "witnesses";
    case Suite::kEmbedding: return "embedding";
  }
  return "?";
}

inline std::optional<Suite> parse_suite(std::string_view name) {
  for (Suite s : all_suites())
    if (suite_name(s) == name) return s;
  return std::nullopt;
}

struct EquationResult {
  std::string name;
  double max_dev = 0.0;
  double tol = 0.0;
  std::size_t evaluated = 0;
  bool pass = false;
};

/// Best counterexample found for an inequality claim.
struct Witness {
  std::string name;
  double deviation = 0.0;
  double threshold = 0.0;
  bool found = false;
  json inputs;
};

struct TrialReport {
  std::string suite;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::pair<std::size_t, std::size_t> dims{0, 0};
  std::vector<EquationResult> equations;
  std::vector<Witness> witnesses;
  std::size_t errors = 0;
  std::vector<std::string> error_messages;  // first few only

  bool pass() const {
    return std::all_of(equations.begin(), equations.end(), [](const auto& e) { return e.pass; }) &&
           std::all_of(witnesses.begin(), witnesses.end(), [](const auto& w) { return w.found; });
  }

  const EquationResult& equation(std::string_view name) const {
    for (const auto& e : equations)
      if (e.name == name) return e;
    throw Error("report has no equation '" + std::string(name) + "'");
  }

  const Witness& witness(std::string_view name) const {
    for (const auto& w : witnesses)
      if (w.name == name) return w;
    throw Error("report has no witness '" + std::string(name) + "'");
  }

  json to_json() const {
    json eqs = json::array();
    for (const auto& e : equations)
      eqs.push_back({{"name", e.name}, {"max_dev", e.max_dev}, {"tol", e.tol},
                     {"evaluated", e.evaluated}, {"pass", e.pass}});
    json ws = json::array();
    for (const auto& w : witnesses)
      ws.push_back({{"name", w.name}, {"deviation", w.deviation}, {"threshold", w.threshold},
                    {"found", w.found}, {"inputs", w.inputs}});
    return {{"suite", suite},   {"seed", seed},     {"trials", trials},
            {"dims", {dims.first, dims.second}},   {"equations", std::move(eqs)},
            {"witnesses", std::move(ws)},          {"errors", errors},
            {"error_messages", error_messages},    {"pass", pass()}};
  }
};

struct SuiteConfig {
  std::size_t trials = 100;
  std::uint64_t seed = 2024;
  std::pair<std::size_t, std::size_t> dims{3, 5};
  std::optional<double> tol;  // overrides every equation tolerance
  std::size_t threads = 0;    // 0: hardware concurrency
};

namespace detail {

struct Candidate {
  double deviation = -1.0;
  json inputs;
};

/// What one trial observed: a deviation per equation (NaN when not reached)
/// and a candidate per witness.
struct Outcome {
  std::vector<double> devs;
  std::vector<Candidate> candidates;
  std::optional<std::string> error;

  void record(std::size_t eq, double dev) {
    if (std::isnan(devs[eq]) || dev > devs[eq] || std::isnan(dev)) devs[eq] = dev;
  }
  void offer(std::size_t w, double dev, const std::function<json()>& inputs) {
    if (dev > candidates[w].deviation) candidates[w] = {dev, inputs()};
  }
};

struct SuiteDef {
  std::vector<std::pair<std::string, double>> equations;         // name, tolerance
  std::vector<std::pair<std::string, double>> witnesses;         // name, threshold
  std::function<void(Rng&, std::size_t, Outcome&)> trial;
};

inline double frob(const CMatrix& a, const CMatrix& b) { return (a - b).norm(); }

inline double max_abs(const RVector& a, const RVector& b) {
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

inline double max_abs(const classical::RMatrix& a, const classical::RMatrix& b) {
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

inline double block_dev(const quantum::QChannel& a, const quantum::QChannel& b) {
  if (a.blocks().size() != b.blocks().size()) return INFINITY;
  double d = 0.0;
  for (std::size_t i = 0; i < a.blocks().size(); ++i) d = std::max(d, frob(a.blocks()[i], b.blocks()[i]));
  return d;
}

inline std::vector<std::size_t> distinct_dims(std::pair<std::size_t, std::size_t> dims) {
  if (dims.first == dims.second) return {dims.first};
  return {dims.first, dims.second};
}

// ------------------------------- classical --------------------------------

inline SuiteDef classical_bayes_suite() {
  constexpr double t = 1e-12;
  SuiteDef s;
  s.equations = {{"product_rule", t},          {"bayes_rule", t},
                 {"successive_conditioning", t}, {"commuting_conditioning", t},
                 {"validity_duality", t},      {"inference_forward", t},
                 {"inference_backward", t},    {"disintegration_roundtrip", t}};
  s.trial = [](Rng& rng, std::size_t, Outcome& out) {
    using namespace classical;
    const Space x(FinSet::range(uniform_size(4, 6, rng), "x"));
    const Space y(FinSet::range(uniform_size(4, 6, rng), "y"));
    const Dist w = random_dist(x, rng);
    const FuzzyPred p = random_fuzzy_pred(x, rng);
    const FuzzyPred q = random_fuzzy_pred(x, rng);

    const double wp = validity(w, p), wq = validity(w, q);
    const double lhs = validity(condition(w, p), q);
    out.record(0, std::abs(lhs - validity(w, seq_conj(p, q)) / wp));
    out.record(1, std::abs(lhs - validity(condition(w, q), p) * wq / wp));
    const Dist wpq = condition(condition(w, p), q);
    out.record(2, max_abs(wpq.probs(), condition(w, seq_conj(p, q)).probs()));
    out.record(3, max_abs(wpq.probs(), condition(condition(w, q), p).probs()));

    const StochChannel c = random_stoch_channel(x, y, rng);
    const FuzzyPred qy = random_fuzzy_pred(y, rng);
    out.record(4, std::abs(validity(state_transform(c, w), qy) - validity(w, pred_transform(c, qy))));

    const Dist tau = random_dist(Space::product(x, y), rng);
    const StochChannel e = extract(tau);
    const Dist m1 = marginal(tau, {1, 0});
    const Dist fwd_joint = marginal(condition(tau, tensor(p, FuzzyPred::truth(y))), {0, 1});
    out.record(5, max_abs(fwd_joint.probs(), state_transform(e, condition(m1, p)).probs()));
    const Dist bwd_joint = marginal(condition(tau, tensor(FuzzyPred::truth(x), qy)), {1, 0});
    out.record(6, max_abs(bwd_joint.probs(), condition(m1, pred_transform(e, qy)).probs()));
    out.record(7, max_abs(pair(m1, e).probs(), tau.probs()));
  };
  return s;
}

inline SuiteDef semiexp_suite() {
  constexpr double t = 1e-12;
  SuiteDef s;
  s.equations = {{"beta_law", t}, {"naturality", t}};
  s.witnesses = {{"eta_law_violation", 1e-6}};
  s.trial = [](Rng& rng, std::size_t, Outcome& out) {
    using namespace classical;
    const FinSet z = FinSet::range(uniform_size(1, 4, rng), "z");
    const FinSet x = FinSet::range(uniform_size(1, 4, rng), "x");
    const FinSet y = FinSet::range(uniform_size(1, 4, rng), "y");
    const FinSet w = FinSet::range(uniform_size(1, 4, rng), "w");
    const StochChannel f = random_stoch_channel(Space(std::vector<FinSet>{z, x}), Space(y), rng);
    const StochChannel g = random_stoch_channel(Space(w), Space(z), rng);

    const SemiExpAbstraction lam = semiexp_abstract(f);
    out.record(0, max_abs(semiexp_eval_abstract(lam, x).rows(), f.rows()));

    const SemiExpAbstraction lhs = semiexp_abstract(semiexp_precompose(f, g));
    const std::vector<Dist> rhs = semiexp_average(lam, g);
    double nat = 0.0;
    for (std::size_t wi = 0; wi < w.size(); ++wi)
      nat = std::max(nat, max_abs(lhs(wi).probs(), rhs[wi].probs()));
    out.record(1, nat);

    // Lambda(ev) against the identity on a small family of joint states.
    std::vector<Dist> family;
    const std::size_t count = uniform_size(1, 3, rng);
    for (std::size_t i = 0; i < count; ++i)
      family.push_back(random_dist(Space(std::vector<FinSet>{x, y}), rng));
    const SemiExpAbstraction back = semiexp_abstract(semiexp_ev_channel(family));
    for (std::size_t i = 0; i < family.size(); ++i) {
      const double dev = max_abs(back(i).probs(), family[i].probs());
      out.offer(0, dev, [&] { return json{{"tau", io::to_json(family[i])}, {"lambda_ev_tau", io::to_json(back(i))}}; });
    }
  };
  return s;
}

// -------------------------------- quantum ---------------------------------

inline SuiteDef quantum_bayes_suite(std::pair<std::size_t, std::size_t> dims) {
  constexpr double t = 1e-10;
  SuiteDef s;
  s.equations = {{"product_rule_lower", t}, {"bayes_rule_upper", t}, {"truth_is_neutral", t}};
  s.trial = [dims](Rng& rng, std::size_t, Outcome& out) {
    using namespace quantum;
    for (std::size_t d : distinct_dims(dims)) {
      const DimList dl{d};
      const QState sigma = random_qstate(dl, rng);
      const Effect p = random_effect(dl, rng), q = random_effect(dl, rng);
      const double sp = validity(sigma, p), sq = validity(sigma, q);
      out.record(0, std::abs(validity(cond_lower(sigma, p), q) - validity(sigma, seq_conj(p, q)) / sp));
      out.record(1, std::abs(validity(cond_upper(sigma, p), q) - validity(cond_upper(sigma, q), p) * sq / sp));
      const Effect one = Effect::truth(dl);
      out.record(2, std::max(frob(cond_lower(sigma, one).mat(), sigma.mat()),
                             frob(cond_upper(sigma, one).mat(), sigma.mat())));
    }
  };
  return s;
}

inline SuiteDef quantum_duality_suite(std::pair<std::size_t, std::size_t> dims) {
  constexpr double t = 1e-10;
  SuiteDef s;
  s.equations = {{"validity_duality", t},
                 {"compose_state_transform", t},
                 {"compose_pred_transform", t},
                 {"tensor_pred_transform", t}};
  s.trial = [dims](Rng& rng, std::size_t, Outcome& out) {
    using namespace quantum;
    const DimList h{dims.first}, k{dims.second}, two{2};
    const QChannel c = random_qchannel(h, k, rng);
    const QChannel d = random_qchannel(k, two, rng);
    const QState sigma = random_qstate(h, rng);
    const Effect q = random_effect(k, rng);
    const Effect r = random_effect(two, rng);
    out.record(0, std::abs(validity(state_transform(c, sigma), q) - validity(sigma, pred_transform(c, q))));
    const QChannel dc = compose(d, c);
    out.record(1, frob(state_transform(dc, sigma).mat(), state_transform(d, state_transform(c, sigma)).mat()));
    out.record(2, frob(pred_transform(dc, r).mat(), pred_transform(c, pred_transform(d, r)).mat()));
    const QChannel c2 = random_qchannel(two, two, rng);
    const Effect r2 = random_effect(two, rng);
    out.record(3, frob(pred_transform(tensor(c, c2), tensor(q, r2)).mat(),
                       kron(pred_transform(c, q).mat(), pred_transform(c2, r2).mat())));
  };
  return s;
}

inline SuiteDef pair_extract_suite(std::pair<std::size_t, std::size_t> dims) {
  SuiteDef s;
  s.equations = {{"proj_of_pair", 1e-9},
                 {"extract_of_pair", 1e-9},
                 {"pair_of_proj_extract", 1e-9},
                 {"second_marginal", 1e-9},
                 {"pair_two_path", 1e-10}};
  s.trial = [dims](Rng& rng, std::size_t, Outcome& out) {
    using namespace quantum;
    const DimList h{dims.first}, k{dims.second};
    const QState sigma = random_qstate(h, rng);
    const QChannel c = random_qchannel(h, k, rng);
    const JointQState paired = pair(sigma, c);
    out.record(0, frob(proj(paired).mat(), sigma.mat()));
    out.record(1, block_dev(extract(paired), c));
    out.record(4, frob(paired.mat(), pair_via_cup(sigma, c).mat()));

    const JointQState tau(random_qstate(DimList{dims.first, dims.second}, rng));
    const Recovery rec = recover(tau);
    out.record(2, frob(pair(rec.state, rec.channel).mat(), tau.mat()));
    out.record(3, frob(rec.second.mat(), second_marginal(tau).mat()));
  };
  return s;
}

inline SuiteDef inference_suite(std::pair<std::size_t, std::size_t> dims) {
  SuiteDef s;
  s.equations = {{"forward", 1e-9}, {"backward", 1e-9}};
  s.trial = [dims](Rng& rng, std::size_t, Outcome& out) {
    using namespace quantum;
    const JointQState tau(random_qstate(DimList{dims.first, dims.second}, rng));
    const Effect p = random_effect(DimList{dims.first}, rng);
    const Effect q = random_effect(DimList{dims.second}, rng);
    out.record(0, frob(crossover_second(tau, p).mat(), inference_forward(tau, p).mat()));
    out.record(1, frob(crossover_first(tau, q).mat(), inference_backward(tau, q).mat()));
  };
  return s;
}

/// sigma = I/2, p = |0><0|, q = |+><+|.
struct FixedWitness {
  quantum::QState sigma;
  quantum::Effect p;
  quantum::Effect q;
};

inline FixedWitness fixed_qubit_witness() {
  CMatrix plus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  return {quantum::QState(identity(2) / 2.0), quantum::Effect(matrix_unit(2, 0, 0)), quantum::Effect(plus)};
}

struct WitnessDistances {
  double noncommute_lower, noncommute_upper, nonreduce_lower, nonreduce_upper;
};

inline WitnessDistances witness_distances(const quantum::QState& sigma, const quantum::Effect& p,
                                          const quantum::Effect& q) {
  using namespace quantum;
  const QState lpq = cond_lower(cond_lower(sigma, p), q);
  const QState upq = cond_upper(cond_upper(sigma, p), q);
  const Effect pq = seq_conj(p, q);
  return {frob(lpq.mat(), cond_lower(cond_lower(sigma, q), p).mat()),
          frob(upq.mat(), cond_upper(cond_upper(sigma, q), p).mat()),
          frob(lpq.mat(), cond_lower(sigma, pq).mat()), frob(upq.mat(), cond_upper(sigma, pq).mat())};
}

inline SuiteDef witnesses_suite(std::pair<std::size_t, std::size_t> dims) {
  SuiteDef s;
  s.equations = {{"fixed_noncommutation_distance", 1e-10}};
  s.witnesses = {{"noncommutation_lower", 0.01},
                 {"noncommutation_upper", 0.01},
                 {"nonreduction_lower", 0.01},
                 {"nonreduction_upper", 0.01}};
  s.trial = [dims](Rng& rng, std::size_t trial, Outcome& out) {
    using namespace quantum;
    auto offer_all = [&](const QState& sigma, const Effect& p, const Effect& q) {
      const WitnessDistances d = witness_distances(sigma, p, q);
      auto inputs = [&] {
        return json{{"sigma", io::to_json(sigma)}, {"p", io::to_json(p)}, {"q", io::to_json(q)}};
      };
      out.offer(0, d.noncommute_lower, inputs);
      out.offer(1, d.noncommute_upper, inputs);
      out.offer(2, d.nonreduce_lower, inputs);
      out.offer(3, d.nonreduce_upper, inputs);
    };
    const FixedWitness fw = fixed_qubit_witness();
    const double fixed = witness_distances(fw.sigma, fw.p, fw.q).noncommute_lower;
    out.record(0, std::abs(fixed - 1.0));
    if (trial == 0) offer_all(fw.sigma, fw.p, fw.q);
    for (std::size_t d : distinct_dims(dims)) {
      const DimList dl{d};
      const QState sigma = random_qstate(dl, rng);
      offer_all(sigma, random_effect(dl, rng), random_effect(dl, rng));
    }
  };
  return s;
}

inline SuiteDef embedding_suite() {
  constexpr double t = 1e-10;
  SuiteDef s;
  s.equations = {{"validity", t},          {"seq_conj", t},          {"cond_lower", t},
                 {"cond_upper", t},        {"state_transform", t},   {"pred_transform", t},
                 {"pair", t},              {"proj", t},              {"extract", t},
                 {"crossover_second", t},  {"inference_forward", t}, {"crossover_first", t},
                 {"inference_backward", t}};
  s.trial = [](Rng& rng, std::size_t, Outcome& out) {
    namespace cl = classical;
    namespace qu = quantum;
    const cl::Space x(cl::FinSet::range(uniform_size(2, 5, rng), "x"));
    const cl::Space y(cl::FinSet::range(uniform_size(2, 5, rng), "y"));
    const cl::Dist w = random_dist(x, rng);
    const cl::FuzzyPred p = random_fuzzy_pred(x, rng), q = random_fuzzy_pred(x, rng);
    const cl::StochChannel c = random_stoch_channel(x, y, rng);
    const cl::FuzzyPred qy = random_fuzzy_pred(y, rng);

    out.record(0, std::abs(cl::validity(w, p) - qu::validity(qu::hat(w), qu::hat(p))));
    out.record(1, frob(qu::hat(cl::seq_conj(p, q)).mat(), qu::seq_conj(qu::hat(p), qu::hat(q)).mat()));
    const CMatrix cond = qu::hat(cl::condition(w, p)).mat();
    out.record(2, frob(cond, qu::cond_lower(qu::hat(w), qu::hat(p)).mat()));
    out.record(3, frob(cond, qu::cond_upper(qu::hat(w), qu::hat(p)).mat()));
    const qu::QChannel hc = qu::hat(c);
    out.record(4, frob(qu::hat(cl::state_transform(c, w)).mat(), qu::state_transform(hc, qu::hat(w)).mat()));
    out.record(5, frob(qu::hat(cl::pred_transform(c, qy)).mat(), qu::pred_transform(hc, qu::hat(qy)).mat()));
    out.record(6, frob(qu::hat(cl::pair(w, c)).mat(), qu::pair(qu::hat(w), hc).mat()));

    const cl::Dist tau = random_dist(cl::Space::product(x, y), rng);
    const qu::JointQState htau(qu::hat(tau));
    const cl::Dist m1 = cl::marginal(tau, {1, 0});
    out.record(7, frob(qu::hat(m1).mat(), qu::proj(htau).mat()));
    out.record(8, block_dev(qu::extract(htau), qu::hat(cl::extract(tau))));

    const cl::Dist fwd = cl::marginal(cl::condition(tau, cl::tensor(p, cl::FuzzyPred::truth(y))), {0, 1});
    out.record(9, frob(qu::hat(fwd).mat(), qu::crossover_second(htau, qu::hat(p)).mat()));
    out.record(10, frob(qu::hat(fwd).mat(), qu::inference_forward(htau, qu::hat(p)).mat()));
    const cl::Dist bwd = cl::condition(m1, cl::pred_transform(cl::extract(tau), qy));
    out.record(11, frob(qu::hat(bwd).mat(), qu::crossover_first(htau, qu::hat(qy)).mat()));
    out.record(12, frob(qu::hat(bwd).mat(), qu::inference_backward(htau, qu::hat(qy)).mat()));
  };
  return s;
}

inline SuiteDef make_def(Suite which, std::pair<std::size_t, std::size_t> dims) {
  switch (which) {
    case Suite::kClassicalBayes: return classical_bayes_suite();
    case Suite::kSemiExp: return semiexp_suite();
    case Suite::kQuantumBayes: return quantum_bayes_suite(dims);
    case Suite::kQuantumDuality: return quantum_duality_suite(dims);
    case Suite::kPairExtract: return pair_extract_suite(dims);
    case Suite::kInference: return inference_suite(dims);
    case Suite::kWitnesses: return witnesses_suite(dims);
    case Suite::kEmbedding: return embedding_suite();
  }
  throw Error("unknown suite");
}

}  // namespace detail

/// Runs `cfg.trials` independent trials of a suite and reduces them into a
/// report. Trial failures (e.g. a singular marginal) are counted, not thrown.
inline TrialReport run_suite(Suite which, const SuiteConfig& cfg) {
  if (cfg.trials < 1) throw ValidationError("run_suite: trials must be at least 1");
  if (cfg.dims.first < 1 || cfg.dims.second < 1) throw DimensionError("run_suite: dims must be positive");
  const detail::SuiteDef def = detail::make_def(which, cfg.dims);

  std::vector<detail::Outcome> outcomes(cfg.trials);
  auto run_one = [&](std::size_t t) {
    detail::Outcome& o = outcomes[t];
    o.devs.assign(def.equations.size(), std::numeric_limits<double>::quiet_NaN());
    o.candidates.assign(def.witnesses.size(), {});
    Rng rng = trial_rng(cfg.seed, t);
    try {
      def.trial(rng, t, o);
    } catch (const Error& e) {
      o.error = e.what();
    }
  };

  std::size_t workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, cfg.trials);
  if (workers <= 1) {
    for (std::size_t t = 0; t < cfg.trials; ++t) run_one(t);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < cfg.trials; t += workers) run_one(t);
      });
    for (auto& th : pool) th.join();
  }

  TrialReport report;
  report.suite = std::string(suite_name(which));
  report.trials = cfg.trials;
  report.seed = cfg.seed;
  report.dims = cfg.dims;
  for (const auto& [name, tol] : def.equations)
    report.equations.push_back({name, 0.0, cfg.tol.value_or(tol), 0, false});
  for (const auto& [name, threshold] : def.witnesses)
    report.witnesses.push_back({name, 0.0, threshold, false, json{}});

  std::vector<double> best(def.witnesses.size(), -1.0);
  for (const auto& o : outcomes) {
    if (o.error) {
      ++report.errors;
      if (report.error_messages.size() < 5) report.error_messages.push_back(*o.error);
    }
    for (std::size_t e = 0; e < o.devs.size(); ++e) {
      if (std::isnan(o.devs[e]) && !o.error) {
        // recorded NaN: the computation itself produced garbage
        report.equations[e].max_dev = INFINITY;
        ++report.equations[e].evaluated;
      } else if (!std::isnan(o.devs[e])) {
        report.equations[e].max_dev = std::max(report.equations[e].max_dev, o.devs[e]);
        ++report.equations[e].evaluated;
      }
    }
    for (std::size_t w = 0; w < o.candidates.size(); ++w)
      if (o.candidates[w].deviation > best[w]) {
        best[w] = o.candidates[w].deviation;
        report.witnesses[w].deviation = o.candidates[w].deviation;
        report.witnesses[w].inputs = o.candidates[w].inputs;
      }
  }
  for (auto& e : report.equations) e.pass = e.evaluated > 0 && e.max_dev < e.tol;
  for (auto& w : report.witnesses) w.found = w.deviation > w.threshold;
  return report;
}

inline TrialReport run_suite(Suite which, std::size_t trials, std::uint64_t seed,
                             std::pair<std::size_t, std::size_t> dims) {
  SuiteConfig cfg;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.dims = dims;
  return run_suite(which, cfg);
}

/// Plain-text rendering of a report.
inline std::string format(const TrialReport& r) {
  std::ostringstream os;
  os << "suite " << r.suite << "  trials=" << r.trials << " seed=" << r.seed << " dims=" << r.dims.first
     << "," << r.dims.second << "\n";
  char buf[256];
  for (const auto& e : r.equations) {
    std::snprintf(buf, sizeof buf, "  [%s] %-30s max_dev=%.3e  tol=%.0e  (%zu evaluated)\n",
                  e.pass ? "PASS" : "FAIL", e.name.c_str(), e.max_dev, e.tol, e.evaluated);
    os << buf;
  }
  for (const auto& w : r.witnesses) {
    std::snprintf(buf, sizeof buf, "  [%s] witness %-22s best=%.6f  threshold=%.0e\n",
                  w.found ? "FOUND" : "NONE", w.name.c_str(), w.deviation, w.threshold);
    os << buf;
  }
  if (r.errors) {
    os << "  " << r.errors << " trial(s) raised errors";
    if (!r.error_messages.empty()) os << ", first: " << r.error_messages.front();
    os << "\n";
  }
  os << "  => " << (r.pass() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace qbayes::verify
