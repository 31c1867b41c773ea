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

// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qbayes/cli.hpp"
#include "qbayes/qbayes.hpp"

namespace {

using qbayes::verify::Suite;
using qbayes::verify::TrialReport;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Every equation passes with enough evaluations, every witness found.
void require_report(Verdict& v, const TrialReport& r, std::size_t trials) {
  for (const auto& e : r.equations) {
    v.require(e.evaluated == trials,
              r.suite + "/" + e.name + " evaluated " + std::to_string(e.evaluated) + " of " + std::to_string(trials));
    v.require(e.pass, r.suite + "/" + e.name + " max_dev " + fmt("%.3e", e.max_dev));
  }
  for (const auto& w : r.witnesses) v.require(w.found, r.suite + "/" + w.name + " not found");
  v.require(r.errors == 0, r.suite + ": " + std::to_string(r.errors) + " trial errors");
}

double worst(const TrialReport& r) {
  double d = 0.0;
  for (const auto& e : r.equations) d = std::max(d, e.max_dev);
  return d;
}

bool run(int n, const std::string& title, double budget_s, const std::function<Verdict()>& body) {
  const auto t0 = Clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (budget_s > 0 && secs >= budget_s) v.require(false, "runtime " + fmt("%.2f", secs) + " s over budget");
  std::printf("[%s] criterion %d  %-34s %6.2f s  %s\n", v.pass ? "PASS" : "FAIL", n, title.c_str(), secs,
              v.detail.c_str());
  std::fflush(stdout);
  return v.pass;
}

Verdict smoking() {
  using qbayes::classical::format;
  Verdict v;
  const auto r = qbayes::cli::run_smoking(qbayes::cli::smoking_model());
  // Expected printed joint.
  const std::vector<double> joint{0.114, 0.171, 0.00875, 0.166, 0.006, 0.009, 0.0263, 0.499};
  for (std::size_t i = 0; i < joint.size(); ++i)
    v.require(std::abs(r.joint[i] - joint[i]) < 5e-4, "joint entry " + std::to_string(i));
  auto near = [&](const qbayes::classical::Dist& d, double t, const char* what) {
    v.require(std::abs(d[0] - t) < 5e-4 && std::abs(d[1] - (1 - t)) < 5e-4, what);
  };
  near(r.ashtray_prior, 0.46, "ashtray prior");
  near(r.cancer_prior, 0.155, "cancer prior");
  near(r.crossover, 0.267, "crossover posterior");
  near(r.via_channel, 0.267, "channel posterior");
  v.require(format(r.crossover) == "0.267|t> + 0.733|f>", "crossover prints as " + format(r.crossover));
  if (v.pass) v.detail = "posterior " + format(r.crossover) + " on both paths";
  return v;
}

Verdict suite_criterion(Suite s, std::size_t trials, const std::vector<std::pair<std::size_t, std::size_t>>& dims) {
  Verdict v;
  double dev = 0.0;
  for (auto d : dims) {
    const TrialReport r = qbayes::verify::run_suite(s, trials, 2024, d);
    require_report(v, r, trials);
    dev = std::max(dev, worst(r));
  }
  if (v.pass) v.detail = std::to_string(trials) + " trials, worst deviation " + fmt("%.2e", dev);
  return v;
}

Verdict semiexp() {
  Verdict v;
  const TrialReport r = qbayes::verify::run_suite(Suite::kSemiExp, 200, 2024, {3, 5});
  require_report(v, r, 200);
  if (v.pass)
    v.detail = "worst deviation " + fmt("%.2e", worst(r)) + ", eta-law violated by " +
               fmt("%.3f", r.witness("eta_law_violation").deviation);
  return v;
}

Verdict inference() {
  Verdict v = suite_criterion(Suite::kInference, 100, {{3, 5}, {2, 2}});
  std::ostringstream sink;
  const int code = qbayes::cli::run_cli(
      {"qbayes", "verify", "--suite", "inference", "--dims", "3,5", "--trials", "100", "--seed", "7"}, sink);
  v.require(code == 0, "CLI exit code " + std::to_string(code));
  if (v.pass) v.detail += ", CLI exit 0";
  return v;
}

Verdict witness() {
  Verdict v;
  const auto w = qbayes::verify::detail::fixed_qubit_witness();
  const auto d = qbayes::verify::detail::witness_distances(w.sigma, w.p, w.q);
  v.require(std::abs(d.noncommute_lower - 1.0) < 1e-10, "distance " + fmt("%.12f", d.noncommute_lower));
  if (v.pass) v.detail = "distance " + fmt("%.12f", d.noncommute_lower);
  return v;
}

}  // namespace

int main() {
  bool ok = true;
  ok &= run(1, "smoking example", 1.0, smoking);
  ok &= run(2, "classical equational suite", 5.0,
            [] { return suite_criterion(Suite::kClassicalBayes, 1000, {{3, 5}}); });
  ok &= run(3, "semi-exponential suite", 0, semiexp);
  ok &= run(4, "quantum Bayes suite", 0,
            [] { return suite_criterion(Suite::kQuantumBayes, 500, {{2, 3}, {4, 4}}); });
  ok &= run(5, "pair/extract recovery", 0,
            [] { return suite_criterion(Suite::kPairExtract, 100, {{3, 5}, {2, 2}}); });
  ok &= run(6, "quantum Bayesian inference", 10.0, inference);
  ok &= run(7, "fixed qubit witness", 0, witness);
  ok &= run(8, "embedding coherence", 0, [] { return suite_criterion(Suite::kEmbedding, 200, {{3, 5}}); });
  std::printf("%s\n", ok ? "all criteria pass" : "some criteria FAILED");
  return ok ? 0 : 1;
}
