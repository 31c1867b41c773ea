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

// The `qbayes` command line. Exit codes: 0 when everything checked holds,
// 1 when a law fails or an input is invalid, 2 on usage errors.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qbayes/classical.hpp"
#include "qbayes/correspond.hpp"
#include "qbayes/error.hpp"
#include "qbayes/io.hpp"
#include "qbayes/quantum.hpp"
#include "qbayes/verify.hpp"

namespace qbayes::cli {

using nlohmann::json;

/// Smoking / ashtray / cancer toy model.
struct SmokingModel {
  classical::Dist smoking;
  classical::StochChannel ashtray;
  classical::StochChannel cancer;
};

inline SmokingModel smoking_model() {
  using namespace classical;
  const Space b(FinSet::boolean());
  classical::RMatrix a(2, 2), c(2, 2);
  a << 0.95, 0.05, 0.25, 0.75;
  c << 0.4, 0.6, 0.05, 0.95;
  return {Dist(b, RVector((RVector(2) << 0.3, 0.7).finished())), StochChannel(b, b, a),
          StochChannel(b, b, c)};
}

struct SmokingResults {
  classical::Dist joint;          // (ashtray, smoking, cancer)
  classical::Dist crossover;      // cancer, given an ashtray, on the joint state
  classical::Dist via_channel;    // cancer >> (smoking | ashtray << t)
  classical::Dist ashtray_prior;
  classical::Dist cancer_prior;
};

inline SmokingResults run_smoking(const SmokingModel& m) {
  using namespace classical;
  const FinSet b = FinSet::boolean();
  const Space bs(b);
  const StochChannel fan =
      compose(tensor(tensor(m.ashtray, StochChannel::identity(bs)), m.cancer), StochChannel::copy(b, 3));
  Dist joint = state_transform(fan, m.smoking);
  const FuzzyPred t = FuzzyPred::point(bs, 0);
  const FuzzyPred evidence = tensor(tensor(t, FuzzyPred::truth(bs)), FuzzyPred::truth(bs));
  Dist cross = marginal(condition(joint, evidence), {0, 0, 1});
  Dist via = state_transform(m.cancer, condition(m.smoking, pred_transform(m.ashtray, t)));
  return {std::move(joint), std::move(cross), std::move(via), state_transform(m.ashtray, m.smoking),
          state_transform(m.cancer, m.smoking)};
}

namespace detail {

inline std::pair<std::size_t, std::size_t> parse_dims(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw CLI::ValidationError("--dims", "expected a,b");
  try {
    std::size_t pos_a = 0, pos_b = 0;
    const std::string sa = s.substr(0, comma), sb = s.substr(comma + 1);
    const long a = std::stol(sa, &pos_a), b = std::stol(sb, &pos_b);
    if (pos_a != sa.size() || pos_b != sb.size() || a < 1 || b < 1) throw std::invalid_argument(s);
    return {static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
  } catch (const std::logic_error&) {
    throw CLI::ValidationError("--dims", "expected two positive integers a,b");
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline int cmd_demo(bool as_json, std::ostream& out) {
  const SmokingModel m = smoking_model();
  const SmokingResults r = run_smoking(m);
  if (as_json) {
    out << json{{"joint", io::to_json(r.joint)},
                {"crossover", io::to_json(r.crossover)},
                {"via_channel", io::to_json(r.via_channel)},
                {"ashtray_prior", io::to_json(r.ashtray_prior)},
                {"cancer_prior", io::to_json(r.cancer_prior)}}
               .dump(2)
        << "\n";
  } else {
    out << "smoking            " << classical::format(m.smoking) << "\n"
        << "joint              " << classical::format(r.joint) << "\n"
        << "ashtray prior      " << classical::format(r.ashtray_prior) << "\n"
        << "cancer prior       " << classical::format(r.cancer_prior) << "\n"
        << "cancer | ashtray   " << classical::format(r.crossover) << "   (joint state)\n"
        << "cancer | ashtray   " << classical::format(r.via_channel) << "   (through channels)\n";
  }
  const double dev = (r.crossover.probs() - r.via_channel.probs()).cwiseAbs().maxCoeff();
  if (dev > 1e-12) {
    std::cerr << "qbayes: crossover and channel inference disagree by " << dev << "\n";
    return 1;
  }
  return 0;
}

inline int report_exit(const std::vector<verify::TrialReport>& reports, bool as_json, std::ostream& out) {
  bool ok = true;
  if (as_json) {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(r.to_json());
    out << (arr.size() == 1 ? arr.front() : arr).dump(2) << "\n";
  } else {
    for (const auto& r : reports) out << verify::format(r);
  }
  for (const auto& r : reports) {
    if (r.pass()) continue;
    ok = false;
    for (const auto& e : r.equations)
      if (!e.pass) std::cerr << "qbayes: " << r.suite << ": equation '" << e.name << "' failed\n";
    for (const auto& w : r.witnesses)
      if (!w.found) std::cerr << "qbayes: " << r.suite << ": no witness for '" << w.name << "'\n";
  }
  return ok ? 0 : 1;
}

inline int cmd_inspect(const std::string& path, bool as_json, std::ostream& out) {
  const json j = read_json_file(path);
  const std::string kind = io::detect_kind(j);
  json info{{"file", path}, {"kind", kind}};
  std::ostringstream text;
  if (kind == "qchannel") {
    const auto c = io::channel_from_json(j);
    info["in_dims"] = c.in_dims();
    info["out_dims"] = c.out_dims();
    info["unital"] = c.unital();
    text << "quantum channel " << to_string(c.in_dims()) << " -> " << to_string(c.out_dims())
         << (c.unital() ? ", unital" : ", subunital") << "\n";
  } else if (kind == "stoch_channel") {
    const auto c = io::stoch_from_json(j);
    info["dom"] = c.dom().size();
    info["cod"] = c.cod().size();
    text << "stochastic channel " << c.dom().size() << " -> " << c.cod().size() << " outcomes\n";
  } else if (kind == "dist") {
    const auto d = io::dist_from_json(j);
    info["size"] = d.size();
    text << "distribution " << classical::format(d) << "\n";
  } else if (kind == "fuzzy_pred") {
    const auto p = io::pred_from_json(j);
    info["size"] = p.space().size();
    text << "fuzzy predicate on " << p.space().size() << " outcomes\n";
  } else if (kind == "operator" || kind == "matrix") {
    const CMatrix a = io::matrix_from_json(j);
    const bool state = a.rows() == a.cols() && quantum::state_defect(a).empty();
    const bool effect = a.rows() == a.cols() && quantum::effect_defect(a).empty();
    if (!state && !effect)
      throw ValidationError("operator is neither a state nor an effect: " +
                            (a.rows() == a.cols() ? quantum::state_defect(a) : std::string("not square")));
    if (state) io::state_from_json(j);
    if (effect) io::effect_from_json(j);
    info["rows"] = a.rows();
    info["state"] = state;
    info["effect"] = effect;
    text << a.rows() << "x" << a.cols() << " operator" << (state ? ", valid state" : "")
         << (effect ? ", valid effect" : "") << "\n";
  } else if (kind == "report") {
    const bool pass = j.value("pass", false);
    info["pass"] = pass;
    text << "verification report for suite " << j.value("suite", "?") << ": " << (pass ? "PASS" : "FAIL") << "\n";
  } else {
    throw ValidationError("unrecognised JSON object");
  }
  if (as_json)
    out << info.dump(2) << "\n";
  else
    out << text.str();
  return 0;
}

}  // namespace detail

/// Runs the command line on `args` (args[0] is the program name). Normal
/// output goes to `out`, diagnostics to stderr.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout) {
  CLI::App app{"Classical and quantum Bayesian inference toolkit", "qbayes"};
  app.require_subcommand(1);

  bool as_json = false;
  app.add_flag("--json", as_json, "Emit JSON instead of text");

  auto* demo = app.add_subcommand("demo-smoking", "Run the smoking / ashtray / cancer example");

  std::string suite = "all";
  std::size_t trials = 100;
  std::uint64_t seed = 2024;
  std::string dims_text = "3,5";
  std::optional<double> tol;
  std::size_t threads = 0;
  auto* ver = app.add_subcommand("verify", "Check the conditioning laws on random inputs");
  ver->add_option("--suite", suite, "Suite name or 'all'");
  ver->add_option("--trials", trials, "Trials per suite")->check(CLI::PositiveNumber);
  ver->add_option("--seed", seed, "Base seed");
  ver->add_option("--dims", dims_text, "Quantum dimensions n,m");
  ver->add_option("--tol", tol, "Override every equation tolerance")->check(CLI::PositiveNumber);
  ver->add_option("--threads", threads, "Worker threads (0: all cores)");

  std::size_t wtrials = 200;
  std::uint64_t wseed = 2024;
  std::string wdims = "2,3";
  auto* wit = app.add_subcommand("witness", "Search for non-commutation and non-reduction witnesses");
  wit->add_option("--trials", wtrials, "Random candidates")->check(CLI::PositiveNumber);
  wit->add_option("--seed", wseed, "Base seed");
  wit->add_option("--dims", wdims, "Dimensions searched, a,b");

  std::string file;
  auto* insp = app.add_subcommand("inspect", "Validate and describe a JSON object");
  insp->add_option("--file", file, "JSON file")->required();

  for (auto* sub : {demo, ver, wit, insp}) sub->add_flag("--json", as_json, "Emit JSON instead of text");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "qbayes: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*demo) return detail::cmd_demo(as_json, out);

    if (*ver) {
      std::pair<std::size_t, std::size_t> dims;
      try {
        dims = detail::parse_dims(dims_text);
      } catch (const CLI::ParseError& e) {
        std::cerr << "qbayes: " << e.what() << "\n";
        return 2;
      }
      std::vector<verify::Suite> suites;
      if (suite == "all") {
        suites = verify::all_suites();
      } else if (auto s = verify::parse_suite(suite)) {
        suites.push_back(*s);
      } else {
        std::cerr << "qbayes: unknown suite '" << suite << "'\n";
        return 2;
      }
      verify::SuiteConfig cfg;
      cfg.trials = trials;
      cfg.seed = seed;
      cfg.dims = dims;
      cfg.tol = tol;
      cfg.threads = threads;
      std::vector<verify::TrialReport> reports;
      for (auto s : suites) reports.push_back(verify::run_suite(s, cfg));
      return detail::report_exit(reports, as_json, out);
    }

    if (*wit) {
      std::pair<std::size_t, std::size_t> dims;
      try {
        dims = detail::parse_dims(wdims);
      } catch (const CLI::ParseError& e) {
        std::cerr << "qbayes: " << e.what() << "\n";
        return 2;
      }
      return detail::report_exit({verify::run_suite(verify::Suite::kWitnesses, wtrials, wseed, dims)},
                                 as_json, out);
    }

    if (*insp) return detail::cmd_inspect(file, as_json, out);
  } catch (const Error& e) {
    std::cerr << "qbayes: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace qbayes::cli
