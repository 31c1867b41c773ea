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

// JSON forms of every object kind.
//
//   CMatrix      {"rows": R, "cols": C, "re": [[...]], "im": [[...]]}
//   QState       CMatrix form plus "dims": [...]   (Effect likewise)
//   QChannel     {"in_dims": [...], "out_dims": [...],
//                 "blocks": [[CMatrix, ...], ...], "unital": bool}
//   Dist         {"labels": [["t","t"], ...], "probs": [...]}
//   FuzzyPred    {"labels": [...], "values": [...]}
//   StochChannel {"dom": [...], "cod": [...], "rows": [[...], ...]}
//
// Label lists hold one entry per outcome; an entry is either a string or a
// tuple of strings for product spaces.

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"

#include "qbayes/classical.hpp"
#include "qbayes/error.hpp"
#include "qbayes/matrix.hpp"
#include "qbayes/quantum.hpp"

namespace qbayes::io {

using nlohmann::json;

inline json to_json(const CMatrix& a) {
  json re = json::array(), im = json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    json rr = json::array(), ri = json::array();
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      rr.push_back(a(r, c).real());
      ri.push_back(a(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return {{"rows", a.rows()}, {"cols", a.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline CMatrix matrix_from_json(const json& j) {
  try {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const json& re = j.at("re");
    const json* im = j.contains("im") ? &j.at("im") : nullptr;
    if (static_cast<Eigen::Index>(re.size()) != rows || (im && static_cast<Eigen::Index>(im->size()) != rows))
      throw DimensionError("matrix JSON: row count mismatch");
    CMatrix a(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const json& rr = re.at(static_cast<std::size_t>(r));
      if (static_cast<Eigen::Index>(rr.size()) != cols) throw DimensionError("matrix JSON: column count mismatch");
      for (Eigen::Index c = 0; c < cols; ++c) {
        const double imag = im ? im->at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>() : 0.0;
        a(r, c) = Complex(rr.at(static_cast<std::size_t>(c)).get<double>(), imag);
      }
    }
    require_finite(a);
    return a;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("matrix JSON: ") + e.what());
  }
}

inline DimList dims_from_json(const json& j) {
  DimList d = j.get<DimList>();
  check_dims(d);
  return d;
}

// ---------------------------------------------------------------------------
// Quantum objects.

inline json to_json(const quantum::QState& s) {
  json j = to_json(s.mat());
  j["dims"] = s.dims();
  return j;
}

inline json to_json(const quantum::Effect& p) {
  json j = to_json(p.mat());
  j["dims"] = p.dims();
  return j;
}

inline DimList dims_or_flat(const json& j, const CMatrix& m) {
  return j.contains("dims") ? dims_from_json(j.at("dims")) : DimList{static_cast<std::size_t>(m.rows())};
}

inline quantum::QState state_from_json(const json& j) {
  CMatrix m = matrix_from_json(j);
  return quantum::QState(m, dims_or_flat(j, m));
}

inline quantum::Effect effect_from_json(const json& j) {
  CMatrix m = matrix_from_json(j);
  return quantum::Effect(m, dims_or_flat(j, m));
}

inline json to_json(const quantum::QChannel& c) {
  json blocks = json::array();
  for (std::size_t k = 0; k < c.out_dim(); ++k) {
    json row = json::array();
    for (std::size_t l = 0; l < c.out_dim(); ++l) row.push_back(to_json(c.block(k, l)));
    blocks.push_back(std::move(row));
  }
  return {{"in_dims", c.in_dims()}, {"out_dims", c.out_dims()}, {"blocks", std::move(blocks)},
          {"unital", c.unital()}};
}

inline quantum::QChannel channel_from_json(const json& j) {
  try {
    DimList in = dims_from_json(j.at("in_dims"));
    DimList out = dims_from_json(j.at("out_dims"));
    std::vector<CMatrix> blocks;
    for (const auto& row : j.at("blocks"))
      for (const auto& b : row) blocks.push_back(matrix_from_json(b));
    quantum::QChannel c(std::move(in), std::move(out), std::move(blocks));
    if (j.contains("unital") && j.at("unital").get<bool>() != c.unital())
      throw ValidationError("channel JSON: 'unital' flag disagrees with the blocks");
    return c;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("channel JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Classical objects.

inline json labels_to_json(const classical::Space& sp, bool tuples) {
  json out = json::array();
  for (std::size_t i = 0; i < sp.size(); ++i) {
    auto t = sp.label_tuple(i);
    if (tuples || t.size() > 1)
      out.push_back(t);
    else
      out.push_back(t.front());
  }
  return out;
}

/// Rebuilds the product structure from a row-major list of label tuples.
inline classical::Space space_from_json(const json& labels) {
  if (!labels.is_array() || labels.empty()) throw ValidationError("label list must be a non-empty array");
  std::vector<std::vector<std::string>> tuples;
  for (const auto& l : labels) {
    if (l.is_string())
      tuples.push_back({l.get<std::string>()});
    else
      tuples.push_back(l.get<std::vector<std::string>>());
  }
  const std::size_t arity = tuples.front().size();
  if (arity == 0) throw ValidationError("empty label tuple");
  std::vector<std::vector<std::string>> comps(arity);
  for (const auto& t : tuples) {
    if (t.size() != arity) throw ValidationError("label tuples of different arity");
    for (std::size_t c = 0; c < arity; ++c)
      if (std::find(comps[c].begin(), comps[c].end(), t[c]) == comps[c].end()) comps[c].push_back(t[c]);
  }
  std::vector<classical::FinSet> sets;
  for (auto& c : comps) sets.emplace_back(std::move(c));
  classical::Space sp(std::move(sets));
  if (sp.size() != tuples.size()) throw ValidationError("labels do not form a full product space");
  for (std::size_t i = 0; i < tuples.size(); ++i)
    if (sp.label_tuple(i) != tuples[i]) throw ValidationError("labels are not in row-major product order");
  return sp;
}

inline RVector vector_from_json(const json& j) {
  auto v = j.get<std::vector<double>>();
  return Eigen::Map<RVector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline json to_json(const classical::Dist& d) {
  return {{"labels", labels_to_json(d.space(), true)},
          {"probs", std::vector<double>(d.probs().data(), d.probs().data() + d.probs().size())}};
}

inline classical::Dist dist_from_json(const json& j) {
  try {
    return classical::Dist(space_from_json(j.at("labels")), vector_from_json(j.at("probs")));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("Dist JSON: ") + e.what());
  }
}

inline json to_json(const classical::FuzzyPred& p) {
  return {{"labels", labels_to_json(p.space(), true)},
          {"values", std::vector<double>(p.values().data(), p.values().data() + p.values().size())}};
}

inline classical::FuzzyPred pred_from_json(const json& j) {
  try {
    return classical::FuzzyPred(space_from_json(j.at("labels")), vector_from_json(j.at("values")));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("FuzzyPred JSON: ") + e.what());
  }
}

inline json to_json(const classical::StochChannel& c) {
  json rows = json::array();
  for (Eigen::Index x = 0; x < c.rows().rows(); ++x) {
    json r = json::array();
    for (Eigen::Index y = 0; y < c.rows().cols(); ++y) r.push_back(c.rows()(x, y));
    rows.push_back(std::move(r));
  }
  return {{"dom", labels_to_json(c.dom(), false)}, {"cod", labels_to_json(c.cod(), false)},
          {"rows", std::move(rows)}};
}

inline classical::StochChannel stoch_from_json(const json& j) {
  try {
    auto dom = space_from_json(j.at("dom"));
    auto cod = space_from_json(j.at("cod"));
    const json& rows = j.at("rows");
    if (rows.size() != dom.size()) throw DimensionError("StochChannel JSON: row count mismatch");
    classical::RMatrix m(static_cast<Eigen::Index>(dom.size()), static_cast<Eigen::Index>(cod.size()));
    for (std::size_t x = 0; x < dom.size(); ++x) {
      RVector r = vector_from_json(rows.at(x));
      if (static_cast<std::size_t>(r.size()) != cod.size())
        throw DimensionError("StochChannel JSON: row length mismatch");
      m.row(static_cast<Eigen::Index>(x)) = r.transpose();
    }
    return classical::StochChannel(std::move(dom), std::move(cod), std::move(m));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("StochChannel JSON: ") + e.what());
  }
}

/// Best guess at which object a JSON document holds.
inline std::string detect_kind(const json& j) {
  if (!j.is_object()) return "unknown";
  if (j.contains("suite") && j.contains("equations")) return "report";
  if (j.contains("blocks")) return "qchannel";
  if (j.contains("dom") && j.contains("rows")) return "stoch_channel";
  if (j.contains("probs")) return "dist";
  if (j.contains("values") && j.contains("labels")) return "fuzzy_pred";
  if (j.contains("re") && j.contains("dims")) return "operator";
  if (j.contains("re")) return "matrix";
  return "unknown";
}

}  // namespace qbayes::io
