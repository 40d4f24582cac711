/*
 * Copyright 2026 The Sailcover Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "sailcover/experiment_config.h"

#include <boost/algorithm/string.hpp>
#include <boost/lexical_cast.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace sailcover {
namespace {

namespace pt = boost::property_tree;

// Pulls typed values out of the parsed tree and remembers which keys were
// read so that leftovers can be reported.
class Reader {
 public:
  explicit Reader(const pt::ptree& root) : root_(root) {}

  template <typename T>
  void Get(const std::string& section, const std::string& key, T& out) {
    const std::string path = section + "." + key;
    known_.insert(path);
    const auto sec = root_.get_child_optional(section);
    if (!sec) return;
    const auto value = sec->get_optional<std::string>(key);
    if (!value) return;
    std::string text = boost::trim_copy(*value);
    try {
      if constexpr (std::is_same_v<T, std::string>) {
        out = text;
      } else {
        out = boost::lexical_cast<T>(text);
      }
    } catch (const boost::bad_lexical_cast&) {
      throw ConfigError(path, "cannot parse '" + text + "'");
    }
  }

  void RejectUnknown() const {
    for (const auto& [section, body] : root_) {
      if (body.empty() && !body.data().empty()) {
        throw ConfigError(section, "key outside of any section");
      }
      for (const auto& [key, value] : body) {
        const std::string path = section + "." + key;
        if (!known_.count(path)) throw ConfigError(path, "unknown key");
      }
    }
  }

 private:
  const pt::ptree& root_;
  std::set<std::string> known_;
};

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(","));
  std::vector<std::string> out;
  for (auto& p : parts) {
    boost::trim(p);
    if (!p.empty()) out.push_back(p);
  }
  return out;
}

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

uint64_t Fnv1a(const std::string& text, uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

Method Method::Parse(const std::string& name, int config_horizon) {
  if (name == "base") return Method{true, 0};
  const std::string prefix = "mcts_k";
  if (name.rfind(prefix, 0) == 0 && name.size() > prefix.size()) {
    const std::string rest = name.substr(prefix.size());
    if (rest == "N") return Method{false, config_horizon};
    if (rest.find_first_not_of("0123456789") == std::string::npos &&
        rest.size() < 4) {
      return Method{false, std::stoi(rest)};
    }
  }
  throw ConfigError("run.methods", "unknown method '" + name + "'");
}

std::string Method::Name() const {
  return baseline ? "base" : "mcts_k" + std::to_string(horizon);
}

std::vector<uint64_t> ParseSeedList(const std::string& text) {
  std::vector<uint64_t> seeds;
  const auto dots = text.find("..");
  try {
    if (dots != std::string::npos) {
      const auto lo = boost::lexical_cast<uint64_t>(
          boost::trim_copy(text.substr(0, dots)));
      const auto hi = boost::lexical_cast<uint64_t>(
          boost::trim_copy(text.substr(dots + 2)));
      if (hi < lo) throw ConfigError("run.seeds", "empty range " + text);
      for (uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    } else {
      for (const auto& part : SplitList(text)) {
        seeds.push_back(boost::lexical_cast<uint64_t>(part));
      }
    }
  } catch (const boost::bad_lexical_cast&) {
    throw ConfigError("run.seeds", "cannot parse '" + text + "'");
  }
  if (seeds.empty()) throw ConfigError("run.seeds", "no seeds");
  return seeds;
}

ExperimentConfig ExperimentConfig::FromString(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("line " + std::to_string(e.line()), e.message());
  }

  ExperimentConfig c;
  Reader r(tree);

  r.Get("grid", "rows", c.grid.rows);
  r.Get("grid", "cols", c.grid.cols);
  r.Get("grid", "cell_size", c.grid.cell_size);
  r.Get("grid", "pixel_size", c.grid.pixel_size);
  r.Get("grid", "d_obs", c.grid.d_obs);
  r.Get("grid", "start_i", c.start.i);
  r.Get("grid", "start_j", c.start.j);

  std::string field = "random";
  r.Get("physics", "field", field);
  if (field == "random") {
    c.field_kind = FieldModel::Kind::kRandom;
  } else if (field == "uniform") {
    c.field_kind = FieldModel::Kind::kUniform;
  } else {
    throw ConfigError("physics.field", "expected random or uniform");
  }
  r.Get("physics", "v_min", c.bounds.v_min);
  r.Get("physics", "v_max", c.bounds.v_max);
  r.Get("physics", "dir_min", c.bounds.dir_min);
  r.Get("physics", "dir_max", c.bounds.dir_max);
  r.Get("physics", "wind_speed", c.uniform_wind.speed);
  r.Get("physics", "wind_dir", c.uniform_wind.direction);
  r.Get("physics", "current_speed", c.uniform_current.speed);
  r.Get("physics", "current_dir", c.uniform_current.direction);
  r.Get("physics", "v_floor", c.planner.v_floor);
  r.Get("physics", "no_go_angle", c.no_go_angle);
  r.Get("physics", "polar", c.polar_path);

  r.Get("planner", "iterations", c.planner.iterations);
  r.Get("planner", "workers", c.planner.rollout_workers);
  r.Get("planner", "rollouts_per_worker", c.planner.rollouts_per_worker);
  r.Get("planner", "ucb_c", c.planner.ucb_c);
  r.Get("planner", "horizon", c.planner.horizon);
  r.Get("planner", "delta_t", c.planner.delta_t);
  r.Get("planner", "eta", c.planner.eta);
  r.Get("planner", "a_thres", c.planner.a_thres);
  r.Get("planner", "threads", c.planner.threads);
  r.Get("planner", "alpha", c.planner.score.alpha);
  r.Get("planner", "beta", c.planner.score.beta);
  r.Get("planner", "epsilon", c.planner.score.epsilon);
  r.Get("planner", "p_min", c.planner.score.p_min);
  r.Get("planner", "p_max", c.planner.score.p_max);

  r.Get("forecast", "eps_v", c.forecast.eps_speed);
  r.Get("forecast", "eps_theta", c.forecast.eps_dir_deg);

  std::string seeds, methods;
  r.Get("run", "seeds", seeds);
  r.Get("run", "methods", methods);
  r.Get("run", "out", c.out_dir);
  r.Get("run", "max_stages", c.max_stages);
  r.Get("run", "baseline_wait_limit", c.baseline_wait_limit);
  if (!seeds.empty()) c.seeds = ParseSeedList(seeds);
  if (!methods.empty()) c.methods = SplitList(methods);

  r.RejectUnknown();
  c.Validate();
  return c;
}

ExperimentConfig ExperimentConfig::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return FromString(buf.str());
}

void ExperimentConfig::Validate() const {
  auto wrap = [](const std::string& key, auto&& fn) {
    try {
      fn();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(key, e.what());
    }
  };
  wrap("grid", [&] { grid.Validate(); });
  if (!grid.Contains(start)) throw ConfigError("grid.start_i", "off the map");
  if (!(bounds.v_min > 0.0 && bounds.v_min < bounds.v_max)) {
    throw ConfigError("physics.v_min", "need 0 < v_min < v_max");
  }
  if (!(bounds.dir_min < bounds.dir_max)) {
    throw ConfigError("physics.dir_min", "need dir_min < dir_max");
  }
  if (uniform_wind.speed < 0.0 || uniform_current.speed < 0.0) {
    throw ConfigError("physics.wind_speed", "speeds must be non-negative");
  }
  if (!(no_go_angle > 0.0 && no_go_angle < 180.0)) {
    throw ConfigError("physics.no_go_angle", "must lie in (0, 180)");
  }
  wrap("planner", [&] { planner.Validate(); });
  if (forecast.eps_speed < 0.0 || forecast.eps_dir_deg < 0.0) {
    throw ConfigError("forecast.eps_v", "noise bounds must be non-negative");
  }
  if (seeds.empty()) throw ConfigError("run.seeds", "no seeds");
  if (methods.empty()) throw ConfigError("run.methods", "no methods");
  for (const auto& m : methods) Method::Parse(m, planner.horizon);
  if (max_stages < 1) throw ConfigError("run.max_stages", "must be >= 1");
  if (baseline_wait_limit < 1) {
    throw ConfigError("run.baseline_wait_limit", "must be >= 1");
  }
}

PolarTable ExperimentConfig::LoadPolar() const {
  if (polar_path.empty()) {
    PolarTable def = PolarTable::Default();
    return PolarTable(def.twa(), def.tws(), def.speeds(), no_go_angle);
  }
  try {
    return PolarTable::FromCsvFile(polar_path, no_go_angle);
  } catch (const std::exception& e) {
    throw ConfigError("physics.polar", e.what());
  }
}

FieldModel ExperimentConfig::MakeFieldModel(uint64_t seed) const {
  FieldModel m;
  m.kind = field_kind;
  m.seed = seed;
  m.bounds = bounds;
  m.uniform_wind = uniform_wind;
  m.uniform_current = uniform_current;
  return m;
}

std::string ExperimentConfig::Canonical() const {
  // Ordered so that the text, and therefore the digest, is stable. Thread
  // counts, seeds, methods and output paths do not change any result and
  // are left out.
  std::map<std::string, std::string> kv;
  auto put = [&](const std::string& k, double v) { kv[k] = FormatDouble(v); };
  put("grid.rows", grid.rows);
  put("grid.cols", grid.cols);
  put("grid.cell_size", grid.cell_size);
  put("grid.pixel_size", grid.pixel_size);
  put("grid.d_obs", grid.d_obs);
  put("grid.start_i", start.i);
  put("grid.start_j", start.j);
  kv["physics.field"] =
      field_kind == FieldModel::Kind::kRandom ? "random" : "uniform";
  put("physics.v_min", bounds.v_min);
  put("physics.v_max", bounds.v_max);
  put("physics.dir_min", bounds.dir_min);
  put("physics.dir_max", bounds.dir_max);
  put("physics.wind_speed", uniform_wind.speed);
  put("physics.wind_dir", uniform_wind.direction);
  put("physics.current_speed", uniform_current.speed);
  put("physics.current_dir", uniform_current.direction);
  put("physics.v_floor", planner.v_floor);
  put("physics.no_go_angle", no_go_angle);
  put("planner.iterations", planner.iterations);
  put("planner.workers", planner.rollout_workers);
  put("planner.rollouts_per_worker", planner.rollouts_per_worker);
  put("planner.ucb_c", planner.ucb_c);
  put("planner.horizon", planner.horizon);
  put("planner.delta_t", planner.delta_t);
  put("planner.eta", planner.eta);
  put("planner.a_thres", planner.a_thres);
  put("planner.alpha", planner.score.alpha);
  put("planner.beta", planner.score.beta);
  put("planner.epsilon", planner.score.epsilon);
  put("planner.p_min", planner.score.p_min);
  put("planner.p_max", planner.score.p_max);
  put("forecast.eps_v", forecast.eps_speed);
  put("forecast.eps_theta", forecast.eps_dir_deg);
  put("run.max_stages", max_stages);
  put("run.baseline_wait_limit", baseline_wait_limit);
  std::ostringstream out;
  for (const auto& [k, v] : kv) out << k << '=' << v << '\n';
  return out.str();
}

std::string ExperimentConfig::Digest() const {
  uint64_t h = Fnv1a(Canonical());
  const PolarTable polar = LoadPolar();
  std::ostringstream table;
  for (double a : polar.twa()) table << FormatDouble(a) << ',';
  table << ';';
  for (double s : polar.tws()) table << FormatDouble(s) << ',';
  table << ';';
  for (const auto& row : polar.speeds()) {
    for (double v : row) table << FormatDouble(v) << ',';
  }
  h = Fnv1a(table.str(), h);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sailcover
