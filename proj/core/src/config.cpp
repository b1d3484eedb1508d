#include "glab/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "glab/errors.hpp"

namespace glab {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw SchemaError("config: " + path + ": " + what);
}

void expect_keys(const json& j, const std::string& path,
                 const std::set<std::string>& allowed) {
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) fail(path + "." + k, "unknown field");
}

const json& require(const json& j, const std::string& key,
                    const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing required field");
  return *it;
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

long long as_long(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long long>();
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

std::vector<int> as_int_array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  std::vector<int> out;
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(as_int(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

void parse_model(const json& j, ExperimentConfig& cfg) {
  if (!j.is_object()) fail("$.model", "expected an object");
  expect_keys(j, "$.model", {"period", "alphabets", "matrices"});
  cfg.period = as_int(require(j, "period", "$.model"), "$.model.period");
  if (cfg.period < 1) fail("$.model.period", "must be >= 1");
  cfg.alphabets =
      as_int_array(require(j, "alphabets", "$.model"), "$.model.alphabets");
  if (static_cast<int>(cfg.alphabets.size()) != cfg.period)
    fail("$.model.alphabets", "needs exactly one entry per environment state");
  for (size_t s = 0; s < cfg.alphabets.size(); ++s)
    if (cfg.alphabets[s] < 2)
      fail("$.model.alphabets[" + std::to_string(s) + "]", "must be >= 2");

  auto it = j.find("matrices");
  if (it == j.end() || (it->is_string() && it->get<std::string>() == "full")) {
    cfg.full_shift = true;
    return;
  }
  if (!it->is_array()) fail("$.model.matrices", "expected \"full\" or an array");
  cfg.full_shift = false;
  const json& ms = *it;
  if (static_cast<int>(ms.size()) != cfg.period)
    fail("$.model.matrices", "needs exactly one matrix per environment state");
  cfg.matrices.resize(cfg.period);
  for (int s = 0; s < cfg.period; ++s) {
    std::string mp = "$.model.matrices[" + std::to_string(s) + "]";
    if (!ms[s].is_array()) fail(mp, "expected an array of rows");
    int rows = cfg.alphabets[s];
    int cols = cfg.alphabets[(s + 1) % cfg.period];
    if (static_cast<int>(ms[s].size()) != rows)
      fail(mp, "needs " + std::to_string(rows) + " rows");
    cfg.matrices[s].resize(rows);
    for (int r = 0; r < rows; ++r) {
      std::string rp = mp + "[" + std::to_string(r) + "]";
      auto row = as_int_array(ms[s][r], rp);
      if (static_cast<int>(row.size()) != cols)
        fail(rp, "needs " + std::to_string(cols) + " columns");
      for (int v : row)
        if (v != 0 && v != 1) fail(rp, "entries must be 0 or 1");
      cfg.matrices[s][r] = std::move(row);
    }
  }
}

void parse_potential(const json& j, ExperimentConfig& cfg) {
  if (!j.is_object()) fail("$.potential", "expected an object");
  expect_keys(j, "$.potential", {"range", "entries"});
  cfg.potential.range =
      as_int(require(j, "range", "$.potential"), "$.potential.range");
  if (cfg.potential.range < 0) fail("$.potential.range", "must be >= 0");
  const json& es = require(j, "entries", "$.potential");
  if (!es.is_array()) fail("$.potential.entries", "expected an array");
  for (size_t i = 0; i < es.size(); ++i) {
    std::string ep = "$.potential.entries[" + std::to_string(i) + "]";
    if (!es[i].is_object()) fail(ep, "expected an object");
    expect_keys(es[i], ep, {"state", "word", "value"});
    PotentialEntrySpec e;
    e.state = as_int(require(es[i], "state", ep), ep + ".state");
    e.word = as_int_array(require(es[i], "word", ep), ep + ".word");
    e.value = as_number(require(es[i], "value", ep), ep + ".value");
    cfg.potential.entries.push_back(std::move(e));
  }
}

void parse_group(const json& j, ExperimentConfig& cfg) {
  if (!j.is_object()) fail("$.group", "expected an object");
  expect_keys(j, "$.group", {"type", "params"});
  cfg.group.type = as_string(require(j, "type", "$.group"), "$.group.type");
  if (cfg.group.type != "trivial" && cfg.group.type != "lattice" &&
      cfg.group.type != "free" && cfg.group.type != "cyclic")
    fail("$.group.type", "must be one of trivial, lattice, free, cyclic");
  auto it = j.find("params");
  if (it == j.end()) return;
  if (!it->is_object()) fail("$.group.params", "expected an object");
  expect_keys(*it, "$.group.params", {"d", "k", "q"});
  if (it->contains("d")) cfg.group.d = as_int((*it)["d"], "$.group.params.d");
  if (it->contains("k")) cfg.group.k = as_int((*it)["k"], "$.group.params.k");
  if (it->contains("q")) cfg.group.q = as_int((*it)["q"], "$.group.params.q");
}

void parse_labeling(const json& j, ExperimentConfig& cfg) {
  if (!j.is_array()) fail("$.labeling", "expected an array");
  for (size_t i = 0; i < j.size(); ++i) {
    std::string lp = "$.labeling[" + std::to_string(i) + "]";
    if (!j[i].is_object()) fail(lp, "expected an object");
    expect_keys(j[i], lp, {"state", "symbol", "element"});
    LabelSpec l;
    l.state = as_int(require(j[i], "state", lp), lp + ".state");
    l.symbol = as_int(require(j[i], "symbol", lp), lp + ".symbol");
    l.element = as_string(require(j[i], "element", lp), lp + ".element");
    cfg.labeling.push_back(std::move(l));
  }
}

void parse_experiment(const json& j, ExperimentConfig& cfg) {
  if (!j.is_object()) fail("$.experiment", "expected an object");
  expect_keys(j, "$.experiment",
              {"name", "n_max", "truncation", "window", "correction",
               "correction_ab", "seed", "base_symbol", "end_symbol", "target",
               "cert_horizon", "state_budget", "truncations", "steps",
               "folner_radius", "test_set", "xi0", "grad_tol", "fd_step",
               "max_iters", "divergence_radius", "gibbs_max_len"});
  ExperimentParams& p = cfg.params;
  p.name = as_string(require(j, "name", "$.experiment"), "$.experiment.name");
  const std::set<std::string> names = {"entropy",      "gap",
                                       "kesten",       "folner",
                                       "variational",  "gibbs-check",
                                       "operator-radius"};
  if (!names.count(p.name))
    fail("$.experiment.name", "unknown experiment '" + p.name + "'");

  if (j.contains("n_max")) p.n_max = as_int(j["n_max"], "$.experiment.n_max");
  if (p.n_max < 1) fail("$.experiment.n_max", "must be >= 1");
  if (j.contains("truncation"))
    p.truncation = as_int(j["truncation"], "$.experiment.truncation");
  if (j.contains("window")) {
    auto w = as_int_array(j["window"], "$.experiment.window");
    bool open = w.size() == 2 && w[0] == 0 && w[1] == 0;  // canonical "no window"
    if (!open && (w.size() != 2 || w[0] < 1 || w[1] < w[0]))
      fail("$.experiment.window", "expected [lo, hi] with 1 <= lo <= hi");
    p.window_lo = w[0];
    p.window_hi = w[1];
  }
  if (j.contains("correction"))
    p.correction = as_number(j["correction"], "$.experiment.correction");
  if (j.contains("correction_ab"))
    p.correction_ab = as_number(j["correction_ab"], "$.experiment.correction_ab");
  if (j.contains("seed")) p.seed = as_long(j["seed"], "$.experiment.seed");
  if (j.contains("base_symbol"))
    p.base_symbol = as_int(j["base_symbol"], "$.experiment.base_symbol");
  if (j.contains("end_symbol"))
    p.end_symbol = as_int(j["end_symbol"], "$.experiment.end_symbol");
  if (j.contains("target"))
    p.target = as_string(j["target"], "$.experiment.target");
  if (j.contains("cert_horizon"))
    p.cert_horizon = as_int(j["cert_horizon"], "$.experiment.cert_horizon");
  if (j.contains("state_budget")) {
    long long b = as_long(j["state_budget"], "$.experiment.state_budget");
    if (b < 1) fail("$.experiment.state_budget", "must be >= 1");
    p.state_budget = static_cast<size_t>(b);
  }
  if (j.contains("truncations"))
    p.truncation_ladder =
        as_int_array(j["truncations"], "$.experiment.truncations");
  if (j.contains("steps")) {
    const json& st = j["steps"];
    if (!st.is_object()) fail("$.experiment.steps", "expected an object");
    for (const auto& [k, v] : st.items())
      p.steps.emplace_back(k, as_number(v, "$.experiment.steps." + k));
  }
  if (j.contains("folner_radius"))
    p.folner_radius = as_int(j["folner_radius"], "$.experiment.folner_radius");
  if (j.contains("test_set")) {
    const json& ts = j["test_set"];
    if (!ts.is_array()) fail("$.experiment.test_set", "expected an array");
    for (size_t i = 0; i < ts.size(); ++i)
      p.test_set.push_back(
          as_string(ts[i], "$.experiment.test_set[" + std::to_string(i) + "]"));
  }
  if (j.contains("xi0")) {
    const json& x = j["xi0"];
    if (!x.is_array()) fail("$.experiment.xi0", "expected an array");
    for (size_t i = 0; i < x.size(); ++i)
      p.xi0.push_back(
          as_number(x[i], "$.experiment.xi0[" + std::to_string(i) + "]"));
  }
  if (j.contains("grad_tol"))
    p.grad_tol = as_number(j["grad_tol"], "$.experiment.grad_tol");
  if (j.contains("fd_step"))
    p.fd_step = as_number(j["fd_step"], "$.experiment.fd_step");
  if (j.contains("max_iters"))
    p.max_iters = as_int(j["max_iters"], "$.experiment.max_iters");
  if (j.contains("divergence_radius"))
    p.divergence_radius =
        as_number(j["divergence_radius"], "$.experiment.divergence_radius");
  if (j.contains("gibbs_max_len"))
    p.gibbs_max_len = as_int(j["gibbs_max_len"], "$.experiment.gibbs_max_len");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw SchemaError(std::string("config: not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail("$", "expected a JSON object");
  expect_keys(j, "$", {"model", "potential", "group", "labeling", "experiment"});

  ExperimentConfig cfg;
  parse_model(require(j, "model", "$"), cfg);
  if (j.contains("potential")) parse_potential(j["potential"], cfg);
  if (j.contains("group")) parse_group(j["group"], cfg);
  if (j.contains("labeling")) parse_labeling(j["labeling"], cfg);
  parse_experiment(require(j, "experiment", "$"), cfg);
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("config: cannot read file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string canonical_config_text(const ExperimentConfig& cfg) {
  json j;
  j["model"]["period"] = cfg.period;
  j["model"]["alphabets"] = cfg.alphabets;
  if (cfg.full_shift)
    j["model"]["matrices"] = "full";
  else
    j["model"]["matrices"] = cfg.matrices;

  j["potential"]["range"] = cfg.potential.range;
  j["potential"]["entries"] = json::array();
  for (const auto& e : cfg.potential.entries)
    j["potential"]["entries"].push_back(
        {{"state", e.state}, {"word", e.word}, {"value", e.value}});

  j["group"]["type"] = cfg.group.type;
  j["group"]["params"] = {{"d", cfg.group.d}, {"k", cfg.group.k}, {"q", cfg.group.q}};

  j["labeling"] = json::array();
  for (const auto& l : cfg.labeling)
    j["labeling"].push_back(
        {{"state", l.state}, {"symbol", l.symbol}, {"element", l.element}});

  const ExperimentParams& p = cfg.params;
  json e;
  e["name"] = p.name;
  e["n_max"] = p.n_max;
  e["truncation"] = p.truncation;
  e["window"] = {p.window_lo, p.window_hi};
  e["correction"] = p.correction;
  e["correction_ab"] = p.correction_ab;
  e["seed"] = p.seed;
  e["base_symbol"] = p.base_symbol;
  e["end_symbol"] = p.end_symbol;
  e["target"] = p.target;
  e["cert_horizon"] = p.cert_horizon;
  e["state_budget"] = p.state_budget;
  e["truncations"] = p.truncation_ladder;
  e["steps"] = json::object();
  for (const auto& [k, v] : p.steps) e["steps"][k] = v;
  e["folner_radius"] = p.folner_radius;
  e["test_set"] = p.test_set;
  e["xi0"] = p.xi0;
  e["grad_tol"] = p.grad_tol;
  e["fd_step"] = p.fd_step;
  e["max_iters"] = p.max_iters;
  e["divergence_radius"] = p.divergence_radius;
  e["gibbs_max_len"] = p.gibbs_max_len;
  j["experiment"] = std::move(e);
  return j.dump(2) + "\n";
}

}  // namespace glab
