#include "glab/experiments.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "glab/csv.hpp"
#include "glab/errors.hpp"
#include "glab/extension.hpp"
#include "glab/extension_transfer.hpp"

namespace glab {

namespace {

using json = nlohmann::ordered_json;

DpOptions dp_options(const ExperimentParams& p) {
  DpOptions o;
  o.truncation = p.truncation < 0 ? INT_MAX : p.truncation;
  o.state_budget = p.state_budget;
  return o;
}

GurevichOptions fit_options(const ExperimentParams& p, bool abelian = false) {
  GurevichOptions o;
  o.window_lo = p.window_lo;
  o.window_hi = p.window_hi;
  o.correction =
      abelian && p.correction_ab >= 0 ? p.correction_ab : p.correction;
  return o;
}

int end_symbol(const ExperimentParams& p) {
  return p.end_symbol < 0 ? p.base_symbol : p.end_symbol;
}

void check_symbols(const RandomSFT& sft, const ExperimentParams& p) {
  for (int s = 0; s < sft.states(); ++s) {
    if (p.base_symbol < 0 || p.base_symbol >= sft.alphabet[s])
      throw SchemaError("config: $.experiment.base_symbol: symbol " +
                        std::to_string(p.base_symbol) +
                        " is not in the fiber at state " + std::to_string(s));
    int b = end_symbol(p);
    if (b < 0 || b >= sft.alphabet[s])
      throw SchemaError("config: $.experiment.end_symbol: symbol " +
                        std::to_string(b) +
                        " is not in the fiber at state " + std::to_string(s));
  }
}

void require_base_mixing(const RandomSFT& sft, const ExperimentParams& p) {
  int horizon = std::max({p.cert_horizon, p.n_max, 2 * sft.states() + 2});
  if (!check_topological_mixing(sft, horizon))
    throw MixingError(
        "base system is not verifiably topologically mixing within " +
        std::to_string(horizon) + " steps");
}

template <class G>
G make_group(int param) {
  try {
    return G(param);
  } catch (const std::exception& e) {
    throw SchemaError(std::string("config: $.group.params: ") + e.what());
  }
}

template <class Fn>
auto with_group(const GroupSpec& spec, Fn&& fn) {
  if (spec.type == "lattice") return fn(make_group<LatticeGroup>(spec.d));
  if (spec.type == "free") return fn(make_group<FreeGroup>(spec.k));
  if (spec.type == "cyclic") return fn(make_group<CyclicGroup>(spec.q));
  return fn(make_group<CyclicGroup>(1));
}

template <GroupLike G>
typename G::Element parse_element(const G& group, const std::string& text,
                                  const std::string& path) {
  try {
    return text.empty() ? group.identity() : group.parse(text);
  } catch (const std::exception& e) {
    throw SchemaError("config: " + path + ": " + e.what());
  }
}

// Identity labels when the config has no labeling block; otherwise the
// block must cover every (state, symbol) exactly once.
template <GroupLike G>
SkewLabeling<G> build_labeling(const ExperimentConfig& cfg,
                               const RandomSFT& sft, const G& group) {
  auto psi = trivial_labeling(sft, group);
  if (cfg.labeling.empty()) return psi;
  std::vector<std::vector<char>> seen(sft.states());
  for (int s = 0; s < sft.states(); ++s) seen[s].assign(sft.alphabet[s], 0);
  for (size_t i = 0; i < cfg.labeling.size(); ++i) {
    const LabelSpec& l = cfg.labeling[i];
    std::string path = "$.labeling[" + std::to_string(i) + "]";
    if (l.state < 0 || l.state >= sft.states())
      throw SchemaError("config: " + path + ".state: out of range");
    if (l.symbol < 0 || l.symbol >= sft.alphabet[l.state])
      throw SchemaError("config: " + path +
                        ".symbol: not in the fiber alphabet at state " +
                        std::to_string(l.state));
    if (seen[l.state][l.symbol])
      throw SchemaError("config: " + path + ": duplicate label for symbol " +
                        std::to_string(l.symbol) + " at state " +
                        std::to_string(l.state));
    seen[l.state][l.symbol] = 1;
    psi.label[l.state][l.symbol] =
        parse_element(group, l.element, path + ".element");
  }
  for (int s = 0; s < sft.states(); ++s)
    for (int x = 0; x < sft.alphabet[s]; ++x)
      if (!seen[s][x])
        throw SchemaError("config: $.labeling: missing label for symbol " +
                          std::to_string(x) + " at state " +
                          std::to_string(s));
  return psi;
}

// Unconstrained per-state series via the one-element group.
std::vector<ConstrainedSeries<CyclicGroup>> unconstrained_all_states(
    const RandomSFT& sft, const LocallyConstantPotential& phi,
    const ExperimentParams& p) {
  CyclicGroup triv(1);
  auto psi = trivial_labeling(sft, triv);
  std::vector<ConstrainedSeries<CyclicGroup>> out;
  for (int s = 0; s < sft.states(); ++s)
    out.push_back(constrained_series(sft, phi, psi, triv, s, p.base_symbol,
                                     end_symbol(p), triv.identity(), p.n_max,
                                     dp_options(p)));
  return out;
}

template <class Series>
GurevichEstimate fit_over_states(const Environment& env,
                                 const std::vector<Series>& ss,
                                 const GurevichOptions& opts) {
  std::vector<std::vector<int>> ns;
  std::vector<std::vector<double>> lz;
  for (const auto& s : ss) {
    ns.push_back(s.ns);
    lz.push_back(s.log_z);
  }
  return gurevich_estimate(env, ns, lz, opts);
}

// Identity must be a product of labels along some admissible word of
// length <= the horizon, from every state; this is the operational
// aperiodicity certificate for the extension.
template <GroupLike G>
void certify_identity_return(const RandomSFT& sft, const SkewLabeling<G>& psi,
                             const G& group, const ExperimentParams& p) {
  DpOptions opts = dp_options(p);
  auto zero = LocallyConstantPotential::zero(sft);
  for (int s = 0; s < sft.states(); ++s) {
    std::vector<std::vector<typename G::Element>> keys(p.cert_horizon);
    bool overflow = false;
    detail::run_dp<G, uint64_t>(sft, zero, psi, group, s, -1, -1,
                                group.identity(), p.cert_horizon, opts,
                                nullptr, &overflow, &keys);
    bool hit = false;
    for (const auto& level : keys)
      for (const auto& g : level)
        if (g == group.identity()) hit = true;
    if (!hit)
      throw MixingError(
          "extension is not certified mixing: the identity is not a product "
          "of labels along any admissible word of length <= " +
          std::to_string(p.cert_horizon) + " from state " +
          std::to_string(s));
  }
}

std::vector<std::pair<LatticeGroup::Element, double>> default_steps(
    const LatticeGroup& g) {
  std::vector<std::pair<LatticeGroup::Element, double>> out;
  double p = 1.0 / (2 * g.dim());
  for (int i = 0; i < g.dim(); ++i) {
    std::vector<long long> c(g.dim(), 0);
    c[i] = 1;
    out.emplace_back(g.from_coords(c), p);
    c[i] = -1;
    out.emplace_back(g.from_coords(c), p);
  }
  return out;
}

std::vector<std::pair<FreeGroup::Element, double>> default_steps(
    const FreeGroup& g) {
  std::vector<std::pair<FreeGroup::Element, double>> out;
  double p = 1.0 / (2 * g.rank());
  for (int i = 0; i < g.rank(); ++i) {
    out.emplace_back(g.generator(i), p);
    out.emplace_back(g.generator(i, true), p);
  }
  return out;
}

std::vector<std::pair<CyclicGroup::Element, double>> default_steps(
    const CyclicGroup& g) {
  CyclicGroup::Element plus{static_cast<int32_t>(1 % g.order())};
  return {{plus, 0.5}, {g.inv(plus), 0.5}};
}

double ball_size_of(const LatticeGroup& g, int r) {
  return LatticeGroup::ball_size(g.dim(), r);
}
double ball_size_of(const FreeGroup& g, int r) {
  return FreeGroup::ball_size(g.rank(), r);
}
double ball_size_of(const CyclicGroup& g, int r) {
  return CyclicGroup::ball_size(g.order(), r);
}

std::string group_name_of(const LatticeGroup& g) {
  return "Z^" + std::to_string(g.dim());
}
std::string group_name_of(const FreeGroup& g) {
  return "F_" + std::to_string(g.rank());
}
std::string group_name_of(const CyclicGroup& g) {
  return g.order() == 1 ? "trivial" : "Z/" + std::to_string(g.order());
}

int overflow_flag(bool v) { return v ? 1 : 0; }

}  // namespace

RandomSFT build_sft(const ExperimentConfig& cfg) {
  RandomSFT sft;
  try {
    if (cfg.full_shift) {
      sft = build_full_shift(cfg.alphabets);
    } else {
      sft.env = build_cyclic_environment(cfg.period);
      sft.alphabet = cfg.alphabets;
      for (int s = 0; s < cfg.period; ++s) {
        int rows = cfg.alphabets[s];
        int cols = cfg.alphabets[(s + 1) % cfg.period];
        BitMatrix m(rows, cols);
        for (int r = 0; r < rows; ++r)
          for (int c = 0; c < cols; ++c)
            m.set(r, c, static_cast<uint8_t>(cfg.matrices[s][r][c]));
        sft.matrix.push_back(std::move(m));
      }
    }
    auto bad = validate_sft(sft);
    if (!bad.empty())
      throw SchemaError("config: $.model.matrices: " + bad.front().message);
  } catch (const GlabError&) {
    throw;
  } catch (const std::exception& e) {
    throw SchemaError(std::string("config: $.model: ") + e.what());
  }
  return sft;
}

LocallyConstantPotential build_potential(const ExperimentConfig& cfg,
                                         const RandomSFT& sft) {
  if (cfg.potential.range == 0 && cfg.potential.entries.empty())
    return LocallyConstantPotential::zero(sft);
  std::vector<LocallyConstantPotential::Entry> entries;
  for (const auto& e : cfg.potential.entries)
    entries.push_back({e.state, e.word, e.value});
  try {
    return LocallyConstantPotential(sft, cfg.potential.range, entries);
  } catch (const std::exception& e) {
    throw SchemaError(std::string("config: $.potential: ") + e.what());
  }
}

EntropyRecord run_entropy(const ExperimentConfig& cfg) {
  RandomSFT sft = build_sft(cfg);
  auto phi = build_potential(cfg, sft);
  check_symbols(sft, cfg.params);
  require_base_mixing(sft, cfg.params);

  auto series = unconstrained_all_states(sft, phi, cfg.params);
  EntropyRecord rec;
  rec.fit = fit_over_states(sft.env, series, fit_options(cfg.params));
  rec.ruelle_pressure = fiber_ruelle(sft, phi).pressure;
  for (int s = 0; s < sft.states(); ++s) {
    SeriesColumn c;
    c.state = s;
    c.ns = series[s].ns;
    c.log_z = series[s].log_z;
    c.overflow.assign(c.ns.size(), overflow_flag(series[s].count_overflow));
    rec.series.push_back(std::move(c));
  }
  return rec;
}

GapRecord run_gap(const ExperimentConfig& cfg) {
  RandomSFT sft = build_sft(cfg);
  auto phi = build_potential(cfg, sft);
  check_symbols(sft, cfg.params);
  require_base_mixing(sft, cfg.params);

  return with_group(cfg.group, [&](const auto& group) -> GapRecord {
    using G = std::decay_t<decltype(group)>;
    auto psi = build_labeling(cfg, sft, group);
    const ExperimentParams& p = cfg.params;

    GapRecord rec;
    rec.cert_horizon = p.cert_horizon;
    certify_identity_return(sft, psi, group, p);
    rec.mixing_certified = true;

    auto un = unconstrained_all_states(sft, phi, p);
    auto abg = group.abelianization();
    auto abpsi = abelianize_labeling(group, psi);

    std::vector<ConstrainedSeries<typename G::Ab>> ab;
    std::vector<ConstrainedSeries<G>> full;
    for (int s = 0; s < sft.states(); ++s) {
      ab.push_back(constrained_series(sft, phi, abpsi, abg, s, p.base_symbol,
                                      end_symbol(p), abg.identity(), p.n_max,
                                      dp_options(p)));
      full.push_back(constrained_series(sft, phi, psi, group, s,
                                        p.base_symbol, end_symbol(p),
                                        group.identity(), p.n_max,
                                        dp_options(p)));
    }

    rec.fit_T = fit_over_states(sft.env, full, fit_options(p));
    rec.fit_Tab = fit_over_states(sft.env, ab, fit_options(p, true));
    rec.h_T = rec.fit_T.value;
    rec.h_Tab = rec.fit_Tab.value;
    rec.gap = rec.h_Tab - rec.h_T;
    rec.stderr_T = rec.fit_T.stderr_;
    rec.stderr_Tab = rec.fit_Tab.stderr_;
    rec.stderr_gap = std::hypot(rec.stderr_T, rec.stderr_Tab);

    for (int s = 0; s < sft.states(); ++s) {
      SeriesColumn c;
      c.state = s;
      c.ns = un[s].ns;
      c.log_z = un[s].log_z;
      c.log_z_ab = ab[s].log_z;
      c.log_z_full = full[s].log_z;
      c.overflow.assign(c.ns.size(),
                        overflow_flag(un[s].count_overflow ||
                                      ab[s].count_overflow ||
                                      full[s].count_overflow));
      rec.series.push_back(std::move(c));
    }
    return rec;
  });
}

KestenRecord run_kesten(const ExperimentConfig& cfg) {
  return with_group(cfg.group, [&](const auto& group) -> KestenRecord {
    using G = std::decay_t<decltype(group)>;
    const ExperimentParams& p = cfg.params;

    std::vector<std::pair<typename G::Element, double>> steps;
    if (p.steps.empty()) {
      steps = default_steps(group);
    } else {
      for (const auto& [text, prob] : p.steps)
        steps.emplace_back(
            parse_element(group, text, "$.experiment.steps." + text), prob);
    }

    std::vector<int> ladder = p.truncation_ladder;
    if (ladder.empty()) {
      if (p.truncation < 1)
        throw SchemaError(
            "config: $.experiment: the walk needs a truncation radius >= 1 "
            "(set truncation or truncations)");
      ladder.push_back(p.truncation);
    }

    KestenRecord rec;
    for (int level : ladder) {
      if (level < 1)
        throw SchemaError(
            "config: $.experiment.truncations: levels must be >= 1");
      rec.ladder.push_back(kesten_spectral_radius(group, steps, level));
    }
    rec.extrapolation = richardson_extrapolate(rec.ladder);
    const KestenPoint* best = &rec.ladder.front();
    for (const auto& pt : rec.ladder)
      if (pt.truncation > best->truncation) best = &pt;
    rec.value = rec.extrapolation.ok ? rec.extrapolation.value : best->estimate;
    return rec;
  });
}

FolnerRecord run_folner(const ExperimentConfig& cfg) {
  return with_group(cfg.group, [&](const auto& group) -> FolnerRecord {
    using G = std::decay_t<decltype(group)>;
    const ExperimentParams& p = cfg.params;
    if (p.folner_radius < 0)
      throw SchemaError("config: $.experiment.folner_radius: must be >= 0");

    auto candidate = group.ball(p.folner_radius);
    std::vector<typename G::Element> test;
    if (p.test_set.empty()) {
      for (const auto& [e, prob] : default_steps(group)) {
        bool dup = false;
        for (const auto& t : test)
          if (t == e) dup = true;
        if (!dup) test.push_back(e);
      }
    } else {
      for (size_t i = 0; i < p.test_set.size(); ++i)
        test.push_back(parse_element(
            group, p.test_set[i],
            "$.experiment.test_set[" + std::to_string(i) + "]"));
    }

    auto rep = folner_defect(group, candidate, test);
    FolnerRecord rec;
    rec.set_size = rep.denominator;
    rec.numerator = rep.numerator;
    rec.defect = rep.value;
    for (const auto& [name, exits] : rep.per_element)
      rec.rows.push_back({name, exits});
    return rec;
  });
}

VariationalRecord run_variational(const ExperimentConfig& cfg) {
  if (cfg.group.type != "lattice")
    throw SchemaError(
        "config: $.group.type: the variational experiment needs a lattice "
        "group (abelian tilt directions)");
  RandomSFT sft = build_sft(cfg);
  auto phi = build_potential(cfg, sft);
  check_symbols(sft, cfg.params);
  require_base_mixing(sft, cfg.params);

  const ExperimentParams& p = cfg.params;
  LatticeGroup group = make_group<LatticeGroup>(cfg.group.d);
  auto psi = build_labeling(cfg, sft, group);
  int dim = group.dim();

  std::vector<double> xi0 = p.xi0;
  if (xi0.empty()) xi0.assign(dim, 0.0);
  if (static_cast<int>(xi0.size()) != dim)
    throw SchemaError("config: $.experiment.xi0: needs exactly " +
                      std::to_string(dim) + " entries");

  DescentOptions dopts;
  dopts.grad_tol = p.grad_tol;
  dopts.max_iters = p.max_iters;
  dopts.fd_step = p.fd_step;
  dopts.divergence_radius = p.divergence_radius;

  VariationalRecord rec;
  rec.solution = minimize_pressure(sft, phi, psi, dim, xi0, dopts);

  auto un = unconstrained_all_states(sft, phi, p);
  std::vector<ConstrainedSeries<LatticeGroup>> constrained;
  for (int s = 0; s < sft.states(); ++s)
    constrained.push_back(constrained_series(sft, phi, psi, group, s,
                                             p.base_symbol, end_symbol(p),
                                             group.identity(), p.n_max,
                                             dp_options(p)));
  try {
    rec.counting = fit_over_states(sft.env, constrained, fit_options(p));
    rec.counting_available = true;
    rec.difference = rec.counting.value - rec.solution.value;
  } catch (const EstimationError&) {
    rec.counting_available = false;
  }

  for (int s = 0; s < sft.states(); ++s) {
    SeriesColumn c;
    c.state = s;
    c.ns = un[s].ns;
    c.log_z = un[s].log_z;
    c.log_z_full = constrained[s].log_z;
    c.overflow.assign(c.ns.size(),
                      overflow_flag(un[s].count_overflow ||
                                    constrained[s].count_overflow));
    rec.series.push_back(std::move(c));
  }
  return rec;
}

GibbsRecord run_gibbs_check(const ExperimentConfig& cfg) {
  RandomSFT sft = build_sft(cfg);
  auto phi = build_potential(cfg, sft);
  if (cfg.params.gibbs_max_len < 1)
    throw SchemaError("config: $.experiment.gibbs_max_len: must be >= 1");

  GibbsRecord rec;
  rec.eig = fiber_ruelle(sft, phi);
  rec.report = gibbs_check(sft, phi, rec.eig, cfg.params.gibbs_max_len,
                           2'000'000, &rec.ratio_range);
  return rec;
}

RadiusRecord run_operator_radius(const ExperimentConfig& cfg) {
  RandomSFT sft = build_sft(cfg);
  auto phi = build_potential(cfg, sft);
  require_base_mixing(sft, cfg.params);

  return with_group(cfg.group, [&](const auto& group) -> RadiusRecord {
    const ExperimentParams& p = cfg.params;
    auto psi = build_labeling(cfg, sft, group);
    int trunc = p.truncation < 0 ? INT_MAX : p.truncation;

    auto eig = fiber_ruelle(sft, phi);
    CylinderSpace cs = build_cylinder_space(sft, representation_depth(phi));
    std::vector<std::vector<double>> mu(sft.states());
    for (int s = 0; s < sft.states(); ++s)
      for (int i = 0; i < cs.count(s); ++i)
        mu[s].push_back(cylinder_mass(
            sft, phi, eig, s,
            std::span<const int>(cs.words[s][i].data(),
                                 cs.words[s][i].size())));

    auto rs = spectral_radius_H(sft, phi, psi, group, 0, p.n_max, trunc,
                                fit_options(p), &mu);

    auto phi0 = normalize_potential(sft, phi, eig);
    auto eig0 = fiber_ruelle(sft, phi0);
    auto mk = markov_average_and_Tn(sft, phi0, eig0, psi, group, 0, p.n_max,
                                    trunc);

    RadiusRecord rec;
    rec.ns = rs.ns;
    rec.log_norm_hinf = rs.log_norm;
    rec.log_norm_h1 = rs.log_norm_l1;
    rec.leakage = rs.leak;
    rec.radius = rs.radius;
    rec.a_n = mk.a_n;
    rec.a_n_root_final =
        std::pow(mk.a_n.back(), 1.0 / static_cast<double>(p.n_max));

    std::vector<double> xs, ys;
    for (size_t i = 0; i < mk.ns.size(); ++i) {
      int n = mk.ns[i];
      if (p.window_lo && n < p.window_lo) continue;
      if (p.window_hi && n > p.window_hi) continue;
      if (!(mk.a_n[i] > 0)) continue;
      xs.push_back(n);
      ys.push_back(std::log(mk.a_n[i]) + p.correction * std::log(n));
    }
    if (static_cast<int>(xs.size()) < 4)
      throw EstimationError(
          "average growth fit has too few usable points in the window");
    rec.a_n_growth = std::exp(fit_line(xs, ys).slope);

    auto gibbs = gibbs_check(sft, phi0, eig0, std::min(p.gibbs_max_len, 6),
                             2'000'000, nullptr);
    rec.gibbs_constant = gibbs.constant;
    rec.chain_ok = true;
    double slack = 1e-6;
    for (size_t i = 0; i < mk.ns.size(); ++i) {
      if (mk.log_t_norm[i] > mk.log_l_norm[i] + slack) rec.chain_ok = false;
      if (mk.log_l_norm[i] >
          std::log(rec.gibbs_constant) + mk.log_t_norm[i] + slack)
        rec.chain_ok = false;
    }
    return rec;
  });
}

namespace {

json fit_json(const GurevichEstimate& e) {
  json out;
  out["value"] = e.value;
  out["stderr"] = e.stderr_;
  out["per_state"] = json::array();
  for (const auto& st : e.per_state) {
    json s;
    s["state"] = st.state;
    s["slope"] = st.fit.slope;
    s["intercept"] = st.fit.intercept;
    s["stderr"] = st.fit.stderr_slope;
    s["points"] = st.fit.points;
    s["ns"] = st.ns_used;
    out["per_state"].push_back(std::move(s));
  }
  return out;
}

void write_entropy_outputs(const EntropyRecord& rec, const std::string& dir,
                           json& result) {
  CsvWriter csv(dir + "/series.csv", {"state", "n", "log_Z", "overflow_flag"});
  for (const auto& c : rec.series)
    for (size_t i = 0; i < c.ns.size(); ++i)
      csv.row({CsvWriter::num(static_cast<long long>(c.state)),
               CsvWriter::num(static_cast<long long>(c.ns[i])),
               CsvWriter::num(c.log_z[i]),
               CsvWriter::num(static_cast<long long>(c.overflow[i]))});
  json h;
  h["relative_entropy"] = rec.fit.value;
  h["stderr"] = rec.fit.stderr_;
  h["ruelle_pressure"] = rec.ruelle_pressure;
  result["headline"] = std::move(h);
  result["diagnostics"]["fit"] = fit_json(rec.fit);
}

void write_gap_outputs(const GapRecord& rec, const std::string& dir,
                       json& result) {
  CsvWriter csv(dir + "/series.csv",
                {"state", "n", "log_Z", "log_Z_ab_constrained",
                 "log_Z_constrained", "overflow_flag"});
  for (const auto& c : rec.series)
    for (size_t i = 0; i < c.ns.size(); ++i)
      csv.row({CsvWriter::num(static_cast<long long>(c.state)),
               CsvWriter::num(static_cast<long long>(c.ns[i])),
               CsvWriter::num(c.log_z[i]), CsvWriter::num(c.log_z_ab[i]),
               CsvWriter::num(c.log_z_full[i]),
               CsvWriter::num(static_cast<long long>(c.overflow[i]))});
  json h;
  h["h_T"] = rec.h_T;
  h["h_Tab"] = rec.h_Tab;
  h["gap"] = rec.gap;
  h["stderr_T"] = rec.stderr_T;
  h["stderr_Tab"] = rec.stderr_Tab;
  h["stderr_gap"] = rec.stderr_gap;
  h["mixing_certified"] = rec.mixing_certified;
  h["cert_horizon"] = rec.cert_horizon;
  result["headline"] = std::move(h);
  result["diagnostics"]["fit_T"] = fit_json(rec.fit_T);
  result["diagnostics"]["fit_Tab"] = fit_json(rec.fit_Tab);
}

void write_kesten_outputs(const KestenRecord& rec, const std::string& dir,
                          json& result) {
  CsvWriter csv(dir + "/series.csv",
                {"truncation", "ball_size", "estimate", "iterations",
                 "converged", "last_delta"});
  for (const auto& pt : rec.ladder)
    csv.row({CsvWriter::num(static_cast<long long>(pt.truncation)),
             CsvWriter::num(static_cast<long long>(pt.ball_size)),
             CsvWriter::num(pt.estimate),
             CsvWriter::num(static_cast<long long>(pt.iterations)),
             CsvWriter::num(static_cast<long long>(pt.converged ? 1 : 0)),
             CsvWriter::num(pt.last_delta)});
  json h;
  h["spectral_radius"] = rec.value;
  h["extrapolated"] = rec.extrapolation.ok;
  h["model_residual"] = rec.extrapolation.model_residual;
  h["levels"] = rec.ladder.size();
  result["headline"] = std::move(h);
  json ladder = json::array();
  for (const auto& pt : rec.ladder) {
    json r;
    r["truncation"] = pt.truncation;
    r["ball_size"] = pt.ball_size;
    r["estimate"] = pt.estimate;
    r["iterations"] = pt.iterations;
    r["converged"] = pt.converged;
    r["last_delta"] = pt.last_delta;
    ladder.push_back(std::move(r));
  }
  result["diagnostics"]["ladder"] = std::move(ladder);
}

void write_folner_outputs(const FolnerRecord& rec, const std::string& dir,
                          json& result) {
  CsvWriter csv(dir + "/series.csv",
                {"element", "exits", "set_size", "defect_contribution"});
  for (const auto& row : rec.rows)
    csv.row({row.element, CsvWriter::num(row.exits),
             CsvWriter::num(rec.set_size),
             CsvWriter::num(static_cast<double>(row.exits) /
                            static_cast<double>(rec.set_size))});
  json h;
  h["defect"] = rec.defect;
  h["numerator"] = rec.numerator;
  h["set_size"] = rec.set_size;
  result["headline"] = std::move(h);
  json rows = json::array();
  for (const auto& row : rec.rows) {
    json r;
    r["element"] = row.element;
    r["exits"] = row.exits;
    rows.push_back(std::move(r));
  }
  result["diagnostics"]["per_element"] = std::move(rows);
}

void write_variational_outputs(const VariationalRecord& rec, int dim,
                               const std::string& dir, json& result) {
  CsvWriter csv(dir + "/series.csv", {"state", "n", "log_Z",
                                      "log_Z_constrained", "overflow_flag"});
  for (const auto& c : rec.series)
    for (size_t i = 0; i < c.ns.size(); ++i)
      csv.row({CsvWriter::num(static_cast<long long>(c.state)),
               CsvWriter::num(static_cast<long long>(c.ns[i])),
               CsvWriter::num(c.log_z[i]), CsvWriter::num(c.log_z_full[i]),
               CsvWriter::num(static_cast<long long>(c.overflow[i]))});

  std::vector<std::string> cols = {"iter"};
  for (int k = 0; k < dim; ++k) cols.push_back("xi_" + std::to_string(k));
  cols.push_back("pressure");
  cols.push_back("grad_norm");
  CsvWriter trace(dir + "/trace.csv", cols);
  const DescentTrace& t = rec.solution.trace;
  for (size_t i = 0; i < t.iter.size(); ++i) {
    std::vector<std::string> cells = {
        CsvWriter::num(static_cast<long long>(t.iter[i]))};
    for (int k = 0; k < dim; ++k) cells.push_back(CsvWriter::num(t.xi[i][k]));
    cells.push_back(CsvWriter::num(t.value[i]));
    cells.push_back(CsvWriter::num(t.grad_norm[i]));
    trace.row(cells);
  }

  json h;
  h["pressure_inf"] = rec.solution.value;
  json xi = json::array();
  for (int k = 0; k < dim; ++k) xi.push_back(rec.solution.xi[k]);
  h["xi"] = std::move(xi);
  h["grad_norm"] = rec.solution.grad_norm;
  h["iterations"] = rec.solution.iterations;
  h["counting_available"] = rec.counting_available;
  if (rec.counting_available) {
    h["counting_estimate"] = rec.counting.value;
    h["counting_stderr"] = rec.counting.stderr_;
    h["difference"] = rec.difference;
  }
  result["headline"] = std::move(h);
  if (rec.counting_available)
    result["diagnostics"]["counting_fit"] = fit_json(rec.counting);
  result["diagnostics"]["trace_points"] = rec.solution.trace.iter.size();
}

void write_gibbs_outputs(const GibbsRecord& rec, const std::string& dir,
                         json& result) {
  CsvWriter csv(dir + "/series.csv",
                {"length", "cylinders", "min_ratio", "max_ratio"});
  for (size_t i = 0; i < rec.ratio_range.size(); ++i)
    csv.row({CsvWriter::num(static_cast<long long>(i + 1)),
             CsvWriter::num(static_cast<long long>(rec.ratio_range[i][2])),
             CsvWriter::num(rec.ratio_range[i][0]),
             CsvWriter::num(rec.ratio_range[i][1])});
  json h;
  h["gibbs_constant"] = rec.report.constant;
  h["worst_ratio"] = rec.report.worst_ratio;
  h["worst_state"] = rec.report.worst_state;
  h["worst_word"] = rec.report.worst_word;
  h["cylinders_checked"] = rec.report.cylinders_checked;
  h["pressure"] = rec.eig.pressure;
  result["headline"] = std::move(h);
  result["diagnostics"]["lambda"] = rec.eig.lambda;
  result["diagnostics"]["ruelle_iterations"] = rec.eig.iterations;
  result["diagnostics"]["residual"] = rec.eig.residual;
}

void write_radius_outputs(const RadiusRecord& rec, const std::string& dir,
                          json& result) {
  CsvWriter csv(dir + "/series.csv",
                {"n", "log_norm_H1", "log_norm_Hinf", "A_n", "leakage"});
  for (size_t i = 0; i < rec.ns.size(); ++i)
    csv.row({CsvWriter::num(static_cast<long long>(rec.ns[i])),
             CsvWriter::num(rec.log_norm_h1[i]),
             CsvWriter::num(rec.log_norm_hinf[i]), CsvWriter::num(rec.a_n[i]),
             CsvWriter::num(rec.leakage[i])});
  json h;
  h["radius"] = rec.radius;
  h["a_n_growth"] = rec.a_n_growth;
  h["a_n_root_final"] = rec.a_n_root_final;
  h["gibbs_constant"] = rec.gibbs_constant;
  h["chain_ok"] = rec.chain_ok;
  result["headline"] = std::move(h);
}

}  // namespace

void emit_error_record(const std::string& kind, int exit_code,
                       const std::string& message, const std::string& out_dir) {
  json err;
  err["error"]["kind"] = kind;
  err["error"]["exit_code"] = exit_code;
  err["error"]["message"] = message;
  std::cout << err.dump() << "\n";
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (!ec) {
    std::ofstream f(out_dir + "/error.json", std::ios::binary);
    if (f) f << err.dump(2) << "\n";
  }
}

int run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  try {
    std::filesystem::create_directories(out_dir);
    json result;
    result["format"] = "glab-result v1";
    result["experiment"] = cfg.params.name;
    result["seed"] = cfg.params.seed;

    const std::string& name = cfg.params.name;
    if (name == "entropy") {
      write_entropy_outputs(run_entropy(cfg), out_dir, result);
    } else if (name == "gap") {
      write_gap_outputs(run_gap(cfg), out_dir, result);
    } else if (name == "kesten") {
      write_kesten_outputs(run_kesten(cfg), out_dir, result);
    } else if (name == "folner") {
      write_folner_outputs(run_folner(cfg), out_dir, result);
    } else if (name == "variational") {
      write_variational_outputs(run_variational(cfg), cfg.group.d, out_dir,
                                result);
    } else if (name == "gibbs-check") {
      write_gibbs_outputs(run_gibbs_check(cfg), out_dir, result);
    } else if (name == "operator-radius") {
      write_radius_outputs(run_operator_radius(cfg), out_dir, result);
    } else {
      throw SchemaError("config: $.experiment.name: unknown experiment '" +
                        name + "'");
    }

    result["config"] = json::parse(canonical_config_text(cfg));
    {
      std::ofstream f(out_dir + "/result.json", std::ios::binary);
      if (!f)
        throw GlabError("io", 1, "cannot write " + out_dir + "/result.json");
      f << result.dump(2) << "\n";
    }
    json line;
    line["experiment"] = name;
    line["headline"] = result["headline"];
    std::cout << line.dump() << "\n";
    return 0;
  } catch (const GlabError& e) {
    emit_error_record(e.kind, e.exit_code, e.what(), out_dir);
    return e.exit_code;
  } catch (const std::exception& e) {
    emit_error_record("internal", 1, e.what(), out_dir);
    return 1;
  }
}

std::string describe(const ExperimentConfig& cfg) {
  RandomSFT sft = build_sft(cfg);
  auto phi = build_potential(cfg, sft);
  const ExperimentParams& p = cfg.params;

  CylinderSpace cs = build_cylinder_space(sft, representation_depth(phi));
  int max_grams = 0;
  for (int s = 0; s < sft.states(); ++s)
    max_grams = std::max(max_grams, cs.count(s));

  return with_group(cfg.group, [&](const auto& group) -> std::string {
    auto psi = build_labeling(cfg, sft, group);
    int max_len = 0;
    for (const auto& fiber : psi.label)
      for (const auto& g : fiber)
        max_len = std::max(max_len, group.word_length(g));

    long long reach = static_cast<long long>(p.n_max) * max_len;
    long long trunc = p.truncation < 0 ? LLONG_MAX : p.truncation;
    long long radius = std::min(reach, trunc);
    bool capped = radius > 512;
    int r = static_cast<int>(std::min<long long>(radius, 512));
    double ball = ball_size_of(group, r);
    double cells = static_cast<double>(max_grams) * ball;
    double mib = cells * 64.0 / (1024.0 * 1024.0);

    auto count_str = [](double v) -> std::string {
      if (v < 9e15) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.0f", v);
        return buf;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3e", v);
      return buf;
    };

    std::ostringstream out;
    out << "instance: period " << sft.states() << ", alphabets [";
    for (int s = 0; s < sft.states(); ++s)
      out << (s ? ", " : "") << sft.alphabet[s];
    out << "], " << (cfg.full_shift ? "full shift" : "matrix transitions")
        << "\n";
    out << "potential: range " << phi.range() << ", cylinder depth "
        << cs.depth << ", at most " << max_grams << " grams per fiber\n";
    out << "group: " << group_name_of(group) << ", max label length "
        << max_len << "\n";
    out << "experiment: " << p.name << ", n_max = " << p.n_max
        << ", truncation = "
        << (p.truncation < 0 ? std::string("unlimited")
                             : std::to_string(p.truncation));
    if (p.window_lo || p.window_hi)
      out << ", window = [" << p.window_lo << ", " << p.window_hi << "]";
    out << "\n";
    out << "reachable group radius: " << (capped ? ">= 512" : count_str(
                                                      static_cast<double>(
                                                          radius)))
        << ", ball size " << (capped ? ">= " : "") << count_str(ball) << "\n";
    out << "predicted peak DP cells: " << (capped ? ">= " : "")
        << count_str(cells) << " (~" << count_str(mib)
        << " MiB at 64 bytes per cell)\n";
    if (p.name == "kesten") {
      std::vector<int> ladder = p.truncation_ladder;
      if (ladder.empty() && p.truncation >= 1) ladder.push_back(p.truncation);
      for (int level : ladder)
        out << "walk ball at truncation " << level << ": "
            << count_str(ball_size_of(group, level)) << " elements\n";
    }
    if (cells > static_cast<double>(p.state_budget)) {
      out << "state budget " << p.state_budget
          << ": OVER BUDGET - this run would stop with a budget error; "
             "lower n_max or truncation, or raise state_budget\n";
    } else {
      out << "state budget " << p.state_budget << ": within budget\n";
    }
    return out.str();
  });
}

}  // namespace glab
