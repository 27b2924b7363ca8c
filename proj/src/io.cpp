#include "henon/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "henon/error.hpp"

namespace henon {

namespace {

Json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

Json numbers(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(number(x));
  return a;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

Json to_json(const Params& p) {
  return Json{{"N", p.N},         {"p", p.p},         {"q", p.q},       {"s", p.s},
              {"gamma", p.gamma}, {"alpha", p.alpha}, {"beta", p.beta}};
}

Params params_from_json(const Json& j) {
  try {
    Params p;
    p.N = j.at("N").get<int>();
    p.p = j.at("p").get<double>();
    p.q = j.at("q").get<double>();
    p.s = j.at("s").get<double>();
    p.gamma = j.at("gamma").get<double>();
    p.alpha = j.at("alpha").get<double>();
    p.beta = j.at("beta").get<double>();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Io, std::string("malformed parameter record: ") + e.what());
  }
}

Json to_json(const AdmissibilityReport& r) {
  return Json{{"s_range", r.s_range},
              {"alpha_range", r.alpha_range},
              {"q_range", r.q_range},
              {"condition_2", r.condition_2},
              {"beta_nonexist", r.beta_nonexist},
              {"q_supercritical", r.q_supercritical},
              {"verdict", std::string(to_string(r.verdict))}};
}

Json to_json(const EnergyBreakdown& e) {
  return Json{{"grad_term", number(e.grad_term)},
              {"nonlocal_term", number(e.nonlocal_term)},
              {"confinement_term", number(e.confinement_term)},
              {"source_term", number(e.source_term)},
              {"J", number(e.J)},
              {"A", number(e.A)},
              {"B", number(e.B)}};
}

Json solution_to_json(const RadialFunction& f, const Params& params) {
  const RadialGrid& g = f.grid();
  Json values = Json::array();
  for (double v : f.values()) values.push_back(v);
  return Json{{"params", to_json(params)},
              {"grid", Json{{"R", g.radius()}, {"M", g.size()}, {"grading", g.grading()}}},
              {"values", std::move(values)}};
}

RadialFunction solution_from_json(const Json& j, Params* params) {
  try {
    const Params p = params_from_json(j.at("params"));
    const Json& g = j.at("grid");
    GridPtr grid = make_grid(p.N, g.at("R").get<double>(), g.at("M").get<int>(),
                             g.at("grading").get<double>());
    std::vector<double> values = j.at("values").get<std::vector<double>>();
    if (params != nullptr) *params = p;
    return RadialFunction(std::move(grid), std::move(values));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Io, std::string("malformed solution record: ") + e.what());
  }
}

Json to_json(const SolveReport& r, const Params& params) {
  Json j = solution_to_json(r.solution, params);
  Json out;
  out["params"] = j["params"];
  out["classification"] = to_json(classify(params));
  out["converged"] = r.converged;
  out["residual"] = number(r.residual);
  out["nehari_level"] = number(r.nehari_level);
  out["iterations"] = r.iterations;
  out["restarts"] = r.restarts_run;
  out["best_restart"] = r.best_restart;
  out["energy"] = to_json(r.energy);
  out["diagnostics"] = Json{{"decay_exponent_fit", number(r.diagnostics.decay_exponent_fit)},
                            {"concentration_index", number(r.diagnostics.concentration_index)},
                            {"peak_radius", number(r.diagnostics.peak_radius)},
                            {"ps_constant", number(r.diagnostics.ps_constant)}};
  out["level_history"] = numbers(r.level_history);
  out["residual_history"] = numbers(r.residual_history);
  out["grid"] = j["grid"];
  out["values"] = j["values"];
  return out;
}

Json to_json(const MountainPassReport& r) {
  return Json{{"radius", r.radius},
              {"samples", r.samples},
              {"min_energy", number(r.min_energy)},
              {"condition_i", r.condition_i},
              {"witness_found", r.witness_found},
              {"witness_t", number(r.witness_t)},
              {"witness_energy", number(r.witness_energy)},
              {"witness_norm", number(r.witness_norm)},
              {"superhomogeneous", r.superhomogeneous},
              {"pass", r.pass}};
}

Json to_json(const DeGiorgiTrace& t) {
  return Json{{"energies", numbers(t.energies)},
              {"constants", numbers(t.constants)},
              {"delta", t.delta},
              {"exponent_printed", number(t.exponent_printed)},
              {"chat", numbers(t.chat)},
              {"chat_defined", t.chat_defined},
              {"chat_spread", number(t.chat_spread)},
              {"limit_value", number(t.limit_value)},
              {"vanishes", t.vanishes},
              {"monotone", t.monotone},
              {"nested", t.nested},
              {"recursion_holds", t.recursion_holds}};
}

Json to_json(const ProbeSequence& s) {
  return Json{{"kind", s.kind},
              {"parameter", numbers(s.parameter)},
              {"values", numbers(s.values)},
              {"status", std::string(to_string(s.status))},
              {"note", s.note}};
}

Json check_record(const std::string& name, const Params& params, bool pass, double measured,
                  double bound, double tolerance, Json details) {
  Json j{{"name", name},
         {"params", to_json(params)},
         {"pass", pass},
         {"measured", number(measured)},
         {"bound", number(bound)},
         {"tolerance", number(tolerance)}};
  if (!details.empty()) j["details"] = std::move(details);
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace henon
