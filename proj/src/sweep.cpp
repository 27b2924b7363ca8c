#include "henon/sweep.hpp"

#include <cmath>
#include <sstream>

#include "henon/error.hpp"
#include "henon/io.hpp"
#include "henon/parallel.hpp"

namespace henon {

namespace {

double& field(Params& p, const std::string& name) {
  if (name == "q") return p.q;
  if (name == "alpha") return p.alpha;
  if (name == "beta") return p.beta;
  if (name == "gamma") return p.gamma;
  if (name == "s") return p.s;
  if (name == "p") return p.p;
  throw Error(ErrorKind::Configuration, "cannot sweep parameter '" + name + "'");
}

double field(const Params& p, const std::string& name) {
  return field(const_cast<Params&>(p), name);
}

double parse_number(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) {
    throw Error(ErrorKind::Configuration, "not a number: '" + text + "'");
  }
  return v;
}

}  // namespace

std::vector<double> Range::values() const {
  std::vector<double> out;
  if (!(step > 0.0) || !(stop >= start) || !std::isfinite(start) || !std::isfinite(stop)) {
    return out;
  }
  const auto n = static_cast<long long>(std::floor((stop - start) / step + 1e-9)) + 1;
  for (long long i = 0; i < n; ++i) {
    out.push_back(std::round((start + i * step) * 1e12) / 1e12);
  }
  return out;
}

Range parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() == 1) {
    const double v = parse_number(parts[0]);
    return Range{v, v, 1.0};
  }
  if (parts.size() != 3) {
    throw Error(ErrorKind::Configuration, "range must be start:stop:step, got '" + text + "'");
  }
  return Range{parse_number(parts[0]), parse_number(parts[1]), parse_number(parts[2])};
}

SweepResult run_sweep(const SweepSpec& spec) {
  if (spec.ranges.empty()) throw Error(ErrorKind::Configuration, "nothing to sweep");
  std::vector<std::vector<double>> axes;
  for (const auto& [name, range] : spec.ranges) {
    Params probe;
    (void)field(probe, name);
    axes.push_back(range.values());
    if (axes.back().empty()) throw Error(ErrorKind::Configuration, "empty range for " + name);
  }
  SweepResult result;
  std::vector<Params> tuples;
  std::size_t total = 1;
  for (const auto& axis : axes) total *= axis.size();
  std::vector<std::size_t> idx(axes.size());
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t rest = k;
    for (std::size_t a = axes.size(); a-- > 0;) {
      idx[a] = rest % axes[a].size();
      rest /= axes[a].size();
    }
    Params p = spec.base;
    for (std::size_t a = 0; a < axes.size(); ++a) field(p, spec.ranges[a].first) = axes[a][idx[a]];
    try {
      p.validate();
      tuples.push_back(p);
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << "skipped";
      for (std::size_t a = 0; a < axes.size(); ++a) {
        msg << ' ' << spec.ranges[a].first << '=' << format_double(axes[a][idx[a]]);
      }
      msg << ": " << e.what();
      result.skipped.push_back(msg.str());
    }
  }

  result.rows.resize(tuples.size());
  parallel_for(tuples.size(), [&](std::size_t k) {
    SweepRow& row = result.rows[k];
    row.params = tuples[k];
    row.R = spec.R;
    row.M = spec.M;
    row.verdict = classify(row.params).verdict;
    if (spec.classify_only || !(row.params.q > row.params.p)) return;
    try {
      const GridPtr grid = make_grid(row.params.N, spec.R, spec.M, spec.grading);
      const Model model(row.params, grid);
      const SolveReport rep = solve_ground_state(model, spec.solver);
      row.solved = true;
      row.converged = rep.converged;
      row.nehari_level = rep.nehari_level;
      row.residual = rep.residual;
      row.concentration_index = rep.diagnostics.concentration_index;
      row.peak_radius = rep.diagnostics.peak_radius;
    } catch (const Error&) {
      row.solved = false;
    }
  });
  return result;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "N,p,q,s,gamma,alpha,beta,R,M,verdict,converged,nehari_level,residual,"
         "concentration_index,peak_radius\n";
  for (const SweepRow& r : rows) {
    const Params& p = r.params;
    out << p.N << ',' << format_double(p.p) << ',' << format_double(p.q) << ','
        << format_double(p.s) << ',' << format_double(p.gamma) << ',' << format_double(p.alpha)
        << ',' << format_double(p.beta) << ',' << format_double(r.R) << ',' << r.M << ','
        << to_string(r.verdict) << ',';
    if (r.solved) {
      out << (r.converged ? "true" : "false") << ',' << format_double(r.nehari_level) << ','
          << format_double(r.residual) << ',' << format_double(r.concentration_index) << ','
          << format_double(r.peak_radius);
    } else {
      out << ",,,,";
    }
    out << '\n';
  }
}

void write_plot_data(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  if (spec.ranges.size() < 2) {
    throw Error(ErrorKind::Configuration, "plot data needs two swept parameters");
  }
  const std::string& xn = spec.ranges[0].first;
  const std::string& yn = spec.ranges[1].first;
  out << "x,y,class\n";
  for (const SweepRow& r : rows) {
    out << format_double(field(r.params, xn)) << ',' << format_double(field(r.params, yn)) << ','
        << to_string(r.verdict) << '\n';
  }
}

}  // namespace henon
