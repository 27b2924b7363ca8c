#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "henon/params.hpp"
#include "henon/radial.hpp"
#include "henon/solver.hpp"
#include "henon/verify.hpp"

namespace henon {

using Json = nlohmann::ordered_json;

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

Json to_json(const Params& params);
Params params_from_json(const Json& j);

Json to_json(const AdmissibilityReport& report);
Json to_json(const EnergyBreakdown& e);

/// {params, grid: {R, M, grading}, values}. Values round-trip exactly.
Json solution_to_json(const RadialFunction& f, const Params& params);
RadialFunction solution_from_json(const Json& j, Params* params = nullptr);

Json to_json(const SolveReport& report, const Params& params);
Json to_json(const MountainPassReport& report);
Json to_json(const DeGiorgiTrace& trace);
Json to_json(const ProbeSequence& seq);

/// Uniform checker record {name, params, pass, measured, bound, tolerance}.
Json check_record(const std::string& name, const Params& params, bool pass, double measured,
                  double bound, double tolerance, Json details = Json::object());

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace henon
