#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "henon/error.hpp"
#include "henon/sweep.hpp"

using namespace henon;

TEST_CASE("ranges") {
  const std::vector<double> v = parse_range("2.2:7.0:0.2").values();
  REQUIRE(v.size() == 25);
  CHECK(v.front() == 2.2);
  CHECK(v[19] == 6.0);
  CHECK(v.back() == 7.0);
  CHECK(parse_range("3").values() == std::vector<double>{3.0});
  CHECK(parse_range("5:1:1").values().empty());
  CHECK_THROWS_AS(parse_range("1:x:2"), Error);
}

TEST_CASE("classification sweep over q") {
  SweepSpec spec;
  spec.ranges = {{"q", parse_range("2.2:7.0:0.2")}};
  spec.classify_only = true;
  const SweepResult res = run_sweep(spec);
  REQUIRE(res.rows.size() == 25);
  for (const SweepRow& row : res.rows) {
    const Verdict want = row.params.q < 6.0   ? Verdict::ExistsGuaranteed
                         : row.params.q > 6.0 ? Verdict::NonexistenceGuaranteed
                                              : Verdict::Unclassified;
    CHECK(row.verdict == want);
    CHECK(!row.solved);
  }
  std::ostringstream csv;
  write_csv(csv, res.rows);
  const std::string text = csv.str();
  CHECK(text.rfind("N,p,q,s,gamma,alpha,beta,R,M,verdict,", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 26);
}

TEST_CASE("sweep errors and skipped tuples") {
  SweepSpec spec;
  spec.classify_only = true;
  CHECK_THROWS_AS(run_sweep(spec), Error);
  spec.ranges = {{"q", parse_range("5:1:1")}};
  CHECK_THROWS_AS(run_sweep(spec), Error);
  spec.ranges = {{"zeta", parse_range("1")}};
  CHECK_THROWS_AS(run_sweep(spec), Error);
  spec.ranges = {{"s", parse_range("0.5:1.0:0.5")}};
  const SweepResult r = run_sweep(spec);
  CHECK(r.rows.size() == 1);
  CHECK(r.skipped.size() == 1);
}
