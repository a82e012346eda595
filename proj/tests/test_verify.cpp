#include <catch_amalgamated.hpp>

#include <sstream>

#include "levybasis/families.hpp"
#include "levybasis/report_io.hpp"
#include "levybasis/truncation.hpp"
#include "levybasis/verify.hpp"
#include "support.hpp"

using namespace levybasis;
using levybasis::testing::close;
using levybasis::testing::line;

namespace {

/// E[min(X^2, 1)] for X ~ N(0, s2), via the normal CDF and density.
double gaussian_trunc_second(double s2) {
  const double s = std::sqrt(s2);
  const double k = 1.0 / s;
  const double inside = std::erf(k / std::sqrt(2.0));
  const double phi = std::exp(-0.5 * k * k) / std::sqrt(2.0 * M_PI);
  return s2 * (inside - 2.0 * k * phi) + (1.0 - inside);
}

}  // namespace

TEST_CASE("report pass logic") {
  ExperimentReport r;
  r.statistic = 0.5;
  r.tolerance = 1.0;
  r.finish();
  CHECK(r.pass);
  r.check(false, "side condition");
  r.finish();
  CHECK_FALSE(r.pass);
  CHECK(r.failed_checks == 1);
  ExperimentReport s;
  s.statistic = 2.0;
  s.tolerance = 1.0;
  s.finish();
  CHECK_FALSE(s.pass);
  s.add_stat("x", 3.0);
  CHECK(s.stat("x") == 3.0);
  CHECK_THROWS(s.stat("missing"));
}

TEST_CASE("number and CSV formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(-2.0) == "-2");
  CHECK(format_double(kInfinity) == "inf");
  CHECK(format_double(-kInfinity) == "-inf");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("serialized reports exclude runtime") {
  ExperimentReport r;
  r.name = "x";
  r.statistic = 0.25;
  r.tolerance = 1.0;
  r.runtime_seconds = 123.456;
  r.note = "n, with comma";
  r.finish();
  std::ostringstream csv;
  write_reports_csv(csv, {r});
  CHECK(csv.str() == "name,pass,statistic,tolerance,failed_checks,indicative,note\nx,true,0.25,1,0,false,\"n, with comma\"\n");
  const std::string json = reports_to_json({r}).dump();
  CHECK(json.find("123.456") == std::string::npos);
  CHECK(json.find("runtime") == std::string::npos);
}

TEST_CASE("Poisson partition sums follow 2^m (1 - e^{-lambda 2^{-m}})") {
  const auto d = line(1, 1.0);
  const double lambda = 1.0;
  const CharacteristicTriplet t = families::poisson(d, lambda);
  const auto depths = partition_sums(t, {0}, 20);
  REQUIRE(depths.size() == 21);
  for (const PartitionDepth& p : depths) {
    const double n = std::ldexp(1.0, static_cast<int>(p.depth));
    const double expect = -n * std::expm1(-lambda / n);
    CHECK(close(p.tau_sum, expect, 1e-12));
    CHECK(close(p.tau_sq_sum, expect, 1e-12));
  }
  CHECK(std::abs(depths.back().tau_sum - lambda) <= 1e-6);
}

TEST_CASE("Gaussian partition sums approach q(t - s)") {
  const auto d = line(1, 2.0);
  const double q = 0.7;
  const CharacteristicTriplet t = families::gaussian(d, 1.0, q);
  const auto depths = partition_sums(t, {0}, 12);
  for (const PartitionDepth& p : depths) {
    const double n = std::ldexp(1.0, static_cast<int>(p.depth));
    CHECK(close(p.tau_sq_sum, n * gaussian_trunc_second(q * 2.0 / n), 1e-9));
    CHECK(std::abs(p.tau_sum) < 1e-12);
  }
  CHECK(std::abs(depths.back().tau_sq_sum - q * 2.0) <= 1e-8);
}

TEST_CASE("experiment names are unique and unknown names are rejected") {
  auto names = experiment_names();
  CHECK(names.size() >= 12);
  std::sort(names.begin(), names.end());
  CHECK(std::adjacent_find(names.begin(), names.end()) == names.end());
  CHECK_THROWS_AS(run_experiment("no.such.experiment", {}), std::invalid_argument);
}

TEST_CASE("experiments are reproducible and independent of the worker count") {
  VerifyOptions one;
  VerifyOptions many;
  many.workers = 4;
  for (const char* name : {"cf_match.poisson", "decoupling.mc", "sum_control.exact"}) {
    const ExperimentReport a = run_experiment(name, one);
    const ExperimentReport b = run_experiment(name, one);
    const ExperimentReport c = run_experiment(name, many);
    CHECK(reports_to_json({a}) == reports_to_json({b}));
    CHECK(reports_to_json({a}) == reports_to_json({c}));
  }
  VerifyOptions other;
  other.seed = 8;
  CHECK(reports_to_json({run_experiment("cf_match.poisson", other)}) !=
        reports_to_json({run_experiment("cf_match.poisson", one)}));
}

TEST_CASE("random toy tuples respect their bounds") {
  const auto tuples = random_toy_tuples(50, 5, 7);
  CHECK(tuples.size() == 50);
  for (const auto& t : tuples) {
    CHECK(!t.empty());
    CHECK(t.size() <= 5);
    for (const ToyLaw& l : t) {
      CHECK(l.size() >= 1);
      CHECK(l.size() <= 3);
      l.validate();
    }
  }
  CHECK(random_toy_tuples(5, 5, 7).front().size() == tuples.front().size());
}

TEST_CASE("tolerance scale widens statistical tolerances") {
  VerifyOptions wide;
  wide.tolerance_scale = 2.0;
  const ExperimentReport a = run_experiment("cf_match.comp_poisson", {});
  const ExperimentReport b = run_experiment("cf_match.comp_poisson", wide);
  CHECK(close(b.tolerance, 2.0 * a.tolerance, 1e-15));
  CHECK(a.statistic == b.statistic);
}

TEST_CASE("realized integrand records the coefficients of a run") {
  const auto d = line(3);
  const StepStrategy s = StepStrategy::uniform(d, rules::sign_of_past_sum());
  const IntegrationResult run = run_strategy(s, [](std::size_t c) { return c == 0 ? -1.0 : 2.0; });
  const GridFunction g = realized_integrand(s, run);
  CHECK(g.values() == std::vector<double>{1.0, -1.0, -1.0});
}
