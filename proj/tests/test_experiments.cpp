#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hofa/experiments.hpp"

using namespace hofa;

TEST_CASE("strong independence battery passes its gate and bounds") {
  const ExperimentReport report =
      verify_strong_independence(arithmetic_progression(5, 3), 1, 1, 2);
  CHECK_FALSE(report.vacuous);
  CHECK(report.passed());
  // at n = 1 the quadratic phase gives |t| = 5^{-1/2} and U^2 norm 5^{-1/4}
  const auto& sweep = report.measurements["sweep"];
  CHECK(sweep[0]["abs_t"].get<double>() == doctest::Approx(std::pow(5.0, -0.5)).epsilon(1e-9));
  CHECK(sweep[0]["f1_norm_Ud1"].get<double>() ==
        doctest::Approx(std::pow(5.0, -0.25)).epsilon(1e-9));
}

TEST_CASE("strong independence marks violated hypotheses vacuous") {
  const ExperimentReport report =
      verify_strong_independence(arithmetic_progression(5, 3), 0, 1, 1);
  CHECK(report.vacuous);
  CHECK(report.passed());
  CHECK(report.assertions.empty());
}

TEST_CASE("avg approx battery holds the telescoping bound") {
  const LinearSystem ap3 = arithmetic_progression(5, 3);
  std::vector<DenseFunction> fs, gs;
  make_avg_approx_battery(ap3, 1, 1, 11, fs, gs);
  const ExperimentReport report = verify_avg_approx(ap3, 1, fs, gs);
  CHECK(report.passed());
  CHECK(report.measurements["all_bounded"] == true);

  // identical pairs leave zero difference
  const ExperimentReport same = verify_avg_approx(ap3, 1, fs, fs);
  CHECK(same.passed());
  CHECK(same.measurements["difference"].get<double>() < 1e-12);
}

TEST_CASE("invariance battery") {
  for (const ExperimentReport& report : run_suite("invariance")) {
    CHECK(report.passed());
    CHECK(report.measurements["zero_sets_coincide"] == true);
  }
}

TEST_CASE("invariance with identical collections has zero difference") {
  RootTable roots(3);
  std::vector<cplx> gamma{roots(0), roots(1), roots(2)};
  const Polynomial sq = Polynomial::monomial(3, 2, std::vector<std::uint32_t>{2, 0}, 1);
  std::vector<Polynomial> ps{sq};
  const ExperimentReport report =
      verify_invariance(ps, ps, arithmetic_progression(3, 3), gamma);
  CHECK(report.passed());
  CHECK(report.measurements["difference"].get<double>() < 1e-12);
}

TEST_CASE("invariance validates its preconditions") {
  RootTable roots(3);
  std::vector<cplx> gamma{roots(0), roots(1), roots(2)};
  const Polynomial sq = Polynomial::monomial(3, 2, std::vector<std::uint32_t>{2, 0}, 1);
  Polynomial cube_mix = sq;
  cube_mix.add_term(std::vector<std::uint32_t>{1, 0}, 1);  // not homogeneous
  std::vector<Polynomial> ps{sq}, qs{cube_mix};
  // degree matches and the progression is homogeneous, so this is accepted;
  // a degree mismatch is not.
  CHECK_NOTHROW(verify_invariance(ps, qs, arithmetic_progression(3, 3), gamma));
  const Polynomial lin = Polynomial::variable(3, 2, 0);
  std::vector<Polynomial> qs_bad{lin};
  CHECK_THROWS_AS(verify_invariance(ps, qs_bad, arithmetic_progression(3, 3), gamma),
                  ValidationError);
  // non-homogeneous collections over a non-homogeneous system are rejected
  const LinearSystem skew{{LinearForm(3, {1, 0}), LinearForm(3, {2, 1})}};
  std::vector<Polynomial> mixed{cube_mix};
  CHECK_THROWS_AS(verify_invariance(mixed, mixed, skew, gamma), ValidationError);
}

TEST_CASE("pipeline battery reconciles") {
  for (const ExperimentReport& report : run_suite("pipeline6")) {
    CHECK(report.passed());
  }
}

TEST_CASE("pipeline on all-ones keeps a single surviving unit term") {
  const LinearSystem ap3 = arithmetic_progression(3, 3);
  std::vector<DenseFunction> fs(3, DenseFunction::constant(3, 2, 1.0));
  PipelineConfig cfg;
  cfg.factor_degree = 1;
  cfg.d = 1;
  cfg.epsilon = 0.3;
  const ExperimentReport report = verify_pipeline_section6(ap3, fs, cfg);
  CHECK(report.passed());
  CHECK(report.measurements["complexity"] == 0);
  CHECK(report.measurements["surviving_terms"] == 1);
  const auto& term_sum = report.measurements["term_sum"];
  CHECK(term_sum["re"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("reports reproduce bit for bit") {
  const ExperimentReport a = verify_strong_independence(
      arithmetic_progression(5, 3), 1, 1, 2, CompanionFunctions::random_unimodular, 99);
  const ExperimentReport b = verify_strong_independence(
      arithmetic_progression(5, 3), 1, 1, 2, CompanionFunctions::random_unimodular, 99);
  CHECK(a.to_json().dump() == b.to_json().dump());
}

TEST_CASE("suite plumbing") {
  const auto reports = run_suite("invariance");
  CHECK(reports.size() == 3);
  const json summary = suite_to_json(reports);
  CHECK(summary["experiments"].size() == 3);
  CHECK(summary.contains("all_passed"));
  const std::string table = suite_table(reports);
  CHECK(table.find("invariance") != std::string::npos);
  CHECK_THROWS_AS(run_suite("bogus"), ValidationError);
}
