#include <gtest/gtest.h>

#include "phigamma/errors.hpp"
#include "phigamma/suites.hpp"

using namespace phigamma;

TEST(Suites, RejectsBadConfig) {
  SuiteConfig c;
  c.suite = "psi_phi";
  c.trials = 0;
  EXPECT_THROW(validate(c), ConfigInvalid);
  c.trials = 1;
  c.p = 9;
  EXPECT_THROW(validate(c), ConfigInvalid);
  c.p = 3;
  c.suite = "nope";
  EXPECT_THROW(validate(c), UnknownSuite);
}

TEST(Suites, DeterministicReport) {
  SuiteConfig c;
  c.suite = "m_delta_laws";
  c.trials = 3;
  c.seed = 7;
  auto a = to_json(run_suite(c)).dump();
  c.threads = 1;
  auto b = to_json(run_suite(c)).dump();
  EXPECT_EQ(a, b);
}

TEST(Suites, PsiPhiAllPass) {
  SuiteConfig c;
  c.suite = "psi_phi";
  c.trials = 2;
  auto r = run_suite(c);
  EXPECT_GT(r.passed, 0);
  EXPECT_EQ(r.failed, 0) << to_json(r).dump(1);
}
