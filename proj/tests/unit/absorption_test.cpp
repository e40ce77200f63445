#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "interpnet/absorption.hpp"
#include "interpnet/errors.hpp"

using namespace interpnet;

namespace {

Dataset staircase_fit() { return Dataset::from_rows({{0.1}, {0.2}, {0.5}}, {{2.0}, {1.0}, {1.0}}); }
Dataset staircase_external() { return Dataset::from_rows({{0.35}, {0.75}, {0.95}}, {{1.0}, {1.0}, {0.0}}); }

Dataset four_external() {
  const auto& xs = fixtures::four_points_external();
  return Dataset::from_rows(xs, {{1.0}, {0.0}, {0.0}});
}

}  // namespace

// Worked by hand: with a = 5 the first TNN is a step from 2 down to 1 around
// x = 0.15, so only x = 0.95 (target 0) misses by more than 0.5. Once it is
// absorbed the new step sits at 0.725 and x = 0.75 predicts about 0.37, so
// it is taken in the second round. Then everything is within tolerance.
TEST_CASE("TNN absorption takes two rounds on the staircase") {
  AbsorptionConfig cfg;
  cfg.epsilon = 0.5;
  const AbsorptionResult r = absorb_loop(tnn_builder(0.5), staircase_fit(), staircase_external(), cfg);
  CHECK(r.report.converged);
  REQUIRE(r.report.rounds.size() == 2);
  CHECK(r.report.rounds[0].absorbed == std::vector<std::size_t>{2});
  CHECK(r.report.rounds[1].absorbed == std::vector<std::size_t>{1});
  CHECK(r.report.rounds[1].fitting_size_after == 5);
  CHECK(r.report.total_absorbed() == 2);
  CHECK(r.fitting.size() == 5);
  // External indices 0..2 clash with the fitting ones and are shifted by 3.
  CHECK(r.fitting[3].index == 5);
  CHECK(r.fitting[4].index == 4);
  CHECK(r.report.initial_max_error == doctest::Approx(1.0).epsilon(0.01));
  CHECK(r.report.rounds[1].external_max_error_after < 0.5);
}

TEST_CASE("tnn_builder raises sharpness to meet half the tolerance") {
  const Model m = tnn_builder(0.01)(staircase_fit());
  const TnnModel& t = std::get<TnnModel>(m);
  CHECK(t.sharpness == doctest::Approx(std::log(2.0 * 4.0 / 0.005 - 1.0)));
  CHECK(tnn_error_bound(t) <= 0.005 * (1 + 1e-12));
  const Model loose = tnn_builder(100.0)(staircase_fit());
  CHECK(std::get<TnnModel>(loose).sharpness == 5.0);
  CHECK_THROWS_AS(tnn_builder(0.0), InvalidTolerance);
}

TEST_CASE("SQANN absorption keeps old samples exact") {
  AbsorptionConfig cfg;
  cfg.epsilon = 0.1;
  cfg.criterion = OodCriterion::ErrorOrWeakActivation;
  const Dataset fit = fixtures::four_points();
  const Dataset ext = four_external();
  const Model before = sqann_builder()(fit);
  const AbsorptionResult r = absorb_loop(sqann_builder(), fit, ext, cfg);
  CHECK(r.report.converged);
  const CfCheck c = cf_check(before, r.model, fit, cfg.epsilon);
  CHECK(c.ok);
  CHECK(c.max_error == 0.0);
  for (const Sample& s : ext) {
    CHECK(sample_error(r.model, s) <= cfg.epsilon);
  }
}

TEST_CASE("find_ood never flags the fitting set itself") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Dataset d = fixtures::random_cloud(rng, 30, 2, trial % 2 == 0);
    const Model m = sqann_builder()(d);
    AbsorptionConfig cfg;
    cfg.epsilon = 1e-12;
    cfg.criterion = OodCriterion::ErrorOrWeakActivation;
    CHECK(find_ood(m, d, cfg).empty());
    const Dataset line = fixtures::random_line(rng, 25, 3.0);
    const Model t = tnn_builder(0.2)(line);
    AbsorptionConfig tc;
    tc.epsilon = 0.2;
    CHECK(find_ood(t, line, tc).empty());
  }
}

TEST_CASE("weak-activation criterion flags correct but weak predictions") {
  const Model m = sqann_builder()(fixtures::four_points());
  // Target 1 is predicted exactly by interpolation, yet the activation is weak.
  const Dataset ext = Dataset::from_rows({fixtures::four_points_external()[0]}, {{1.0}});
  AbsorptionConfig cfg;
  CHECK(find_ood(m, ext, cfg).empty());
  cfg.criterion = OodCriterion::ErrorOrWeakActivation;
  CHECK(find_ood(m, ext, cfg) == std::vector<std::size_t>{0});
}

TEST_CASE("property: converged TNN absorption leaves every error below epsilon, no forgetting") {
  Rng rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const Dataset fit = fixtures::random_line(rng, 1 + static_cast<std::size_t>(rng.uniform(0.0, 20.0)), 2.0);
    const Dataset ext = fixtures::random_line(rng, 1 + static_cast<std::size_t>(rng.uniform(0.0, 20.0)), 2.0, 1000);
    std::set<double> xs;
    for (const Sample& s : fit) {
      xs.insert(s.x[0]);
    }
    bool overlap = false;
    for (const Sample& s : ext) {
      overlap = overlap || xs.count(s.x[0]);
    }
    if (overlap) {
      continue;
    }
    const double eps = rng.uniform(0.05, 0.5);
    AbsorptionConfig cfg;
    cfg.epsilon = eps;
    const ModelBuilder build = tnn_builder(eps);
    const AbsorptionResult r = absorb_loop(build, fit, ext, cfg);
    REQUIRE(r.report.converged);
    for (const Sample& s : ext) {
      CHECK(sample_error(r.model, s) <= eps);
    }
    Model prev = build(fit);
    Dataset prev_fit = fit;
    Dataset grown = fit;
    for (const AbsorptionRound& round : r.report.rounds) {
      std::vector<Sample> added;
      for (std::size_t i : round.absorbed) {
        added.push_back(ext[i]);
      }
      grown = grown.concat(Dataset(std::move(added)));
      const Model next = build(grown);
      CHECK(cf_check(prev, next, prev_fit, eps).ok);
      prev = next;
      prev_fit = grown;
    }
  }
}

TEST_CASE("property: SQANN absorption never forgets") {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Dataset fit = fixtures::random_cloud(rng, 25, 2, false);
    const Dataset ext = fixtures::random_cloud(rng, 25, 2, false, 100);
    AbsorptionConfig cfg;
    cfg.epsilon = 0.05;
    cfg.criterion = trial % 2 ? OodCriterion::ErrorOrWeakActivation : OodCriterion::ErrorOnly;
    const Model before = sqann_builder()(fit);
    const AbsorptionResult r = absorb_loop(sqann_builder(), fit, ext, cfg);
    CHECK(r.report.converged);
    CHECK(cf_check(before, r.model, fit, cfg.epsilon).ok);
    for (const Sample& s : r.fitting) {
      CHECK(sample_error(r.model, s) == 0.0);
    }
  }
}

TEST_CASE("cf_check refuses models not built on the old samples") {
  const Model small = sqann_builder()(fixtures::four_points().head(2));
  const Model big = sqann_builder()(fixtures::four_points());
  CHECK_THROWS_AS(cf_check(big, small, fixtures::four_points().head(2), 0.1), InvalidArgument);
  CHECK_THROWS_AS(cf_check(small, small, fixtures::four_points(), 0.1), InvalidArgument);
  CHECK(cf_check(small, big, fixtures::four_points().head(2), 0.1).ok);
}

TEST_CASE("max_rounds stops the loop unconverged") {
  AbsorptionConfig cfg;
  cfg.epsilon = 0.5;
  cfg.max_rounds = 1;
  const AbsorptionResult r = absorb_loop(tnn_builder(0.5), staircase_fit(), staircase_external(), cfg);
  CHECK_FALSE(r.report.converged);
  CHECK(r.report.rounds.size() == 1);
  cfg.max_rounds = 0;
  CHECK_THROWS_AS(absorb_loop(tnn_builder(0.5), staircase_fit(), staircase_external(), cfg), InvalidArgument);
}

TEST_CASE("keep_initial answers with the more strongly activated model") {
  AbsorptionConfig cfg;
  cfg.keep_initial = true;
  cfg.criterion = OodCriterion::ErrorOrWeakActivation;
  const AbsorptionResult r = absorb_loop(sqann_builder(), fixtures::four_points(), four_external(), cfg);
  REQUIRE(r.ensemble.has_value());
  for (const Sample& s : fixtures::four_points()) {
    CHECK(r.ensemble->predict(s.x) == s.y);
  }
}

TEST_CASE("report CSV has a round zero row") {
  AbsorptionConfig cfg;
  cfg.epsilon = 0.5;
  const AbsorptionResult r = absorb_loop(tnn_builder(0.5), staircase_fit(), staircase_external(), cfg);
  std::ostringstream os;
  r.report.write_csv(os);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "round,absorbed,fitting_size,external_max_error,external_mse");
  std::getline(in, line);
  CHECK(line.rfind("0,0,3,", 0) == 0);
  std::getline(in, line);
  CHECK(line.rfind("1,1,4,", 0) == 0);
  std::getline(in, line);
  CHECK(line.rfind("2,1,5,", 0) == 0);
  CHECK_FALSE(std::getline(in, line));
}
