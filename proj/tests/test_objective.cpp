#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "boostfuse/objective.hpp"

using namespace boostfuse;

namespace {
double squared_loss(double y, double yhat) {
  return 0.5 * (y - yhat) * (y - yhat);
}
}  // namespace

TEST_CASE("loss_grad hand cases") {
  CHECK(loss_grad(3, 3).g == 0);
  CHECK(loss_grad(3, 3).h == 1);
  CHECK(loss_grad(0, 2).g == 2);
  CHECK(loss_grad(5, 1).g == -4);
  CHECK(loss_grad(5, 1).h == 1);
}

TEST_CASE("loss_grad matches central finite differences") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> d(-50, 50);
  // The loss is exactly quadratic, so the finite differences carry no
  // truncation error; a wide step keeps rounding amplification negligible.
  const double eps = 0.5;
  for (int it = 0; it < 1000; ++it) {
    const double y = d(rng);
    const double yhat = d(rng);
    const GradPair gp = loss_grad(y, yhat);
    const double g_fd =
        (squared_loss(y, yhat + eps) - squared_loss(y, yhat - eps)) / (2 * eps);
    const double h_fd = (squared_loss(y, yhat + eps) - 2 * squared_loss(y, yhat) +
                         squared_loss(y, yhat - eps)) /
                        (eps * eps);
    const double g_scale = std::max(1.0, std::abs(gp.g));
    CHECK(std::abs(gp.g - g_fd) / g_scale < 1e-6);
    CHECK(std::abs(gp.h - h_fd) < 1e-6);
  }
}

TEST_CASE("leaf_weight closed form") {
  CHECK(leaf_weight(0, 3, 1) == 0.0);
  CHECK(leaf_weight(2, 3, 1) == -0.5);
  CHECK(leaf_weight(-3, 3, 0) == 1.0);
  CHECK_THROWS_AS(leaf_weight(1, -2, 1), ArgumentError);
}

TEST_CASE("leaf_objective closed form") {
  CHECK(leaf_objective({{0, 1}}, 0, 0) == 0.0);
  CHECK(leaf_objective({{2, 3}, {-2, 3}}, 1, 0) == -1.0);
  CHECK(leaf_objective({{2, 3}, {-2, 3}}, 1, 0.5) == 0.0);
  CHECK_THROWS_AS(leaf_objective({{1, -2}}, 1, 0), ArgumentError);
}

TEST_CASE("split_gain closed form") {
  CHECK(split_gain(0, 5, 0, 7, 0.5, 0) == 0.0);
  CHECK(split_gain(2, 1, -2, 1, 0, 0) == 4.0);
  CHECK(split_gain(2, 1, -2, 1, 0, 5) == -1.0);
  CHECK_THROWS_AS(split_gain(1, -2, 1, 1, 0, 0), ArgumentError);
}

TEST_CASE("split_gain equals the leaf-objective difference") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> g(-10, 10);
  std::uniform_real_distribution<double> h(0.1, 10);
  for (int it = 0; it < 200; ++it) {
    const double gl = g(rng), gr = g(rng), hl = h(rng), hr = h(rng);
    const double mu = h(rng), gamma = h(rng);
    const double parent = leaf_objective({{gl + gr, hl + hr}}, mu, gamma);
    const double children = leaf_objective({{gl, hl}, {gr, hr}}, mu, gamma);
    const double expected = parent - children;
    CHECK(split_gain(gl, hl, gr, hr, mu, gamma) ==
          doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("leaf weight minimizes the regularized leaf objective") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> gd(-10, 10);
  std::uniform_real_distribution<double> hd(0.1, 10);
  auto objective = [](double w, double G, double H, double mu) {
    return 0.5 * (H + mu) * w * w + G * w;
  };
  for (int it = 0; it < 200; ++it) {
    const double G = gd(rng), H = hd(rng), mu = hd(rng);
    const double w = leaf_weight(G, H, mu);
    const double at_opt = objective(w, G, H, mu);
    CHECK(objective(w + 1e-3, G, H, mu) >= at_opt);
    CHECK(objective(w - 1e-3, G, H, mu) >= at_opt);
  }
}

TEST_CASE("TrainConfig bounds") {
  TrainConfig c;
  CHECK_NOTHROW(c.validate());
  c.learning_rate = 0;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c = {};
  c.l2_penalty = -1;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c = {};
  c.max_depth = 0;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c = {};
  c.min_samples_leaf = 0;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
}
