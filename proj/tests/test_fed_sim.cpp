#include <doctest.h>

#include <set>

#include "byzfed/fed_sim.hpp"
#include "byzfed/rng.hpp"

using namespace byzfed;

namespace {

FederationConfig small_fed(int l, std::vector<int> byz, int batches = 1,
                           std::uint64_t seed = 5) {
  FederationConfig fed;
  fed.num_nodes = l;
  fed.byzantine_ids = std::move(byz);
  fed.minibatches = batches;
  fed.seed = seed;
  return fed;
}

Matrix payload_for(int id) { return Matrix::Constant(2, 2, static_cast<double>(id)); }

}  // namespace

TEST_SUITE_BEGIN("fed_sim");

TEST_CASE("minibatch_index follows (theta-1)*rho + ell") {
  CHECK(minibatch_index(1, 1, 3, 2) == 1);
  CHECK(minibatch_index(2, 1, 3, 2) == 4);
  CHECK(minibatch_index(2, 3, 3, 2) == 6);  // theta = L~, ell = rho -> L
  CHECK_THROWS_AS(minibatch_index(0, 1, 3, 2), OutOfRangeError);
  CHECK_THROWS_AS(minibatch_index(3, 1, 3, 2), OutOfRangeError);
  CHECK_THROWS_AS(minibatch_index(1, 4, 3, 2), OutOfRangeError);
}

TEST_CASE("minibatches partition the node set exactly") {
  const int batches = 4, rho = 3;
  std::set<int> seen;
  for (int theta = 1; theta <= batches; ++theta)
    for (int ell = 1; ell <= rho; ++ell)
      CHECK(seen.insert(minibatch_index(theta, ell, rho, batches)).second);
  CHECK(seen.size() == 12);
  CHECK(*seen.begin() == 1);
  CHECK(*seen.rbegin() == 12);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(small_fed(4, {5}).validate(), ConfigError);
  CHECK_THROWS_AS(small_fed(4, {1, 1}).validate(), ConfigError);
  CHECK_THROWS_AS(small_fed(4, {1, 2}).validate(), ConfigError);  // half byzantine
  CHECK_THROWS_AS(small_fed(4, {}, 3).validate(), ConfigError);   // 3 does not divide 4
  CHECK_NOTHROW(small_fed(6, {2, 5}, 3).validate());
}

TEST_CASE("run_round with no byzantine nodes returns honest payloads in order") {
  const auto transcript = run_round(
      small_fed(3, {}), CenterState{}, [](int id) { return PayloadContent(payload_for(id)); },
      no_adversary());
  REQUIRE(transcript.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(transcript[i].node_id == i + 1);
    CHECK_FALSE(transcript[i].byzantine);
    CHECK((std::get<Matrix>(transcript[i].content) - payload_for(i + 1)).norm() == 0.0);
  }
}

TEST_CASE("copy-first-honest adversary mirrors node 1") {
  const Adversary copy_first = [](const AdversaryView& view) {
    return std::vector<PayloadContent>(view.byzantine_ids.size(),
                                       view.honest_payloads.front().content);
  };
  const auto transcript = run_round(
      small_fed(3, {2}), CenterState{}, [](int id) { return PayloadContent(payload_for(id)); },
      copy_first);
  CHECK(transcript[1].byzantine);
  CHECK((std::get<Matrix>(transcript[1].content) - payload_for(1)).norm() == 0.0);
}

TEST_CASE("substitution replaces exactly the byzantine slot") {
  const Matrix attack = Matrix::Constant(2, 2, -100.0);
  const Adversary ones = [&attack](const AdversaryView& view) {
    return std::vector<PayloadContent>(view.byzantine_ids.size(), PayloadContent(attack));
  };
  const auto transcript = run_round(
      small_fed(3, {2}), CenterState{}, [](int id) { return PayloadContent(payload_for(id)); },
      ones);
  CHECK((std::get<Matrix>(transcript[0].content) - payload_for(1)).norm() == 0.0);
  CHECK((std::get<Matrix>(transcript[1].content) - attack).norm() == 0.0);
  CHECK((std::get<Matrix>(transcript[2].content) - payload_for(3)).norm() == 0.0);
  CHECK(transcript[1].byzantine);
  CHECK_FALSE(transcript[0].byzantine);
}

TEST_CASE("the adversary observes every honest payload of the round") {
  bool checked = false;
  const Adversary instrumented = [&checked](const AdversaryView& view) {
    REQUIRE(view.honest_payloads.size() == 2);
    CHECK(view.honest_payloads[0].node_id == 1);
    CHECK(view.honest_payloads[1].node_id == 3);
    CHECK((std::get<Matrix>(view.honest_payloads[0].content) - payload_for(1)).norm() == 0.0);
    CHECK((std::get<Matrix>(view.honest_payloads[1].content) - payload_for(3)).norm() == 0.0);
    CHECK(view.state.round == 7);
    checked = true;
    return std::vector<PayloadContent>(view.byzantine_ids.size(),
                                       PayloadContent(Matrix::Zero(2, 2)));
  };
  run_round(small_fed(3, {2}), CenterState{Matrix(), 7},
            [](int id) { return PayloadContent(payload_for(id)); }, instrumented);
  CHECK(checked);
}

TEST_CASE("honest failures are tagged with the node id") {
  const HonestCompute failing = [](int id) -> PayloadContent {
    if (id == 2) throw std::runtime_error("boom");
    return payload_for(id);
  };
  try {
    run_round(small_fed(3, {}), CenterState{}, failing, no_adversary());
    FAIL("expected NodeComputeError");
  } catch (const NodeComputeError& e) {
    CHECK(e.node_id() == 2);
  }
}

TEST_CASE("shape mismatches are rejected") {
  const HonestCompute ragged = [](int id) -> PayloadContent {
    return Matrix::Zero(2, id);  // shapes differ across nodes
  };
  CHECK_THROWS_AS(run_round(small_fed(3, {}), CenterState{}, ragged, no_adversary()),
                  DimensionMismatchError);

  const Adversary wrong_shape = [](const AdversaryView& view) {
    return std::vector<PayloadContent>(view.byzantine_ids.size(),
                                       PayloadContent(Matrix::Zero(5, 5)));
  };
  CHECK_THROWS_AS(run_round(small_fed(3, {2}), CenterState{},
                            [](int id) { return PayloadContent(payload_for(id)); },
                            wrong_shape),
                  DimensionMismatchError);
}

TEST_CASE("fixed schedule returns the configured set every round") {
  const auto fed = small_fed(6, {2, 5}, 3);
  for (int round : {0, 1, 9})
    CHECK(byzantine_set_schedule(fed, ScheduleMode::Fixed, round) == std::vector<int>{2, 5});
}

TEST_CASE("per-round schedule keeps the size and replays deterministically") {
  const auto fed = small_fed(8, {3, 6}, 1, 77);
  const auto r0 = byzantine_set_schedule(fed, ScheduleMode::PerRound, 0);
  const auto r1 = byzantine_set_schedule(fed, ScheduleMode::PerRound, 1);
  CHECK(r0.size() == 2);
  CHECK(r1.size() == 2);
  CHECK(byzantine_set_schedule(fed, ScheduleMode::PerRound, 0) == r0);
  CHECK(byzantine_set_schedule(fed, ScheduleMode::PerRound, 1) == r1);
  for (int id : r0) {
    CHECK(id >= 1);
    CHECK(id <= 8);
  }
  bool any_differs = false;
  for (int round = 0; round < 10 && !any_differs; ++round)
    any_differs = byzantine_set_schedule(fed, ScheduleMode::PerRound, round) != r0;
  CHECK(any_differs);
}

TEST_CASE("transcripts are deterministic") {
  const Adversary adv = [](const AdversaryView& view) {
    return std::vector<PayloadContent>(view.byzantine_ids.size(),
                                       PayloadContent(Matrix::Constant(2, 2, -1.0)));
  };
  const auto fed = small_fed(5, {4}, 1, 3);
  const HonestCompute honest = [](int id) { return PayloadContent(payload_for(id)); };
  const auto a = run_round(fed, CenterState{}, honest, adv);
  const auto b = run_round(fed, CenterState{}, honest, adv);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].node_id == b[i].node_id);
    CHECK(a[i].byzantine == b[i].byzantine);
    CHECK((std::get<Matrix>(a[i].content) - std::get<Matrix>(b[i].content)).norm() == 0.0);
  }
}

TEST_SUITE_END();
