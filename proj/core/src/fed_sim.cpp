#include "byzfed/fed_sim.hpp"

#include <algorithm>
#include <set>

#include "byzfed/rng.hpp"

namespace byzfed {

namespace {

bool same_shape(const PayloadContent& a, const PayloadContent& b) {
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<double>(a)) return true;
  const auto& ma = std::get<Matrix>(a);
  const auto& mb = std::get<Matrix>(b);
  return ma.rows() == mb.rows() && ma.cols() == mb.cols();
}

}  // namespace

void FederationConfig::validate() const {
  if (num_nodes < 1) throw ConfigError("FederationConfig: need at least one node");
  if (minibatches < 1 || num_nodes % minibatches != 0)
    throw ConfigError("FederationConfig: minibatches must divide num_nodes");
  std::set<int> seen;
  for (int id : byzantine_ids) {
    if (id < 1 || id > num_nodes)
      throw ConfigError("FederationConfig: byzantine id out of range");
    if (!seen.insert(id).second)
      throw ConfigError("FederationConfig: duplicate byzantine id");
  }
  if (2 * static_cast<int>(byzantine_ids.size()) >= num_nodes)
    throw ConfigError("FederationConfig: byzantine fraction must stay below 1/2");
}

Adversary no_adversary() {
  return [](const AdversaryView&) -> std::vector<PayloadContent> {
    throw ConfigError("no_adversary invoked with a nonempty byzantine set");
  };
}

int minibatch_index(int theta, int ell, int rho, int num_batches) {
  if (rho < 1 || num_batches < 1)
    throw OutOfRangeError("minibatch_index: rho and num_batches must be >= 1");
  if (theta < 1 || theta > num_batches)
    throw OutOfRangeError("minibatch_index: batch index out of range");
  if (ell < 1 || ell > rho)
    throw OutOfRangeError("minibatch_index: within-batch index out of range");
  return (theta - 1) * rho + ell;
}

std::vector<int> byzantine_set_schedule(const FederationConfig& cfg, ScheduleMode mode,
                                        int round) {
  cfg.validate();
  if (mode == ScheduleMode::Fixed) {
    std::vector<int> ids = cfg.byzantine_ids;
    std::sort(ids.begin(), ids.end());
    return ids;
  }
  // Per-round: partial Fisher-Yates over [1, L] from a (seed, round) stream.
  const int count = cfg.num_byzantine();
  std::vector<int> pool(cfg.num_nodes);
  for (int i = 0; i < cfg.num_nodes; ++i) pool[i] = i + 1;
  Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(round)));
  std::vector<int> picked;
  picked.reserve(count);
  for (int i = 0; i < count; ++i) {
    const auto j = i + static_cast<int>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
    picked.push_back(pool[i]);
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

std::vector<RoundPayload> run_round(const FederationConfig& cfg, const CenterState& state,
                                    const HonestCompute& honest_compute,
                                    const Adversary& adversary, ScheduleMode mode) {
  cfg.validate();
  const std::vector<int> byz = byzantine_set_schedule(cfg, mode, state.round);

  std::vector<RoundPayload> honest;
  honest.reserve(cfg.num_nodes - byz.size());
  for (int id = 1; id <= cfg.num_nodes; ++id) {
    if (std::binary_search(byz.begin(), byz.end(), id)) continue;
    try {
      honest.push_back({id, honest_compute(id), false});
    } catch (const std::exception& e) {
      throw NodeComputeError(id, e.what());
    }
  }
  for (std::size_t i = 1; i < honest.size(); ++i)
    if (!same_shape(honest[0].content, honest[i].content))
      throw DimensionMismatchError("run_round: honest payload shapes differ");

  std::vector<RoundPayload> transcript;
  transcript.reserve(cfg.num_nodes);
  if (!byz.empty()) {
    const AdversaryView view{honest, byz, state,
                             derive_seed(cfg.seed, 0xADu, static_cast<std::uint64_t>(state.round))};
    std::vector<PayloadContent> corrupted = adversary(view);
    if (corrupted.size() != byz.size())
      throw ConfigError("run_round: adversary returned wrong payload count");
    if (!honest.empty())
      for (const auto& c : corrupted)
        if (!same_shape(honest[0].content, c))
          throw DimensionMismatchError("run_round: byzantine payload shape differs");

    std::size_t hi = 0, bi = 0;
    for (int id = 1; id <= cfg.num_nodes; ++id) {
      if (bi < byz.size() && byz[bi] == id) {
        transcript.push_back({id, std::move(corrupted[bi]), true});
        ++bi;
      } else {
        transcript.push_back(std::move(honest[hi]));
        ++hi;
      }
    }
  } else {
    transcript = std::move(honest);
  }
  return transcript;
}

}  // namespace byzfed
