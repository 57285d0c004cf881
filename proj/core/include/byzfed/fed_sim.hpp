#pragma once

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "byzfed/linalg.hpp"

namespace byzfed {

/// Static description of one simulated federation. Node ids are 1-based
/// throughout, matching the (vartheta, ell) -> (vartheta-1)*rho + ell indexing.
struct FederationConfig {
  int num_nodes = 1;               // L
  std::vector<int> byzantine_ids;  // sorted, unique, subset of [1, L]
  int minibatches = 1;             // L~ ; must divide L
  std::uint64_t seed = 0;

  int batch_size() const { return num_nodes / minibatches; }  // rho
  int num_byzantine() const { return static_cast<int>(byzantine_ids.size()); }
  void validate() const;
};

using PayloadContent = std::variant<Matrix, double>;

struct RoundPayload {
  int node_id = 0;
  PayloadContent content;
  bool byzantine = false;
};

/// Center-side snapshot handed to the adversary along with the honest
/// payloads: the omniscient attacker sees everything produced this round.
struct CenterState {
  Matrix iterate;  // current center iterate; empty when not meaningful
  int round = 0;
};

struct AdversaryView {
  const std::vector<RoundPayload>& honest_payloads;  // good nodes, ascending id
  const std::vector<int>& byzantine_ids;             // this round's corrupted nodes
  const CenterState& state;
  std::uint64_t seed = 0;  // per-round stream for randomized attacks
};

/// Produces one payload per Byzantine node of the round, ordered by ascending
/// node id. Runs strictly after every honest payload has been computed.
using Adversary = std::function<std::vector<PayloadContent>(const AdversaryView&)>;
using HonestCompute = std::function<PayloadContent(int node_id)>;

/// Adversary placeholder for runs with an empty Byzantine set; throws if it is
/// ever invoked.
Adversary no_adversary();

enum class ScheduleMode { Fixed, PerRound };

/// Global node index of the ell-th node in minibatch vartheta:
/// (vartheta - 1) * rho + ell, all 1-based.
int minibatch_index(int theta, int ell, int rho, int num_batches);

/// Fixed mode returns cfg.byzantine_ids every round; per-round mode draws a
/// fresh subset of the same size from a stream derived from (cfg.seed, round).
std::vector<int> byzantine_set_schedule(const FederationConfig& cfg, ScheduleMode mode,
                                        int round);

/// Executes one synchronous round: honest payloads first (errors tagged with
/// the node id), then the adversary for the round's Byzantine set. Returns the
/// full transcript ordered by node id.
std::vector<RoundPayload> run_round(const FederationConfig& cfg, const CenterState& state,
                                    const HonestCompute& honest_compute,
                                    const Adversary& adversary,
                                    ScheduleMode mode = ScheduleMode::Fixed);

}  // namespace byzfed
