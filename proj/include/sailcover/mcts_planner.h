/*
 * Copyright 2026 The Sailcover Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Phase-wise Monte Carlo tree search. One tree lives for one stage of the
// true environment: every decision runs a fixed number of
// select/expand/simulate/backpropagate iterations, commits the root child
// with the best mean score, executes it for real and promotes its subtree.
// Rollouts look ahead through the forecast stages and are scored by the
// staged reward in scoring.h.

#ifndef SAILCOVER_MCTS_PLANNER_H_
#define SAILCOVER_MCTS_PLANNER_H_

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sailcover/coverage_state.h"
#include "sailcover/env_model.h"
#include "sailcover/random.h"
#include "sailcover/sailing_kinematics.h"
#include "sailcover/scoring.h"

namespace sailcover {

struct PlannerConfig {
  int iterations = 64;
  int rollout_workers = 96;
  int rollouts_per_worker = 3;
  double ucb_c = 2.5;
  int horizon = 1;  // forecast stages K
  double delta_t = 300.0;
  double eta = 0.96;
  double a_thres = 3000.0;  // m^2
  double v_floor = kDefaultSpeedFloor;
  uint64_t seed = 0;
  int threads = 1;  // rollout threads; 0 picks the hardware concurrency
  ScoreParams score;

  void Validate() const;
};

// What a tree node or a rollout carries between moves.
struct PlanState {
  double t = 0.0;
  Cell cell;
  CoverageRaster raster;
};

struct Candidate {
  int action_index = 0;
  Cell destination;
  double time = 0.0;
  double heuristic = 0.0;
};

struct TreeNode {
  explicit TreeNode(PlanState s) : state(std::move(s)) {}

  PlanState state;
  int action_index = -1;  // incoming move, -1 at the root
  double action_time = 0.0;
  TreeNode* parent = nullptr;
  std::vector<std::unique_ptr<TreeNode>> children;
  std::vector<Candidate> untried;
  bool terminal = false;        // coverage target reached
  bool beyond_horizon = false;  // past the last forecast stage
  bool dead_end = false;        // no feasible, non-splitting move at all
  // Dead end, or every move tried and every child subtree exhausted.
  // Selection skips exhausted subtrees.
  bool exhausted = false;
  long visits = 0;
  double mean_score = 0.0;

  int action_id() const { return action_index + 1; }
  bool Expandable() const {
    return !terminal && !beyond_horizon && !dead_end && !untried.empty();
  }
};

// Read-only inputs shared by every node and rollout of one tree.
struct PlanningContext {
  const ActionCatalog* catalog = nullptr;
  const PolarTable* polar = nullptr;
  const PositionWeights* weights = nullptr;
  const ForecastSequence* forecast = nullptr;
  const PlannerConfig* config = nullptr;
  double root_time = 0.0;    // origin of elapsed time in rollout rewards
  double horizon_end = 0.0;  // end of the last forecast stage

  int StageAt(double t) const;
  const FlowField& FieldAt(double t) const;
};

inline constexpr double kUnvisited = std::numeric_limits<double>::infinity();

// Mean plus exploration bonus; +infinity for an unvisited node.
double Ucb(double mean_score, long visits, long parent_visits, double c);

// Index drawn with probability weight / sum; uniform when every weight is 0.
int SampleProportional(std::span<const double> weights, Rng& rng);

// Feasible moves from 'state' under the field of its stage, with heuristic
// scores at regularity exponent 'p'. Moves that would split the uncovered
// region are dropped.
std::vector<Candidate> FeasibleCandidates(const PlanState& state,
                                          const PlanningContext& ctx,
                                          double p);

PlanState ApplyCandidate(const PlanState& state, const Candidate& move);

std::unique_ptr<TreeNode> MakeRoot(PlanState state, const PlanningContext& ctx);

// Descends by UCB (ties to the smaller action id) until a node that can be
// expanded, a terminal node, an exhausted node, or a node past the horizon.
// Exhausted subtrees are skipped.
TreeNode* Select(TreeNode* root, double c);

// Draws one untried move with probability proportional to its heuristic and
// attaches the resulting child. Returns the child.
TreeNode* Expand(TreeNode* node, const PlanningContext& ctx, Rng& rng);

// Marks 'node' a dead end and flags as exhausted every ancestor whose
// options are all used up.
void MarkDeadEnd(TreeNode* node);

struct RolloutResult {
  double score = 0.0;
  std::vector<int> action_ids;
  std::vector<StageSnapshot> snapshots;
};

// Epsilon-greedy simulation from 'start' until the horizon, the coverage
// target, or a dead end, using the forecast field of each simulated stage.
RolloutResult Rollout(const PlanState& start, const PlanningContext& ctx,
                      uint64_t seed, double p);

// Runs rollouts_per_worker rollouts for every worker seed and returns their
// mean. Each worker draws its own regularity exponent. The result depends
// only on the seeds, not on 'threads'.
double SimulateBatch(const PlanState& start, const PlanningContext& ctx,
                     std::span<const uint64_t> worker_seeds, int threads);

// Adds one visit and folds 'score' into the running mean of 'leaf' and all
// its ancestors.
void Backpropagate(TreeNode* leaf, double score);

struct ChildStat {
  int action_id = 0;
  long visits = 0;
  double mean_score = 0.0;
  bool dead_end = false;
};

struct Decision {
  int stage = 0;
  int index = 0;  // decision counter over the whole mission
  int action_id = 0;
  Cell from;
  Cell to;
  double start_time = 0.0;
  double duration = 0.0;
  double coverage_after = 0.0;  // fraction
  long root_visits = 0;         // after this decision's iterations
  std::vector<ChildStat> root_children;
  bool splits_uncovered = false;  // audit of the committed move
};

struct PhaseResult {
  std::vector<Decision> decisions;
  bool aborted = false;
  std::string diagnostic;
};

// Best root child: highest mean score, then more visits, then smaller
// action id. Dead ends lose to any other child and exhausted subtrees lose
// to live ones.
const TreeNode* BestChild(const TreeNode& root);

class MctsPlanner {
 public:
  MctsPlanner(const GridSpec& grid, const PolarTable& polar,
              const PlannerConfig& config);

  const PlannerConfig& config() const { return config_; }
  const ActionCatalog& catalog() const { return catalog_; }
  const PositionWeights& weights() const { return weights_; }

  // Plans and executes moves until the environment leaves the stage it was
  // in on entry or the coverage target is met. 'forecast' must start at the
  // environment's current stage.
  PhaseResult PlanPhase(EnvState& env, CoverageRaster& raster,
                        const ForecastSequence& forecast);

 private:
  ActionCatalog catalog_;
  PolarTable polar_;
  PositionWeights weights_;
  PlannerConfig config_;
  int decisions_ = 0;
};

}  // namespace sailcover

#endif  // SAILCOVER_MCTS_PLANNER_H_
