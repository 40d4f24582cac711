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

#include "sailcover/mcts_planner.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace sailcover {

namespace {

constexpr uint64_t kExpansionStream = 0xE4A9D;

void InitNode(TreeNode* node, const PlanningContext& ctx) {
  node->terminal =
      node->state.raster.CoverageFraction() >= ctx.config->eta;
  node->beyond_horizon = node->state.t >= ctx.horizon_end;
  if (node->terminal || node->beyond_horizon) return;
  node->untried = FeasibleCandidates(node->state, ctx, 1.0);
  node->dead_end = node->untried.empty();
  node->exhausted = node->dead_end;
}

bool AllOptionsExhausted(const TreeNode& node) {
  if (!node.untried.empty() || node.terminal || node.beyond_horizon) {
    return false;
  }
  return std::all_of(node.children.begin(), node.children.end(),
                     [](const auto& child) { return child->exhausted; });
}

int ResolveThreads(int requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

void PlannerConfig::Validate() const {
  if (iterations < 1 || rollout_workers < 1 || rollouts_per_worker < 1) {
    throw std::invalid_argument(
        "iterations, rollout_workers and rollouts_per_worker must be >= 1");
  }
  if (!(ucb_c > 0.0)) throw std::invalid_argument("UCB constant must be > 0");
  if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");
  if (!(delta_t > 0.0)) throw std::invalid_argument("delta_t must be > 0");
  if (!(eta > 0.0) || eta > 1.0) {
    throw std::invalid_argument("eta must lie in (0, 1]");
  }
  if (a_thres < 0.0) throw std::invalid_argument("a_thres must be >= 0");
  if (threads < 0) throw std::invalid_argument("threads must be >= 0");
  score.Validate();
}

int PlanningContext::StageAt(double t) const {
  return static_cast<int>(std::floor(t / forecast->delta_t));
}

const FlowField& PlanningContext::FieldAt(double t) const {
  return forecast->ForStage(StageAt(t));
}

double Ucb(double mean_score, long visits, long parent_visits, double c) {
  if (visits <= 0) return kUnvisited;
  if (parent_visits < 1) {
    throw std::invalid_argument("parent visits must be >= 1");
  }
  return mean_score +
         c * std::sqrt(std::log(static_cast<double>(parent_visits)) /
                       static_cast<double>(visits));
}

int SampleProportional(std::span<const double> weights, Rng& rng) {
  if (weights.empty()) throw std::invalid_argument("nothing to sample");
  double total = 0.0;
  for (double w : weights) total += std::max(w, 0.0);
  const int n = static_cast<int>(weights.size());
  if (!(total > 0.0)) return rng.Index(n);
  const double target = rng.Uniform() * total;
  double acc = 0.0;
  int last_positive = 0;
  for (int k = 0; k < n; ++k) {
    if (weights[k] <= 0.0) continue;
    acc += weights[k];
    last_positive = k;
    if (target < acc) return k;
  }
  return last_positive;
}

std::vector<Candidate> FeasibleCandidates(const PlanState& state,
                                          const PlanningContext& ctx,
                                          double p) {
  const FlowField& field = ctx.FieldAt(state.t);
  const PlannerConfig& cfg = *ctx.config;
  std::vector<Candidate> out;
  for (int a = 0; a < kActionCount; ++a) {
    const double time = TraversalTime(*ctx.catalog, state.cell, field, a,
                                      *ctx.polar, cfg.delta_t, cfg.v_floor);
    if (time < 0.0) continue;
    const ActionSpec& action = ctx.catalog->action(a);
    const Cell dest{state.cell.i + action.di, state.cell.j + action.dj};
    const HeuristicTerms h = HeuristicScore(state.raster, dest, time,
                                            *ctx.weights, cfg.a_thres, p);
    if (h.splits_uncovered) continue;
    out.push_back({a, dest, time, h.score});
  }
  return out;
}

PlanState ApplyCandidate(const PlanState& state, const Candidate& move) {
  PlanState next = state;
  next.t += move.time;
  next.cell = move.destination;
  next.raster.StampVisit(move.destination);
  return next;
}

std::unique_ptr<TreeNode> MakeRoot(PlanState state,
                                   const PlanningContext& ctx) {
  auto root = std::make_unique<TreeNode>(std::move(state));
  InitNode(root.get(), ctx);
  return root;
}

TreeNode* Select(TreeNode* root, double c) {
  TreeNode* node = root;
  while (true) {
    if (node->terminal || node->beyond_horizon || node->exhausted) return node;
    if (!node->untried.empty()) return node;
    TreeNode* best = nullptr;
    double best_value = -std::numeric_limits<double>::infinity();
    for (const auto& child : node->children) {
      if (child->exhausted) continue;
      const double value =
          Ucb(child->mean_score, child->visits, node->visits, c);
      if (best == nullptr || value > best_value ||
          (value == best_value && child->action_index < best->action_index)) {
        best = child.get();
        best_value = value;
      }
    }
    if (best == nullptr) return node;
    node = best;
  }
}

void MarkDeadEnd(TreeNode* node) {
  node->dead_end = true;
  node->exhausted = true;
  for (TreeNode* up = node->parent; up != nullptr; up = up->parent) {
    if (!AllOptionsExhausted(*up)) break;
    up->exhausted = true;
  }
}

TreeNode* Expand(TreeNode* node, const PlanningContext& ctx, Rng& rng) {
  if (!node->Expandable()) return node;
  std::vector<double> weights;
  weights.reserve(node->untried.size());
  for (const Candidate& c : node->untried) weights.push_back(c.heuristic);
  const int pick = SampleProportional(weights, rng);
  const Candidate move = node->untried[pick];
  node->untried.erase(node->untried.begin() + pick);

  auto child = std::make_unique<TreeNode>(ApplyCandidate(node->state, move));
  child->action_index = move.action_index;
  child->action_time = move.time;
  child->parent = node;
  InitNode(child.get(), ctx);
  TreeNode* raw = child.get();
  node->children.push_back(std::move(child));
  if (raw->dead_end) MarkDeadEnd(raw);
  return raw;
}

RolloutResult Rollout(const PlanState& start, const PlanningContext& ctx,
                      uint64_t seed, double p) {
  const PlannerConfig& cfg = *ctx.config;
  Rng rng(seed);
  RolloutResult result;
  PlanState state = start;
  int stage = ctx.StageAt(state.t);
  std::vector<double> weights;
  while (state.t < ctx.horizon_end &&
         state.raster.CoverageFraction() < cfg.eta) {
    const int now = ctx.StageAt(state.t);
    if (now != stage) {
      result.snapshots.push_back(TakeSnapshot(
          state.raster, state.t - ctx.root_time, cfg.score, cfg.a_thres));
      stage = now;
    }
    const std::vector<Candidate> moves = FeasibleCandidates(state, ctx, p);
    if (moves.empty()) break;
    int pick;
    if (rng.Uniform() < cfg.score.epsilon) {
      pick = rng.Index(static_cast<int>(moves.size()));
    } else {
      weights.clear();
      for (const Candidate& c : moves) weights.push_back(c.heuristic);
      pick = SampleProportional(weights, rng);
    }
    const Candidate& move = moves[pick];
    state.t += move.time;
    state.cell = move.destination;
    state.raster.StampVisit(move.destination);
    result.action_ids.push_back(move.action_index + 1);
  }
  result.snapshots.push_back(TakeSnapshot(
      state.raster, state.t - ctx.root_time, cfg.score, cfg.a_thres));
  result.score = RolloutReward(result.snapshots, cfg.score);
  return result;
}

double SimulateBatch(const PlanState& start, const PlanningContext& ctx,
                     std::span<const uint64_t> worker_seeds, int threads) {
  if (worker_seeds.empty()) throw std::invalid_argument("no rollout seeds");
  const ScoreParams& params = ctx.config->score;
  const int per_worker = ctx.config->rollouts_per_worker;
  const int workers = static_cast<int>(worker_seeds.size());
  std::vector<double> scores(static_cast<size_t>(workers) * per_worker, 0.0);

  const auto run_worker = [&](int w) {
    const uint64_t base = worker_seeds[w];
    const double p = params.p_min +
                     (params.p_max - params.p_min) * UnitAt({base, 0});
    for (int r = 0; r < per_worker; ++r) {
      scores[static_cast<size_t>(w) * per_worker + r] =
          Rollout(start, ctx, DeriveSeed({base, static_cast<uint64_t>(r + 1)}),
                  p)
              .score;
    }
  };

  const int pool = std::min(ResolveThreads(threads), workers);
  if (pool <= 1) {
    for (int w = 0; w < workers; ++w) run_worker(w);
  } else {
    std::vector<std::jthread> team;
    team.reserve(pool);
    for (int k = 0; k < pool; ++k) {
      team.emplace_back([&, k] {
        for (int w = k; w < workers; w += pool) run_worker(w);
      });
    }
  }

  double sum = 0.0;
  for (double s : scores) sum += s;
  return sum / static_cast<double>(scores.size());
}

void Backpropagate(TreeNode* leaf, double score) {
  for (TreeNode* node = leaf; node != nullptr; node = node->parent) {
    ++node->visits;
    node->mean_score += (score - node->mean_score) / node->visits;
  }
}

const TreeNode* BestChild(const TreeNode& root) {
  const TreeNode* best = nullptr;
  const auto better = [](const TreeNode& a, const TreeNode& b) {
    if (a.dead_end != b.dead_end) return !a.dead_end;
    if (a.exhausted != b.exhausted) return !a.exhausted;
    if (a.mean_score != b.mean_score) return a.mean_score > b.mean_score;
    if (a.visits != b.visits) return a.visits > b.visits;
    return a.action_index < b.action_index;
  };
  for (const auto& child : root.children) {
    if (best == nullptr || better(*child, *best)) best = child.get();
  }
  return best;
}

MctsPlanner::MctsPlanner(const GridSpec& grid, const PolarTable& polar,
                         const PlannerConfig& config)
    : catalog_(grid),
      polar_(polar),
      weights_(grid, config.score.position_distance_exponent),
      config_(config) {
  config_.Validate();
}

PhaseResult MctsPlanner::PlanPhase(EnvState& env, CoverageRaster& raster,
                                   const ForecastSequence& forecast) {
  PhaseResult result;
  const int phase_stage = env.stage_index();
  if (forecast.base_stage != phase_stage) {
    throw std::invalid_argument("forecast does not start at the current stage");
  }
  PlanningContext ctx;
  ctx.catalog = &catalog_;
  ctx.polar = &polar_;
  ctx.weights = &weights_;
  ctx.forecast = &forecast;
  ctx.config = &config_;
  ctx.root_time = env.t();
  ctx.horizon_end = (phase_stage + forecast.horizon() + 1) * config_.delta_t;

  std::unique_ptr<TreeNode> root =
      MakeRoot(PlanState{env.t(), env.vessel_cell(), raster}, ctx);
  std::vector<uint64_t> seeds(config_.rollout_workers);

  while (raster.CoverageFraction() < config_.eta &&
         env.stage_index() == phase_stage) {
    ctx.root_time = env.t();
    Rng rng(DeriveSeed({config_.seed, static_cast<uint64_t>(decisions_),
                        kExpansionStream}));
    for (int it = 0; it < config_.iterations && !root->exhausted; ++it) {
      TreeNode* leaf = Select(root.get(), config_.ucb_c);
      TreeNode* node = leaf->Expandable() ? Expand(leaf, ctx, rng) : leaf;
      for (int w = 0; w < config_.rollout_workers; ++w) {
        seeds[w] = DeriveSeed({config_.seed, static_cast<uint64_t>(decisions_),
                               static_cast<uint64_t>(it),
                               static_cast<uint64_t>(w)});
      }
      Backpropagate(node, SimulateBatch(node->state, ctx, seeds,
                                        config_.threads));
    }

    const TreeNode* best = BestChild(*root);
    if (root->dead_end || best == nullptr) {
      result.aborted = true;
      result.diagnostic = "dead end at cell (" +
                          std::to_string(env.vessel_cell().i) + "," +
                          std::to_string(env.vessel_cell().j) + ") t=" +
                          std::to_string(env.t());
      return result;
    }

    Decision decision;
    decision.stage = phase_stage;
    decision.index = decisions_++;
    decision.from = env.vessel_cell();
    decision.start_time = env.t();
    decision.root_visits = root->visits;
    for (const auto& child : root->children) {
      decision.root_children.push_back({child->action_id(), child->visits,
                                        child->mean_score, child->dead_end});
    }

    const TraversalResult move =
        EvaluateAction(catalog_, env.vessel_cell(), env.field(),
                       best->action_index, polar_, config_.delta_t,
                       config_.v_floor);
    if (!move.feasible) {
      result.aborted = true;
      result.diagnostic = "committed move infeasible in the true field";
      return result;
    }
    const Cell dest[] = {move.destination};
    decision.splits_uncovered =
        WouldSplitUncovered(raster, dest, config_.a_thres);
    decision.action_id = best->action_id();
    decision.to = move.destination;
    decision.duration = move.total_time;

    env.ExecuteMove(move.destination, move.total_time);
    raster.StampVisit(move.destination);
    decision.coverage_after = raster.CoverageFraction();
    result.decisions.push_back(std::move(decision));

    // Promote the committed subtree.
    auto it = std::find_if(
        root->children.begin(), root->children.end(),
        [&](const auto& child) { return child.get() == best; });
    std::unique_ptr<TreeNode> next = std::move(*it);
    next->parent = nullptr;
    root = std::move(next);
    if (root->state.t != env.t() || root->state.cell != env.vessel_cell() ||
        root->state.raster.covered_pixels() != raster.covered_pixels()) {
      throw std::logic_error("promoted node diverged from the environment");
    }
  }
  return result;
}

}  // namespace sailcover
