#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include "celkit/embeddings.hpp"
#include "celkit/errors.hpp"
#include "celkit/heuristics.hpp"
#include "celkit/kb.hpp"
#include "celkit/qnet.hpp"
#include "celkit/refinement.hpp"
#include "celkit/rng.hpp"
#include "celkit/search.hpp"

namespace celkit {

// One step of a refinement trajectory.
struct Transition {
    Concept parent;
    Concept child;
    StateMatrix state;  // Psi(R(parent), R(child), E+, E-)
    double reward = 0.0;
    std::optional<double> target;  // discounted return once the episode ends
};

// Bounded FIFO of training pairs (state, target).
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity = 8192) : capacity_(capacity) {}

    void push(StateMatrix state, double target) {
        if (entries_.size() == capacity_) entries_.pop_front();
        entries_.emplace_back(std::move(state), target);
    }

    std::size_t size() const { return entries_.size(); }
    std::size_t capacity() const { return capacity_; }
    const std::pair<StateMatrix, double>& operator[](std::size_t i) const { return entries_[i]; }

private:
    std::size_t capacity_;
    std::deque<std::pair<StateMatrix, double>> entries_;
};

struct TrainingConfig {
    int episodes = 100;          // M
    int steps_per_episode = 10;  // T
    int update_every = 5;        // U
    double gamma = 0.99;
    double epsilon_start = 1.0;
    double epsilon_decay = 0.01;  // linear, per episode
    double epsilon_floor = 0.01;
    double learning_rate = 0.01;
    int batch_size = 512;
    double max_reward = 10.0;
    int hidden = 256;
    int refinement_max_length = 12;
    std::size_t replay_capacity = 8192;
    std::uint64_t seed = 0;
};

// Goal transitions earn max_reward; everything else earns the CELOE
// heuristic of the move (with the CELOE accuracy as its quality measure).
inline double reward(const KnowledgeBase& kb, const LearningProblem& lp, const Concept& parent,
                     const Concept& child, const HeuristicParams& params, double max_reward) {
    IndividualSet child_set = kb.retrieve(child);
    if (f_measure(lp, child_set) == 1.0) return max_reward;
    IndividualSet everyone = kb.all_individuals();
    double acc_parent = accuracy_celoe(lp, kb.retrieve(parent), everyone, params.t);
    double acc_child = accuracy_celoe(lp, child_set, everyone, params.t);
    return heuristic_celoe(acc_parent, acc_child, child.length(), params);
}

// Discounted suffix sums, right to left: y_i = r_i + gamma * y_{i+1}.
inline std::vector<double> discounted_targets(const std::vector<double>& rewards, double gamma) {
    std::vector<double> targets(rewards.size());
    double acc = 0.0;
    for (std::size_t i = rewards.size(); i > 0; --i) {
        acc = rewards[i - 1] + gamma * acc;
        targets[i - 1] = acc;
    }
    return targets;
}

struct TrainResult {
    QNetworkParams params;
    std::vector<std::pair<int, double>> loss_history;  // (episode, minibatch loss)
    std::size_t transitions_stored = 0;
};

// Deep Q-learning over refinement trajectories: per episode (cycling through
// the learning problems round-robin) walk T epsilon-greedy refinement steps
// from Thing, convert the reward tail into discounted targets, bank them in
// the replay buffer, and regress the network on a sampled minibatch every
// U-th episode. Deterministic under cfg.seed.
inline TrainResult train(const KnowledgeBase& kb, const EmbeddingTable& table,
                         const std::vector<LearningProblem>& lps, const TrainingConfig& cfg,
                         const HeuristicParams& heuristic_params = {}) {
    if (lps.empty()) throw InvalidProblemError("training requires at least one learning problem");
    if (table.size() != kb.individual_count())
        throw InvalidProblemError("embedding table does not cover the knowledge base");

    TrainResult result;
    result.params = init_network(table.dimension(), cfg.hidden, DetRng::derive(cfg.seed, 1));
    AdamState adam = AdamState::for_params(result.params);
    DetRng rng(DetRng::derive(cfg.seed, 2));
    ReplayBuffer buffer(cfg.replay_capacity);

    const IndividualSet everyone = kb.all_individuals();
    RefinementConfig rc{.max_length = cfg.refinement_max_length, .dedup = true};

    double epsilon = cfg.epsilon_start;
    for (int episode = 1; episode <= cfg.episodes; ++episode) {
        const LearningProblem& lp = lps[static_cast<std::size_t>(episode - 1) % lps.size()];

        Concept current = Concept::top();
        IndividualSet current_set = kb.retrieve(current);
        std::vector<Transition> trajectory;

        for (int step = 0; step < cfg.steps_per_episode; ++step) {
            std::vector<Concept> candidates = refine_bounded(kb.signature(), current, rc);
            if (candidates.empty()) break;  // episode truncates

            std::size_t pick;
            if (rng.uniform() < epsilon) {
                pick = rng.index(candidates.size());
            } else {
                std::vector<StateMatrix> states;
                states.reserve(candidates.size());
                for (const auto& cand : candidates)
                    states.push_back(state_matrix(table, current_set, kb.retrieve(cand), lp));
                Eigen::VectorXd values = qnet_forward_batch(result.params, states);
                Eigen::Index best = 0;
                values.maxCoeff(&best);
                pick = static_cast<std::size_t>(best);
            }

            Transition tr;
            tr.parent = current;
            tr.child = candidates[pick];
            IndividualSet child_set = kb.retrieve(tr.child);
            tr.state = state_matrix(table, current_set, child_set, lp);
            tr.reward = reward(kb, lp, tr.parent, tr.child, heuristic_params, cfg.max_reward);
            trajectory.push_back(std::move(tr));

            current = candidates[pick];
            current_set = std::move(child_set);
        }

        std::vector<double> rewards;
        rewards.reserve(trajectory.size());
        for (const auto& tr : trajectory) rewards.push_back(tr.reward);
        std::vector<double> targets = discounted_targets(rewards, cfg.gamma);
        for (std::size_t i = 0; i < trajectory.size(); ++i) {
            trajectory[i].target = targets[i];
            buffer.push(std::move(trajectory[i].state), targets[i]);
        }
        result.transitions_stored += trajectory.size();

        epsilon = std::max(cfg.epsilon_floor, epsilon - cfg.epsilon_decay);

        if (episode % cfg.update_every == 0 && buffer.size() > 0) {
            const std::size_t k = std::min<std::size_t>(cfg.batch_size, buffer.size());
            std::vector<std::size_t> chosen = rng.sample_without_replacement(buffer.size(), k);
            std::vector<StateMatrix> states;
            states.reserve(k);
            Eigen::VectorXd y(static_cast<Eigen::Index>(k));
            for (std::size_t i = 0; i < k; ++i) {
                states.push_back(buffer[chosen[i]].first);
                y(static_cast<Eigen::Index>(i)) = buffer[chosen[i]].second;
            }
            auto [loss, grads] = loss_and_gradients(result.params, states, y);
            adam_step(result.params, grads, adam, cfg.learning_rate);
            result.loss_history.emplace_back(episode, loss);
        }
    }
    return result;
}

// Search scorer backed by a trained network: one batched forward values all
// refinements of a node.
class DrillScorer : public Scorer {
public:
    DrillScorer(QNetworkParams params, const EmbeddingTable& table)
        : params_(std::move(params)), table_(&table) {
        if (params_.d != table_->dimension())
            throw ShapeMismatchError("checkpoint dimension does not match the embedding table");
    }

    std::string name() const override { return "drill"; }

    void begin_search(const KnowledgeBase& kb, const LearningProblem& lp, std::uint64_t) override {
        (void)kb;
        lp_ = &lp;
    }

    std::vector<double> score(const SearchNode& parent,
                              const std::vector<CandidateEval>& children) override {
        std::vector<StateMatrix> states;
        states.reserve(children.size());
        for (const auto& c : children)
            states.push_back(state_matrix(*table_, parent.retrieved, c.retrieved, *lp_));
        Eigen::VectorXd values = qnet_forward_batch(params_, states);
        return std::vector<double>(values.data(), values.data() + values.size());
    }

private:
    QNetworkParams params_;
    const EmbeddingTable* table_;
    const LearningProblem* lp_ = nullptr;
};

}  // namespace celkit
