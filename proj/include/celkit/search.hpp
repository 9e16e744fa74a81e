#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <deque>
#include <memory>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "celkit/concept.hpp"
#include "celkit/errors.hpp"
#include "celkit/heuristics.hpp"
#include "celkit/individual_set.hpp"
#include "celkit/kb.hpp"
#include "celkit/refinement.hpp"
#include "celkit/rng.hpp"

namespace celkit {

enum class QualityMetric { FMeasure, AccuracySimple, AccuracyCeloe };

struct SearchConfig {
    double max_runtime_seconds = 3.0;
    long max_expressions_tested = 100000;
    QualityMetric quality_metric = QualityMetric::FMeasure;
    int refinement_max_length = 12;
    HeuristicParams heuristic_params;
    std::uint64_t seed = 0;
    bool record_trace = false;
};

struct SearchNode {
    std::size_t id = 0;
    std::ptrdiff_t parent = -1;  // -1 for the root
    Concept expression;
    IndividualSet retrieved;
    double acc_simple = 0.0;
    double acc_celoe = 0.0;
    double f1 = 0.0;
    double quality = 0.0;
    double parent_acc_simple = 0.0;
    double parent_acc_celoe = 0.0;
    double heuristic = 0.0;
    int horizontal_expansion = 0;  // z: times this node has been expanded
    int refinement_count = 0;      // children added under this node
};

// A freshly refined child together with its retrieval and quality figures;
// what a Scorer consumes.
struct CandidateEval {
    Concept expression;
    IndividualSet retrieved;
    double acc_simple = 0.0;
    double acc_celoe = 0.0;
    double f1 = 0.0;
};

// Heuristic supplier for the search. score() values a batch of fresh
// children of one node in a single pass (the Q-network path relies on
// batching). Stepwise scorers keep expanded nodes in the frontier and
// rescore() them with their grown horizontal expansion. One instance serves
// one search at a time.
class Scorer {
public:
    virtual ~Scorer() = default;
    virtual std::string name() const = 0;
    virtual void begin_search(const KnowledgeBase& kb, const LearningProblem& lp,
                              std::uint64_t seed) {
        (void)kb;
        (void)lp;
        (void)seed;
    }
    virtual std::vector<double> score(const SearchNode& parent,
                                      const std::vector<CandidateEval>& children) = 0;
    virtual double rescore(const SearchNode& node) { return node.heuristic; }
    virtual bool stepwise() const { return false; }
};

// Max-heuristic frontier over the node store; ties prefer shorter
// expressions, then older nodes. Nodes are deduplicated by canonical key.
class SearchTree {
public:
    std::size_t add_node(SearchNode node) {
        node.id = nodes_.size();
        seen_.insert(node.expression.key());
        frontier_.insert({node.heuristic, node.expression.length(), node.id});
        nodes_.push_back(std::move(node));
        return nodes_.size() - 1;
    }

    SearchNode& node(std::size_t id) { return nodes_[id]; }
    const SearchNode& node(std::size_t id) const { return nodes_[id]; }
    std::size_t size() const { return nodes_.size(); }

    bool seen(const std::string& key) const { return seen_.count(key) > 0; }

    // Frontier maximum without removal (expansion reinserts stepwise nodes).
    const SearchNode& select_most_promising() const {
        if (frontier_.empty()) throw EmptyFrontierError();
        return nodes_[frontier_.begin()->id];
    }

    void remove_from_frontier(const SearchNode& n) {
        frontier_.erase({n.heuristic, n.expression.length(), n.id});
    }

    void update_heuristic(std::size_t id, double value) {
        SearchNode& n = nodes_[id];
        frontier_.erase({n.heuristic, n.expression.length(), n.id});
        n.heuristic = value;
        frontier_.insert({n.heuristic, n.expression.length(), n.id});
    }

    bool frontier_empty() const { return frontier_.empty(); }

private:
    struct Entry {
        double heuristic;
        int length;
        std::size_t id;
        bool operator<(const Entry& o) const {
            if (heuristic != o.heuristic) return heuristic > o.heuristic;
            if (length != o.length) return length < o.length;
            return id < o.id;
        }
    };

    std::deque<SearchNode> nodes_;
    std::set<Entry> frontier_;
    std::unordered_set<std::string> seen_;
};

struct TraceEntry {
    Concept expression;
    double quality = 0.0;
    double heuristic = 0.0;
};

struct LearnResult {
    Concept best;
    int best_length = 1;
    double f1 = 0.0;
    double accuracy = 0.0;
    double runtime_seconds = 0.0;
    long expressions_tested = 0;
    bool goal_found = false;
    std::vector<TraceEntry> trace;
};

namespace detail {

inline double pick_quality(QualityMetric metric, double acc_simple, double acc_celoe, double f1) {
    switch (metric) {
        case QualityMetric::FMeasure:
            return f1;
        case QualityMetric::AccuracySimple:
            return acc_simple;
        case QualityMetric::AccuracyCeloe:
            return acc_celoe;
    }
    return f1;
}

}  // namespace detail

// Best-first refinement search from Thing. Each iteration expands the
// frontier maximum, evaluates unseen refinements (quality via retrieval),
// scores them with the scorer and inserts them. Stops on the first
// F-measure-1 child, on the wall-clock budget (checked once per expansion),
// on the tested-expressions cap, or when the frontier drains.
inline LearnResult learn(const KnowledgeBase& kb, const LearningProblem& lp, Scorer& scorer,
                         const SearchConfig& cfg) {
    lp.validate();
    if (lp.positives.universe_size() != kb.individual_count())
        throw InvalidProblemError("learning problem universe does not match the knowledge base");

    const auto started = std::chrono::steady_clock::now();
    const auto elapsed = [&started] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    };

    scorer.begin_search(kb, lp, cfg.seed);
    const IndividualSet everyone = kb.all_individuals();
    const double t = cfg.heuristic_params.t;

    auto evaluate = [&](const Concept& c) {
        CandidateEval eval;
        eval.expression = c;
        eval.retrieved = kb.retrieve(c);
        eval.acc_simple = accuracy_simple(lp, eval.retrieved);
        eval.acc_celoe = accuracy_celoe(lp, eval.retrieved, everyone, t);
        eval.f1 = f_measure(lp, eval.retrieved);
        return eval;
    };

    SearchTree tree;
    LearnResult result;
    long tested = 0;

    {
        SearchNode root;
        root.expression = Concept::top();
        CandidateEval eval = evaluate(root.expression);
        root.retrieved = std::move(eval.retrieved);
        root.acc_simple = eval.acc_simple;
        root.acc_celoe = eval.acc_celoe;
        root.f1 = eval.f1;
        root.parent_acc_simple = root.acc_simple;
        root.parent_acc_celoe = root.acc_celoe;
        root.quality =
            detail::pick_quality(cfg.quality_metric, root.acc_simple, root.acc_celoe, root.f1);
        eval.expression = root.expression;
        root.heuristic = scorer.score(root, {eval})[0];
        ++tested;
        if (cfg.record_trace) result.trace.push_back({root.expression, root.quality, root.heuristic});
        tree.add_node(std::move(root));
    }

    std::size_t best_id = 0;
    bool goal_hit = false;

    while (!goal_hit) {
        if (elapsed() >= cfg.max_runtime_seconds) break;
        if (tested >= cfg.max_expressions_tested) break;
        if (tree.frontier_empty()) break;

        const std::size_t parent_id = tree.select_most_promising().id;
        {
            SearchNode& parent = tree.node(parent_id);
            parent.horizontal_expansion += 1;
            if (scorer.stepwise())
                tree.update_heuristic(parent_id, scorer.rescore(parent));
            else
                tree.remove_from_frontier(parent);
        }

        RefinementConfig rc;
        rc.dedup = true;
        rc.max_length = cfg.refinement_max_length;
        if (scorer.stepwise()) {
            const SearchNode& parent = tree.node(parent_id);
            rc.max_length = std::min(cfg.refinement_max_length,
                                     parent.expression.length() + parent.horizontal_expansion + 1);
        }
        std::vector<Concept> children = refine_bounded(kb.signature(), tree.node(parent_id).expression, rc);

        std::vector<CandidateEval> fresh;
        fresh.reserve(children.size());
        for (auto& child : children) {
            if (tree.seen(child.key())) continue;
            if (tested >= cfg.max_expressions_tested) break;
            fresh.push_back(evaluate(child));
            ++tested;
        }
        if (fresh.empty()) continue;

        std::vector<double> values = scorer.score(tree.node(parent_id), fresh);

        for (std::size_t i = 0; i < fresh.size(); ++i) {
            SearchNode child;
            child.parent = static_cast<std::ptrdiff_t>(parent_id);
            child.expression = fresh[i].expression;
            child.retrieved = std::move(fresh[i].retrieved);
            child.acc_simple = fresh[i].acc_simple;
            child.acc_celoe = fresh[i].acc_celoe;
            child.f1 = fresh[i].f1;
            child.quality =
                detail::pick_quality(cfg.quality_metric, child.acc_simple, child.acc_celoe, child.f1);
            child.parent_acc_simple = tree.node(parent_id).acc_simple;
            child.parent_acc_celoe = tree.node(parent_id).acc_celoe;
            child.heuristic = values[i];

            if (cfg.record_trace)
                result.trace.push_back({child.expression, child.quality, child.heuristic});

            std::size_t child_id = tree.add_node(std::move(child));
            tree.node(parent_id).refinement_count += 1;

            const SearchNode& added = tree.node(child_id);
            const SearchNode& best = tree.node(best_id);
            if (added.quality > best.quality ||
                (added.quality == best.quality &&
                 added.expression.length() < best.expression.length()))
                best_id = child_id;

            if (added.f1 == 1.0) {
                goal_hit = true;
                break;
            }
        }
    }

    const SearchNode& best = tree.node(best_id);
    result.best = best.expression;
    result.best_length = best.expression.length();
    result.f1 = best.f1;
    result.accuracy = best.acc_simple;
    result.goal_found = best.f1 == 1.0;
    result.expressions_tested = tested;
    result.runtime_seconds = elapsed();
    return result;
}

// ---- bundled scorers -------------------------------------------------------

class CeloeScorer : public Scorer {
public:
    explicit CeloeScorer(HeuristicParams params = {}) : params_(params) {}
    std::string name() const override { return "celoe"; }
    std::vector<double> score(const SearchNode& parent,
                              const std::vector<CandidateEval>& children) override {
        std::vector<double> out;
        out.reserve(children.size());
        for (const auto& c : children)
            out.push_back(
                heuristic_celoe(parent.acc_celoe, c.acc_celoe, c.expression.length(), params_));
        return out;
    }

private:
    HeuristicParams params_;
};

class OcelScorer : public Scorer {
public:
    explicit OcelScorer(HeuristicParams params = {}) : params_(params) {}
    std::string name() const override { return "ocel"; }
    bool stepwise() const override { return true; }
    std::vector<double> score(const SearchNode& parent,
                              const std::vector<CandidateEval>& children) override {
        std::vector<double> out;
        out.reserve(children.size());
        for (const auto& c : children)
            out.push_back(heuristic_ocel(parent.acc_simple, c.acc_simple, 0, params_));
        return out;
    }
    double rescore(const SearchNode& node) override {
        return heuristic_ocel(node.parent_acc_simple, node.acc_simple, node.horizontal_expansion,
                              params_);
    }

private:
    HeuristicParams params_;
};

class RandomScorer : public Scorer {
public:
    RandomScorer() : rng_(0) {}
    std::string name() const override { return "random"; }
    void begin_search(const KnowledgeBase&, const LearningProblem&, std::uint64_t seed) override {
        rng_ = DetRng(DetRng::derive(seed, /*stream=*/11));
    }
    std::vector<double> score(const SearchNode&, const std::vector<CandidateEval>& children) override {
        std::vector<double> out;
        out.reserve(children.size());
        for (std::size_t i = 0; i < children.size(); ++i) out.push_back(rng_.uniform());
        return out;
    }

private:
    DetRng rng_;
};

}  // namespace celkit
