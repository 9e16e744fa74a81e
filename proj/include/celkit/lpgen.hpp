#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "celkit/concept.hpp"
#include "celkit/errors.hpp"
#include "celkit/heuristics.hpp"
#include "celkit/kb.hpp"
#include "celkit/parser.hpp"
#include "celkit/refinement.hpp"
#include "celkit/rng.hpp"

namespace celkit {

struct SizeConstraint {
    double min_frac = 0.1;
    double max_frac = 0.3;
};

struct LpGenConfig {
    int states_per_walk = 20;  // n: states stored per walk
    int walks = 5;             // m: independent walks
    int resamples = 2;         // kappa: balanced resamples per concept
    int max_length = 5;
    std::optional<SizeConstraint> size_constraint;
    std::uint64_t seed = 0;
};

// Random refinement walks from Thing: every visited state of length
// <= max_length is stored, up to n per walk; walks are draw-capped because a
// walk can always refine a concept to itself. The merged result is
// deduplicated by canonical key and filtered by the retrieval-size
// constraint when one is set.
inline std::vector<Concept> generate_goal_concepts(const KnowledgeBase& kb,
                                                   const LpGenConfig& cfg) {
    DetRng rng(DetRng::derive(cfg.seed, 4));
    RefinementConfig rc{.max_length = cfg.max_length, .dedup = true};

    std::vector<Concept> collected;
    std::unordered_set<std::string> keys;
    const int draw_cap = std::max(8 * cfg.states_per_walk, 64);
    for (int walk = 0; walk < cfg.walks; ++walk) {
        Concept current = Concept::top();
        int stored = 0;
        for (int draw = 0; draw < draw_cap && stored < cfg.states_per_walk; ++draw) {
            std::vector<Concept> candidates = refine_bounded(kb.signature(), current, rc);
            if (candidates.empty()) break;
            Concept next = candidates[rng.index(candidates.size())];
            ++stored;
            if (keys.insert(next.key()).second) collected.push_back(next);
            current = std::move(next);
        }
    }

    if (cfg.size_constraint) {
        const double total = static_cast<double>(kb.individual_count());
        std::vector<Concept> kept;
        for (auto& c : collected) {
            const double n = static_cast<double>(kb.retrieve(c).count());
            if (n >= cfg.size_constraint->min_frac * total &&
                n <= cfg.size_constraint->max_frac * total)
                kept.push_back(std::move(c));
        }
        collected = std::move(kept);
    }
    if (collected.empty())
        throw NoConceptsFoundError("no goal concepts survived the length/size constraints");
    return collected;
}

struct GeneratedProblems {
    std::vector<LearningProblem> problems;
    std::size_t skipped = 0;  // concepts whose retrieval was empty or universal
};

namespace detail {

inline IndividualSet subsample(const IndividualSet& set, std::size_t keep, DetRng& rng) {
    std::vector<std::size_t> members = set.to_indices();
    IndividualSet out(set.universe_size());
    for (std::size_t i : rng.sample_without_replacement(members.size(), keep))
        out.insert(members[i]);
    return out;
}

}  // namespace detail

// For every concept: E+ = R(c), E- = Individuals \ R(c), the larger side
// uniformly undersampled (without replacement) until |E+| = |E-|; repeated
// kappa times with fresh subsamples. Concepts with an empty side are
// skipped and counted.
inline GeneratedProblems build_learning_problems(const KnowledgeBase& kb,
                                                 const std::vector<Concept>& concepts,
                                                 const LpGenConfig& cfg) {
    DetRng rng(DetRng::derive(cfg.seed, 5));
    GeneratedProblems out;
    for (const auto& c : concepts) {
        IndividualSet positives = kb.retrieve(c);
        IndividualSet negatives = positives.complement();
        if (positives.empty() || negatives.empty()) {
            ++out.skipped;
            continue;
        }
        for (int k = 0; k < cfg.resamples; ++k) {
            LearningProblem lp;
            const std::size_t np = positives.count();
            const std::size_t nn = negatives.count();
            if (np > nn) {
                lp.positives = detail::subsample(positives, nn, rng);
                lp.negatives = negatives;
            } else if (nn > np) {
                lp.positives = positives;
                lp.negatives = detail::subsample(negatives, np, rng);
            } else {
                lp.positives = positives;
                lp.negatives = negatives;
            }
            lp.target = c;
            lp.id = "lp" + std::to_string(out.problems.size());
            out.problems.push_back(std::move(lp));
        }
    }
    return out;
}

// Partition by distinct target concept (order of first appearance) so no
// target straddles the split. train_targets concepts go to the training
// side: the first k of them, or, with interleave, k picked evenly across the
// distinct-target list (spreads the walk regions over both sides). Problems
// without a target land in the training set.
inline std::pair<std::vector<LearningProblem>, std::vector<LearningProblem>>
split_by_target(const std::vector<LearningProblem>& lps, std::size_t train_targets,
                bool interleave = false) {
    std::vector<std::string> order;
    std::unordered_map<std::string, std::size_t> target_rank;
    for (const auto& lp : lps) {
        if (!lp.target) continue;
        if (target_rank.emplace(lp.target->key(), target_rank.size()).second)
            order.push_back(lp.target->key());
    }
    std::vector<bool> is_train(order.size(), false);
    if (interleave) {
        for (std::size_t i = 0; i < train_targets && !order.empty(); ++i)
            is_train[i * order.size() / train_targets] = true;
    } else {
        for (std::size_t i = 0; i < train_targets && i < order.size(); ++i) is_train[i] = true;
    }
    std::vector<LearningProblem> train, eval;
    for (const auto& lp : lps) {
        if (!lp.target) {
            train.push_back(lp);
            continue;
        }
        (is_train[target_rank.at(lp.target->key())] ? train : eval).push_back(lp);
    }
    return {std::move(train), std::move(eval)};
}

// ---- LP file format --------------------------------------------------------
//
// JSON array of records:
//   {"id": "lp0", "positives": [ids], "negatives": [ids], "target": "A or B"}
// target optional; ids must exist in the knowledge base.

inline void save_learning_problems(const std::string& path, const KnowledgeBase& kb,
                                   const std::vector<LearningProblem>& lps) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& lp : lps) {
        nlohmann::json rec;
        rec["id"] = lp.id;
        auto names = [&](const IndividualSet& set) {
            nlohmann::json arr = nlohmann::json::array();
            set.for_each([&](std::size_t i) { arr.push_back(kb.individual_name(i)); });
            return arr;
        };
        rec["positives"] = names(lp.positives);
        rec["negatives"] = names(lp.negatives);
        if (lp.target) rec["target"] = lp.target->str();
        doc.push_back(std::move(rec));
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot write learning problems: " + path);
    out << doc.dump(2) << "\n";
}

inline std::vector<LearningProblem> load_learning_problems(const std::string& path,
                                                           const KnowledgeBase& kb) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open learning problems: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("invalid learning-problem JSON: ") + e.what());
    }
    if (!doc.is_array()) throw FormatError("learning-problem file must be a JSON array");

    std::vector<LearningProblem> lps;
    std::size_t index = 0;
    for (const auto& rec : doc) {
        LearningProblem lp;
        lp.id = rec.value("id", "lp" + std::to_string(index));
        auto read_set = [&](const char* field) {
            if (!rec.contains(field) || !rec[field].is_array())
                throw FormatError("record " + std::to_string(index) + ": missing array '" +
                                  field + "'");
            IndividualSet set(kb.individual_count());
            for (const auto& name : rec[field]) {
                int idx = kb.individual_index(name.get<std::string>());
                if (idx < 0)
                    throw FormatError("record " + std::to_string(index) + ": unknown individual '" +
                                      name.get<std::string>() + "'");
                set.insert(static_cast<std::size_t>(idx));
            }
            return set;
        };
        lp.positives = read_set("positives");
        lp.negatives = read_set("negatives");
        if (rec.contains("target")) lp.target = parse_concept(rec["target"].get<std::string>());
        lps.push_back(std::move(lp));
        ++index;
    }
    return lps;
}

}  // namespace celkit
