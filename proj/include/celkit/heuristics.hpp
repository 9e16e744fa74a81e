#pragma once

#include <optional>
#include <string>

#include "celkit/concept.hpp"
#include "celkit/errors.hpp"
#include "celkit/individual_set.hpp"

namespace celkit {

// Positive/negative example sets over a knowledge base universe. The target
// is carried by generated problems so evaluation can check solvability.
struct LearningProblem {
    IndividualSet positives;
    IndividualSet negatives;
    std::optional<Concept> target;
    std::string id;

    void validate() const {
        if (positives.empty()) throw InvalidProblemError("positive example set is empty");
        if (negatives.empty()) throw InvalidProblemError("negative example set is empty");
        if (positives.intersection_count(negatives) != 0)
            throw InvalidProblemError("positive and negative examples overlap");
    }
};

struct HeuristicParams {
    double lambda = 0.5;  // gain weight
    double beta = 0.02;   // expansion/length penalty weight
    double t = 2.0;       // weight of uncovered positives in the CELOE accuracy

    // The OCEL formulation assumes beta > lambda >= 0; the defaults here do
    // not satisfy it (mild length penalties work better on small KBs), so
    // this is advisory, not enforced.
    bool valid_for_ocel() const { return beta > lambda && lambda >= 0.0; }
};

// A(c) = 1 - (|E+ \ R(c)| + |R(c) n E-|) / (|E+| + |E-|)
inline double accuracy_simple(const LearningProblem& lp, const IndividualSet& retrieved) {
    const double missed_pos = static_cast<double>(lp.positives.difference_count(retrieved));
    const double covered_neg = static_cast<double>(retrieved.intersection_count(lp.negatives));
    const double denom =
        static_cast<double>(lp.positives.count()) + static_cast<double>(lp.negatives.count());
    return 1.0 - (missed_pos + covered_neg) / denom;
}

// A(c,t) = 1 - 2 (t |E+ \ R(c)| + |R(c) \ E+|) / ((t+1) |Individuals|)
inline double accuracy_celoe(const LearningProblem& lp, const IndividualSet& retrieved,
                             const IndividualSet& all_individuals, double t) {
    const double missed_pos = static_cast<double>(lp.positives.difference_count(retrieved));
    const double extra = static_cast<double>(retrieved.difference_count(lp.positives));
    const double total = static_cast<double>(all_individuals.count());
    return 1.0 - 2.0 * (t * missed_pos + extra) / ((t + 1.0) * total);
}

// phi_OCEL(c_i, c_j) = A(c_j) + lambda (A(c_j) - A(c_i)) - beta z
inline double heuristic_ocel(double acc_parent, double acc_child, int horizontal_expansion,
                             const HeuristicParams& p) {
    return acc_child + p.lambda * (acc_child - acc_parent) - p.beta * horizontal_expansion;
}

// phi_CELOE(c_i, c_j) = A(c_j) + lambda (A(c_j) - A(c_i)) - beta |c_j|
inline double heuristic_celoe(double acc_parent, double acc_child, int child_length,
                              const HeuristicParams& p) {
    return acc_child + p.lambda * (acc_child - acc_parent) - p.beta * child_length;
}

// Precision/recall/F over the labeled examples only; 0 on zero denominators,
// so empty hypotheses rank worst.
inline double precision(const LearningProblem& lp, const IndividualSet& retrieved) {
    const double tp = static_cast<double>(lp.positives.intersection_count(retrieved));
    const double fp = static_cast<double>(lp.negatives.intersection_count(retrieved));
    return tp + fp > 0.0 ? tp / (tp + fp) : 0.0;
}

inline double recall(const LearningProblem& lp, const IndividualSet& retrieved) {
    const double tp = static_cast<double>(lp.positives.intersection_count(retrieved));
    const double fn = static_cast<double>(lp.positives.difference_count(retrieved));
    return tp + fn > 0.0 ? tp / (tp + fn) : 0.0;
}

inline double f_measure(const LearningProblem& lp, const IndividualSet& retrieved) {
    const double p = precision(lp, retrieved);
    const double r = recall(lp, retrieved);
    return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

}  // namespace celkit
