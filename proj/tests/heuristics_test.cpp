#include "celkit/heuristics.hpp"

#include <gtest/gtest.h>

#include "celkit/rng.hpp"

using namespace celkit;

namespace {

constexpr double kTol = 1e-12;

IndividualSet make_set(std::size_t universe, std::initializer_list<std::size_t> members) {
    IndividualSet s(universe);
    for (auto m : members) s.insert(m);
    return s;
}

// universe {a=0, b=1, c=2, d=3, e=4, f=5}
LearningProblem example_lp() {
    LearningProblem lp;
    lp.positives = make_set(6, {0, 1});
    lp.negatives = make_set(6, {2, 3});
    return lp;
}

TEST(AccuracySimple, WorkedExamples) {
    LearningProblem lp = example_lp();
    EXPECT_NEAR(accuracy_simple(lp, make_set(6, {0, 1})), 1.0, kTol);
    EXPECT_NEAR(accuracy_simple(lp, make_set(6, {2, 3})), 0.0, kTol);
    EXPECT_NEAR(accuracy_simple(lp, make_set(6, {0, 2})), 0.5, kTol);
}

TEST(AccuracySimple, SwapInvariance) {
    DetRng rng(31);
    for (int i = 0; i < 2000; ++i) {
        const std::size_t n = 6;
        LearningProblem lp = example_lp();
        IndividualSet retrieved(n);
        for (std::size_t j = 0; j < n; ++j)
            if (rng.bernoulli(0.5)) retrieved.insert(j);
        LearningProblem swapped;
        swapped.positives = lp.negatives;
        swapped.negatives = lp.positives;
        IndividualSet labeled = lp.positives | lp.negatives;
        IndividualSet complemented = labeled - retrieved;
        EXPECT_NEAR(accuracy_simple(lp, retrieved), accuracy_simple(swapped, complemented), kTol);
    }
}

TEST(AccuracyCeloe, WorkedExamples) {
    LearningProblem lp = example_lp();
    IndividualSet all(6, true);
    EXPECT_NEAR(accuracy_celoe(lp, make_set(6, {0, 1}), all, 2.0), 1.0, kTol);
    EXPECT_NEAR(accuracy_celoe(lp, make_set(6, {0, 2}), all, 2.0), 2.0 / 3.0, kTol);
    EXPECT_NEAR(accuracy_celoe(lp, make_set(6, {}), all, 2.0), 5.0 / 9.0, kTol);
}

TEST(HeuristicOcel, WorkedExamples) {
    HeuristicParams p;  // lambda=0.5, beta=0.02
    EXPECT_NEAR(heuristic_ocel(0.5, 0.75, 2, p), 0.835, kTol);
    EXPECT_NEAR(heuristic_ocel(0.42, 0.42, 0, p), 0.42, kTol);
    EXPECT_NEAR(heuristic_ocel(1.0, 1.0, 5, p), 0.9, kTol);
}

TEST(HeuristicCeloe, WorkedExamples) {
    HeuristicParams p;
    EXPECT_NEAR(heuristic_celoe(0.5, 2.0 / 3.0, 3, p), 0.69, kTol);
    EXPECT_NEAR(heuristic_celoe(0.37, 0.37, 1, p), 0.37 - 0.02, kTol);
    EXPECT_NEAR(heuristic_celoe(0.0, 1.0, 2, p), 1.46, kTol);
}

TEST(HeuristicCeloe, MonotoneInLengthAndAccuracy) {
    HeuristicParams p;
    DetRng rng(77);
    for (int i = 0; i < 1000; ++i) {
        double acc_parent = rng.uniform();
        double acc_child = rng.uniform();
        int len = 1 + static_cast<int>(rng.index(10));
        double h = heuristic_celoe(acc_parent, acc_child, len, p);
        EXPECT_GT(h, heuristic_celoe(acc_parent, acc_child, len + 1, p));
        EXPECT_LT(h, heuristic_celoe(acc_parent, acc_child + 0.01, len, p));
    }
}

TEST(PrecisionRecallF, WorkedExamples) {
    LearningProblem lp;
    lp.positives = make_set(6, {0, 1});
    lp.negatives = make_set(6, {2});
    EXPECT_NEAR(precision(lp, make_set(6, {0, 1})), 1.0, kTol);
    EXPECT_NEAR(recall(lp, make_set(6, {0, 1})), 1.0, kTol);
    EXPECT_NEAR(f_measure(lp, make_set(6, {0, 1})), 1.0, kTol);

    EXPECT_NEAR(precision(lp, make_set(6, {0, 2})), 0.5, kTol);
    EXPECT_NEAR(recall(lp, make_set(6, {0, 2})), 0.5, kTol);
    EXPECT_NEAR(f_measure(lp, make_set(6, {0, 2})), 0.5, kTol);

    EXPECT_NEAR(f_measure(lp, make_set(6, {})), 0.0, kTol);
    EXPECT_NEAR(precision(lp, make_set(6, {})), 0.0, kTol);
    EXPECT_NEAR(recall(lp, make_set(6, {3, 4})), 0.0, kTol);
}

// The CELOE accuracy is only bounded below once |E+| <= |I|/2 (it weighs
// uncovered positives t-fold against the whole universe); balanced problems
// always satisfy that, so the generator keeps |E+| there.
TEST(QualityMeasures, StayWithinUnitInterval) {
    DetRng rng(13);
    for (int i = 0; i < 5000; ++i) {
        const std::size_t n = 8;
        LearningProblem lp;
        lp.positives = IndividualSet(n);
        lp.negatives = IndividualSet(n);
        IndividualSet retrieved(n);
        for (std::size_t j = 0; j < n; ++j) {
            double u = rng.uniform();
            if (u < 0.3 && lp.positives.count() < n / 2)
                lp.positives.insert(j);
            else if (u < 0.6)
                lp.negatives.insert(j);
            if (rng.bernoulli(0.5)) retrieved.insert(j);
        }
        if (lp.positives.empty() || lp.negatives.empty()) continue;
        IndividualSet all(n, true);
        for (double v : {accuracy_simple(lp, retrieved), accuracy_celoe(lp, retrieved, all, 2.0),
                         precision(lp, retrieved), recall(lp, retrieved), f_measure(lp, retrieved)}) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
    }
}

TEST(FMeasure, OneExactlyOnGoalStates) {
    DetRng rng(41);
    for (int i = 0; i < 5000; ++i) {
        const std::size_t n = 8;
        LearningProblem lp;
        lp.positives = IndividualSet(n);
        lp.negatives = IndividualSet(n);
        IndividualSet retrieved(n);
        for (std::size_t j = 0; j < n; ++j) {
            double u = rng.uniform();
            if (u < 0.35)
                lp.positives.insert(j);
            else if (u < 0.7)
                lp.negatives.insert(j);
            if (rng.bernoulli(0.5)) retrieved.insert(j);
        }
        if (lp.positives.empty() || lp.negatives.empty()) continue;
        IndividualSet labeled = lp.positives | lp.negatives;
        bool goal = (retrieved & labeled) == lp.positives;
        EXPECT_EQ(f_measure(lp, retrieved) == 1.0, goal);
    }
}

TEST(LearningProblem, ValidationRules) {
    LearningProblem ok = example_lp();
    EXPECT_NO_THROW(ok.validate());

    LearningProblem empty_neg;
    empty_neg.positives = make_set(4, {0});
    empty_neg.negatives = IndividualSet(4);
    EXPECT_THROW(empty_neg.validate(), InvalidProblemError);

    LearningProblem overlap;
    overlap.positives = make_set(4, {0, 1});
    overlap.negatives = make_set(4, {1, 2});
    EXPECT_THROW(overlap.validate(), InvalidProblemError);
}

TEST(HeuristicParams, OcelConstraintIsAdvisory) {
    HeuristicParams defaults;
    EXPECT_FALSE(defaults.valid_for_ocel());
    HeuristicParams strict{.lambda = 0.01, .beta = 0.05, .t = 2.0};
    EXPECT_TRUE(strict.valid_for_ocel());
}

}  // namespace
