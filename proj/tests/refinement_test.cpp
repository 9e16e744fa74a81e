#include "celkit/refinement.hpp"

#include <gtest/gtest.h>

#include <set>
#include <unordered_set>

#include "celkit/parser.hpp"
#include "celkit/rng.hpp"
#include "test_support.hpp"

using namespace celkit;

namespace {

Signature small_sig() { return Signature({"A", "B"}, {"r"}); }

std::set<std::string> keys_of(const std::vector<Concept>& cs) {
    std::set<std::string> out;
    for (const auto& c : cs) out.insert(c.key());
    return out;
}

TEST(Refine, TopYieldsAllAtoms) {
    auto result = keys_of(refine(small_sig(), Concept::top()));
    EXPECT_TRUE(result.count(Concept::named("A").key()));
    EXPECT_TRUE(result.count(Concept::named("B").key()));
    EXPECT_TRUE(result.count(Concept::top().key()));
    EXPECT_TRUE(result.count(Concept::bottom().key()));
}

TEST(Refine, Reflexive) {
    Signature sig({"A", "B", "C"}, {"r", "s"});
    DetRng rng(5);
    for (int i = 0; i < 500; ++i) {
        Concept c = test::random_concept(rng, sig, 4);
        auto result = keys_of(refine(sig, c));
        EXPECT_TRUE(result.count(c.key())) << c.str();
    }
}

TEST(Refine, AtomExpansionIsExactlyTheUniversalCase) {
    Signature sig({"A"}, {"r"});
    Concept a = Concept::named("A");
    auto result = keys_of(refine(sig, a));
    std::set<std::string> expected{
        Concept::exists("r", a).key(),  Concept::forall("r", a).key(),
        Concept::conjunction(a, Concept::top()).key(),
        Concept::disjunction(a, Concept::top()).key(),
        Concept::negation(a).key(),     a.key(),
    };
    EXPECT_EQ(result, expected);
}

// Exact emission count follows the operator's own recurrence; also pins
// finiteness with a computable bound.
std::size_t expected_emission_count(const Signature& sig, const Concept& c) {
    const std::size_t universal = 2 * sig.roles().size() + 4;
    std::size_t n = universal;
    switch (c.kind()) {
        case ConceptKind::Not:
        case ConceptKind::Exists:
        case ConceptKind::Forall:
            n += expected_emission_count(sig, c.child());
            break;
        case ConceptKind::And:
        case ConceptKind::Or:
            n += expected_emission_count(sig, c.left()) + expected_emission_count(sig, c.right());
            break;
        case ConceptKind::Top:
            n += sig.named_concepts().size() + 2;
            break;
        default:
            break;
    }
    return n;
}

TEST(Refine, FiniteWithExactEmissionCount) {
    Signature sig({"A", "B", "C"}, {"r", "s"});
    DetRng rng(11);
    for (int i = 0; i < 2000; ++i) {
        Concept c = test::random_concept(rng, sig, 5);
        EXPECT_EQ(refine(sig, c).size(), expected_emission_count(sig, c)) << c.str();
    }
}

TEST(Refine, LengthMonotone) {
    Signature sig({"A", "B", "C"}, {"r", "s"});
    DetRng rng(17);
    for (int i = 0; i < 10000; ++i) {
        Concept c = test::random_concept(rng, sig, 4);
        for (const auto& d : refine(sig, c)) ASSERT_GE(d.length(), c.length()) << c.str();
    }
}

TEST(Refine, UnknownNamesRejected) {
    EXPECT_THROW(refine(small_sig(), Concept::named("Z")), UnknownNameError);
    EXPECT_THROW(refine(small_sig(), Concept::exists("q", Concept::named("A"))), UnknownNameError);
}

TEST(Refine, DeterministicOrder) {
    Signature sig({"A", "B"}, {"r", "s"});
    Concept c = parse_concept("A and r some B");
    auto first = refine(sig, c);
    auto second = refine(sig, c);
    ASSERT_EQ(first.size(), second.size());
    for (std::size_t i = 0; i < first.size(); ++i) EXPECT_TRUE(first[i].same_tree(second[i]));
}

TEST(RefineBounded, LengthOneOnTopIsNcPlus) {
    auto result = refine_bounded(small_sig(), Concept::top(), {.max_length = 1, .dedup = true});
    auto keys = keys_of(result);
    std::set<std::string> expected{Concept::named("A").key(), Concept::named("B").key(),
                                   Concept::top().key(), Concept::bottom().key()};
    EXPECT_EQ(keys, expected);
}

TEST(RefineBounded, LengthTwoOnAtom) {
    Concept a = Concept::named("A");
    auto result = refine_bounded(Signature({"A"}, {"r"}), a, {.max_length = 2, .dedup = true});
    auto keys = keys_of(result);
    std::set<std::string> expected{a.key(), Concept::negation(a).key()};
    EXPECT_EQ(keys, expected);
}

TEST(RefineBounded, DedupCollapsesBothConjunctionSides) {
    Signature sig({"A", "B"}, {"r"});
    Concept c = parse_concept("A and B");
    auto raw = refine(sig, c);
    std::size_t occurrences = 0;
    for (const auto& d : raw)
        if (d.key() == c.key()) ++occurrences;
    EXPECT_GE(occurrences, 3u);  // universal case + once per conjunct side
    auto dedup = refine_bounded(sig, c, {.max_length = 20, .dedup = true});
    occurrences = 0;
    for (const auto& d : dedup)
        if (d.key() == c.key()) ++occurrences;
    EXPECT_EQ(occurrences, 1u);
}

TEST(Reachable, WorkedExamples) {
    Signature sig = small_sig();
    EXPECT_TRUE(reachable(sig, Concept::named("A"), 1));
    EXPECT_TRUE(reachable(sig, parse_concept("A and B"), 3));
    EXPECT_TRUE(reachable(sig, parse_concept("r some not A"), 3));
    EXPECT_TRUE(reachable(sig, Concept::top(), 1));
    // one step cannot produce a length-3 composite from Top
    EXPECT_FALSE(reachable(sig, parse_concept("A and B"), 1));
}

TEST(Reachable, EveryShortConceptWithinSixSteps) {
    Signature sig = small_sig();
    auto reached = reachable_keys(sig, /*max_length=*/5 + 2, /*max_steps=*/6);
    std::unordered_set<std::string> missing;
    for (const auto& c : test::enumerate_concepts(sig, 5)) {
        if (!reached.count(c.key())) missing.insert(c.str());
    }
    EXPECT_TRUE(missing.empty()) << missing.size() << " unreachable, e.g. " << *missing.begin();
}

}  // namespace
