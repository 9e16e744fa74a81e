#include "celkit/kb.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "celkit/parser.hpp"
#include "celkit/rng.hpp"
#include "test_support.hpp"

using namespace celkit;
using celkit::test::set_of;

namespace {

TEST(KbLoad, DirectIngestion) {
    std::istringstream in(
        "# a small family\n"
        "type a Male\n"
        "type b Female  # inline comment\n"
        "role a hasChild c\n");
    KnowledgeBase kb = parse_kb(in);
    EXPECT_EQ(kb.individual_count(), 3u);
    EXPECT_EQ(kb.signature().named_concepts(), (std::vector<std::string>{"Female", "Male"}));
    EXPECT_EQ(kb.signature().roles(), (std::vector<std::string>{"hasChild"}));
    // first-seen individual order
    EXPECT_EQ(kb.individuals(), (std::vector<std::string>{"a", "b", "c"}));
}

TEST(KbLoad, SubclassClosure) {
    std::istringstream in(
        "type a Male\n"
        "type b Female\n"
        "subclass Male Person\n"
        "subclass Female Person\n");
    KnowledgeBase kb = parse_kb(in);
    EXPECT_TRUE(kb.members_of("Male").is_subset_of(kb.members_of("Person")));
    EXPECT_TRUE(kb.members_of("Female").is_subset_of(kb.members_of("Person")));
    EXPECT_EQ(kb.members_of("Person").count(), 2u);
}

TEST(KbLoad, TransitiveClosure) {
    std::istringstream in(
        "type a Son\n"
        "subclass Son Child\n"
        "subclass Child Person\n");
    KnowledgeBase kb = parse_kb(in);
    EXPECT_TRUE(kb.members_of("Person").contains(0));
}

TEST(KbLoad, EmptyFileRejected) {
    std::istringstream in("# only a comment\n\n");
    EXPECT_THROW(parse_kb(in), FormatError);
}

TEST(KbLoad, FormatErrorsCarryLineNumbers) {
    std::istringstream in("type a Male\nrole a hasChild\n");
    try {
        parse_kb(in);
        FAIL() << "expected FormatError";
    } catch (const FormatError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    std::istringstream bad("frobnicate a b\n");
    EXPECT_THROW(parse_kb(bad), FormatError);
}

TEST(KbLoad, CycleWarningButStillLoads) {
    std::istringstream in(
        "type a X\n"
        "subclass X Y\n"
        "subclass Y X\n");
    KnowledgeBase kb = parse_kb(in);
    ASSERT_EQ(kb.warnings().size(), 1u);
    EXPECT_NE(kb.warnings()[0].find("cycle"), std::string::npos);
    EXPECT_TRUE(kb.members_of("Y").contains(0));
}

TEST(KbLoad, MissingFileIsIoError) { EXPECT_THROW(load_kb("/nonexistent/kb.txt"), IoError); }

TEST(Retrieve, WorkedExamples) {
    KnowledgeBase kb = test::tiny_family_kb();
    EXPECT_EQ(kb.retrieve(parse_concept("Male or Female")), set_of(kb, {"a", "b"}));
    EXPECT_EQ(kb.retrieve(parse_concept("not Male")), set_of(kb, {"b", "c"}));
    // a and b both have the non-Female child c; c has no children at all
    EXPECT_EQ(kb.retrieve(parse_concept("hasChild only Female")), set_of(kb, {"c"}));
    EXPECT_EQ(kb.retrieve(Concept::top()), kb.all_individuals());
    EXPECT_TRUE(kb.retrieve(Concept::bottom()).empty());
    EXPECT_EQ(kb.retrieve(parse_concept("hasChild some Thing")), set_of(kb, {"a", "b"}));
}

TEST(Retrieve, UnknownNamesRejected) {
    KnowledgeBase kb = test::tiny_family_kb();
    EXPECT_THROW(kb.retrieve(parse_concept("Unicorn")), UnknownNameError);
    EXPECT_THROW(kb.retrieve(parse_concept("worships some Male")), UnknownNameError);
}

TEST(InstanceCheck, WorkedExamples) {
    KnowledgeBase kb = test::tiny_family_kb();
    EXPECT_TRUE(kb.instance_check("a", parse_concept("Male")));
    EXPECT_FALSE(kb.instance_check("b", parse_concept("Male")));
    EXPECT_TRUE(kb.instance_check("c", parse_concept("hasChild only Nothing")));
    EXPECT_TRUE(kb.instance_check("a", parse_concept("hasChild some not Female")));
    EXPECT_THROW(kb.instance_check("zzz", Concept::top()), UnknownNameError);
}

// retrieve must agree with the per-individual oracle on random inputs.
TEST(Retrieve, AgreesWithInstanceCheckOracle) {
    DetRng rng(99);
    std::vector<std::string> concepts{"A", "B", "C"};
    std::vector<std::string> roles{"r", "s"};
    Signature sig(concepts, roles);
    for (int round = 0; round < 20; ++round) {
        KnowledgeBase kb = test::random_kb(rng, 3 + rng.index(17), concepts, roles);
        for (int i = 0; i < 50; ++i) {
            Concept c = test::random_concept(rng, sig, 4);
            if (c.length() > 7) continue;
            IndividualSet retrieved = kb.retrieve(c);
            for (std::size_t x = 0; x < kb.individual_count(); ++x)
                ASSERT_EQ(retrieved.contains(x), kb.instance_check(x, c))
                    << c.str() << " individual " << kb.individual_name(x);
        }
    }
}

TEST(Retrieve, DeMorganAndMonotonicity) {
    DetRng rng(123);
    std::vector<std::string> concepts{"A", "B"};
    std::vector<std::string> roles{"r"};
    Signature sig(concepts, roles);
    for (int round = 0; round < 10; ++round) {
        KnowledgeBase kb = test::random_kb(rng, 4 + rng.index(12), concepts, roles);
        for (int i = 0; i < 100; ++i) {
            Concept c = test::random_concept(rng, sig, 3);
            Concept d = test::random_concept(rng, sig, 3);
            const std::string role = roles[rng.index(roles.size())];
            // R(not (C and D)) = R(not C or not D)
            EXPECT_EQ(kb.retrieve(Concept::negation(Concept::conjunction(c, d))),
                      kb.retrieve(Concept::disjunction(Concept::negation(c), Concept::negation(d))));
            // R(not (some r. C)) = R(only r. not C)
            EXPECT_EQ(kb.retrieve(Concept::negation(Concept::exists(role, c))),
                      kb.retrieve(Concept::forall(role, Concept::negation(c))));
            // monotone w.r.t. disjunction, antitone under conjunction
            EXPECT_TRUE(kb.retrieve(c).is_subset_of(kb.retrieve(Concept::disjunction(c, d))));
            EXPECT_TRUE(kb.retrieve(Concept::conjunction(c, d)).is_subset_of(kb.retrieve(c)));
        }
    }
}

// Concurrent readers/inserters on the retrieval cache agree with the
// single-threaded answers.
TEST(Retrieve, ConcurrentCallsAgree) {
    DetRng rng(2025);
    std::vector<std::string> concepts{"A", "B"};
    std::vector<std::string> roles{"r"};
    Signature sig(concepts, roles);
    KnowledgeBase kb = test::random_kb(rng, 16, concepts, roles);

    std::vector<Concept> queries;
    for (int i = 0; i < 200; ++i) queries.push_back(test::random_concept(rng, sig, 4));
    std::vector<IndividualSet> expected;
    for (const auto& q : queries) expected.push_back(kb.retrieve(q));

    std::atomic<int> mismatches{0};
    std::vector<std::thread> workers;
    for (int t = 0; t < 4; ++t) {
        workers.emplace_back([&] {
            for (std::size_t i = 0; i < queries.size(); ++i)
                if (kb.retrieve(queries[i]) != expected[i]) ++mismatches;
        });
    }
    for (auto& w : workers) w.join();
    EXPECT_EQ(mismatches.load(), 0);
}

TEST(Retrieve, CacheReturnsIdenticalResults) {
    KnowledgeBase kb = test::tiny_family_kb();
    Concept c = parse_concept("Male or Female");
    IndividualSet first = kb.retrieve(c);
    IndividualSet second = kb.retrieve(c);
    EXPECT_EQ(first, second);
    // commutative variant hits the same cache entry (same canonical key)
    EXPECT_EQ(kb.retrieve(parse_concept("Female or Male")), first);
}

}  // namespace
