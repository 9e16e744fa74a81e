#include "celkit/eval.hpp"

#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace celkit;
using celkit::test::set_of;

namespace {

TEST(Method, StringRoundTrip) {
    for (Method m : {Method::Drill, Method::Celoe, Method::Ocel, Method::Random})
        EXPECT_EQ(method_from_string(to_string(m)), m);
    EXPECT_THROW(method_from_string("eltl"), Error);
}

TEST(Csv, RowRoundTripsExactly) {
    EvalRow row;
    row.lp_id = "lp7";
    row.method = "celoe";
    row.expression = "Male or (hasChild some Female)";
    row.length = 6;
    row.f1 = 0.8571428571428571;
    row.accuracy = 1.0 / 3.0;
    row.runtime_s = 0.123456;
    row.expressions_tested = 4242;
    EvalRow back = parse_csv_line(to_csv_line(row));
    EXPECT_EQ(back.lp_id, row.lp_id);
    EXPECT_EQ(back.method, row.method);
    EXPECT_EQ(back.expression, row.expression);
    EXPECT_EQ(back.length, row.length);
    EXPECT_EQ(back.f1, row.f1);
    EXPECT_EQ(back.accuracy, row.accuracy);
    EXPECT_EQ(back.expressions_tested, row.expressions_tested);
}

TEST(Csv, QuotesInsideConceptSurvive) {
    EvalRow row;
    row.lp_id = "x";
    row.method = "random";
    row.expression = "odd \"name\" with, comma";
    row.length = 1;
    EvalRow back = parse_csv_line(to_csv_line(row));
    EXPECT_EQ(back.expression, row.expression);
}

TEST(RunEvaluation, OneRowPerCellInInputOrder) {
    KnowledgeBase kb = test::tiny_family_kb();
    std::vector<LearningProblem> lps(2);
    lps[0].positives = set_of(kb, {"a", "b"});
    lps[0].negatives = set_of(kb, {"c"});
    lps[0].id = "first";
    lps[1].positives = set_of(kb, {"a"});
    lps[1].negatives = set_of(kb, {"b"});
    lps[1].id = "second";

    SearchConfig cfg;
    cfg.max_runtime_seconds = 1.0;
    cfg.max_expressions_tested = 2000;
    cfg.seed = 9;

    std::vector<std::string> streamed;
    auto rows = run_evaluation(kb, lps, {Method::Celoe, Method::Random}, cfg, nullptr, nullptr,
                               [&](const EvalRow& row) { streamed.push_back(row.lp_id); });
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0].lp_id, "first");
    EXPECT_EQ(rows[0].method, "celoe");
    EXPECT_EQ(rows[1].lp_id, "first");
    EXPECT_EQ(rows[1].method, "random");
    EXPECT_EQ(rows[2].lp_id, "second");
    EXPECT_EQ(streamed.size(), 4u);
    for (const auto& row : rows) {
        EXPECT_GE(row.f1, 0.0);
        EXPECT_LE(row.f1, 1.0);
        EXPECT_GE(row.expressions_tested, 1);
    }
}

TEST(RunEvaluation, DrillWithoutModelRejected) {
    KnowledgeBase kb = test::tiny_family_kb();
    std::vector<LearningProblem> lps(1);
    lps[0].positives = set_of(kb, {"a"});
    lps[0].negatives = set_of(kb, {"b"});
    SearchConfig cfg;
    EXPECT_THROW(run_evaluation(kb, lps, {Method::Drill}, cfg), Error);
}

TEST(Aggregates, MeansAndMedians) {
    std::vector<EvalRow> rows(3);
    for (int i = 0; i < 3; ++i) {
        rows[i].method = "celoe";
        rows[i].f1 = 0.5 + 0.25 * i;  // 0.5 0.75 1.0
        rows[i].runtime_s = i;        // 0 1 2
        rows[i].expressions_tested = 10 * (i + 1);
    }
    auto aggs = aggregate_rows(rows);
    ASSERT_EQ(aggs.size(), 1u);
    EXPECT_EQ(aggs[0].problems, 3u);
    EXPECT_DOUBLE_EQ(aggs[0].mean_f1, 0.75);
    EXPECT_DOUBLE_EQ(aggs[0].median_f1, 0.75);
    EXPECT_DOUBLE_EQ(aggs[0].mean_runtime, 1.0);
    EXPECT_DOUBLE_EQ(aggs[0].median_expressions, 20.0);
    std::string table = format_aggregates(aggs);
    EXPECT_NE(table.find("celoe"), std::string::npos);
}

}  // namespace
