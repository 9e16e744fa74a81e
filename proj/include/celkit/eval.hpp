#pragma once

#include <algorithm>
#include <cstdio>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "celkit/drill.hpp"
#include "celkit/errors.hpp"
#include "celkit/search.hpp"

namespace celkit {

enum class Method { Drill, Celoe, Ocel, Random };

inline std::string to_string(Method m) {
    switch (m) {
        case Method::Drill:
            return "drill";
        case Method::Celoe:
            return "celoe";
        case Method::Ocel:
            return "ocel";
        case Method::Random:
            return "random";
    }
    return "?";
}

inline Method method_from_string(const std::string& s) {
    if (s == "drill") return Method::Drill;
    if (s == "celoe") return Method::Celoe;
    if (s == "ocel") return Method::Ocel;
    if (s == "random") return Method::Random;
    throw Error("unknown method '" + s + "' (expected drill|celoe|ocel|random)");
}

// One (learning problem, method) evaluation outcome; mirrors LearnResult.
struct EvalRow {
    std::string lp_id;
    std::string method;
    std::string expression;
    int length = 1;
    double f1 = 0.0;
    double accuracy = 0.0;
    double runtime_s = 0.0;
    long expressions_tested = 0;
};

inline constexpr const char* kCsvHeader =
    "lp_id,method,concept,length,f1,accuracy,runtime_s,expressions_tested";

namespace detail {

inline std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

// The concept column is always double-quoted (inner quotes doubled); every
// non-timing column round-trips exactly.
inline std::string to_csv_line(const EvalRow& row) {
    std::string quoted = "\"";
    for (char c : row.expression) {
        quoted += c;
        if (c == '"') quoted += '"';
    }
    quoted += '"';
    std::ostringstream out;
    out << row.lp_id << ',' << row.method << ',' << quoted << ',' << row.length << ','
        << detail::g17(row.f1) << ',' << detail::g17(row.accuracy) << ','
        << detail::g17(row.runtime_s) << ',' << row.expressions_tested;
    return out.str();
}

inline EvalRow parse_csv_line(const std::string& line) {
    EvalRow row;
    std::size_t pos = 0;
    auto take_plain = [&]() {
        std::size_t comma = line.find(',', pos);
        std::string field = line.substr(pos, comma - pos);
        pos = comma == std::string::npos ? line.size() : comma + 1;
        return field;
    };
    row.lp_id = take_plain();
    row.method = take_plain();
    if (pos >= line.size() || line[pos] != '"') throw FormatError("expected quoted concept field");
    ++pos;
    while (pos < line.size()) {
        if (line[pos] == '"') {
            if (pos + 1 < line.size() && line[pos + 1] == '"') {
                row.expression += '"';
                pos += 2;
                continue;
            }
            ++pos;
            break;
        }
        row.expression += line[pos++];
    }
    if (pos < line.size() && line[pos] == ',') ++pos;
    row.length = std::stoi(take_plain());
    row.f1 = std::stod(take_plain());
    row.accuracy = std::stod(take_plain());
    row.runtime_s = std::stod(take_plain());
    row.expressions_tested = std::stol(take_plain());
    return row;
}

inline EvalRow to_eval_row(const std::string& lp_id, Method method, const LearnResult& r) {
    EvalRow row;
    row.lp_id = lp_id;
    row.method = to_string(method);
    row.expression = r.best.str();
    row.length = r.best_length;
    row.f1 = r.f1;
    row.accuracy = r.accuracy;
    row.runtime_s = r.runtime_seconds;
    row.expressions_tested = r.expressions_tested;
    return row;
}

// Scorer factory; drill needs trained parameters plus the embedding table.
inline std::unique_ptr<Scorer> make_scorer(Method method, const HeuristicParams& params,
                                           const QNetworkParams* model = nullptr,
                                           const EmbeddingTable* table = nullptr) {
    switch (method) {
        case Method::Celoe:
            return std::make_unique<CeloeScorer>(params);
        case Method::Ocel:
            return std::make_unique<OcelScorer>(params);
        case Method::Random:
            return std::make_unique<RandomScorer>();
        case Method::Drill:
            if (!model || !table) throw Error("drill evaluation requires a model checkpoint");
            return std::make_unique<DrillScorer>(*model, *table);
    }
    throw Error("unreachable method");
}

// Runs every (learning problem, method) cell in input order, invoking
// on_row as soon as each row exists so callers can stream/flush results.
inline std::vector<EvalRow> run_evaluation(
    const KnowledgeBase& kb, const std::vector<LearningProblem>& lps,
    const std::vector<Method>& methods, const SearchConfig& cfg,
    const QNetworkParams* model = nullptr, const EmbeddingTable* table = nullptr,
    const std::function<void(const EvalRow&)>& on_row = nullptr) {
    std::vector<EvalRow> rows;
    for (std::size_t i = 0; i < lps.size(); ++i) {
        const std::string lp_id = lps[i].id.empty() ? "lp" + std::to_string(i) : lps[i].id;
        for (Method method : methods) {
            auto scorer = make_scorer(method, cfg.heuristic_params, model, table);
            LearnResult result = learn(kb, lps[i], *scorer, cfg);
            rows.push_back(to_eval_row(lp_id, method, result));
            if (on_row) on_row(rows.back());
        }
    }
    return rows;
}

struct MethodAggregate {
    std::string method;
    std::size_t problems = 0;
    double mean_f1 = 0.0, mean_accuracy = 0.0, mean_runtime = 0.0, mean_expressions = 0.0;
    double median_f1 = 0.0, median_runtime = 0.0, median_expressions = 0.0;
};

inline std::vector<MethodAggregate> aggregate_rows(const std::vector<EvalRow>& rows) {
    std::vector<std::string> order;
    for (const auto& row : rows)
        if (std::find(order.begin(), order.end(), row.method) == order.end())
            order.push_back(row.method);

    auto median = [](std::vector<double> v) {
        if (v.empty()) return 0.0;
        std::sort(v.begin(), v.end());
        const std::size_t n = v.size();
        return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    };

    std::vector<MethodAggregate> out;
    for (const auto& method : order) {
        MethodAggregate agg;
        agg.method = method;
        std::vector<double> f1s, runtimes, exps;
        for (const auto& row : rows) {
            if (row.method != method) continue;
            ++agg.problems;
            agg.mean_f1 += row.f1;
            agg.mean_accuracy += row.accuracy;
            agg.mean_runtime += row.runtime_s;
            agg.mean_expressions += static_cast<double>(row.expressions_tested);
            f1s.push_back(row.f1);
            runtimes.push_back(row.runtime_s);
            exps.push_back(static_cast<double>(row.expressions_tested));
        }
        const double n = static_cast<double>(agg.problems);
        agg.mean_f1 /= n;
        agg.mean_accuracy /= n;
        agg.mean_runtime /= n;
        agg.mean_expressions /= n;
        agg.median_f1 = median(f1s);
        agg.median_runtime = median(runtimes);
        agg.median_expressions = median(exps);
        out.push_back(agg);
    }
    return out;
}

// Per-method summary table (means, with medians alongside).
inline std::string format_aggregates(const std::vector<MethodAggregate>& aggs) {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof line, "%-8s %4s %8s %8s %10s %12s %12s %14s\n", "method", "#lp",
                  "F1", "Acc", "T(s)", "Exp", "med T(s)", "med Exp");
    out << line;
    for (const auto& a : aggs) {
        std::snprintf(line, sizeof line, "%-8s %4zu %8.3f %8.3f %10.3f %12.1f %12.3f %14.1f\n",
                      a.method.c_str(), a.problems, a.mean_f1, a.mean_accuracy, a.mean_runtime,
                      a.mean_expressions, a.median_runtime, a.median_expressions);
        out << line;
    }
    return out.str();
}

}  // namespace celkit
