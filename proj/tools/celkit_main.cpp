// celkit CLI: learn | train | generate-lps | evaluate | embed
//
// Exit codes: 0 success; 1 unexpected error; 2 I/O; 3 malformed file or
// concept syntax; 4 unknown concept/role/individual name; 5 invalid learning
// problem; 6 shape/dimension mismatch; 7 no concepts survived generation.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "celkit/celkit.hpp"

namespace {

using namespace celkit;

struct SearchFlags {
    double max_runtime = 3.0;
    long max_expressions = 100000;
    int max_length = 12;
    double lambda = 0.5;
    double beta = 0.02;
    double t = 2.0;
    std::string metric = "f1";
    std::uint64_t seed = 0;

    void attach(CLI::App* app) {
        app->add_option("--max-runtime", max_runtime, "search budget in seconds")
            ->check(CLI::PositiveNumber);
        app->add_option("--max-expressions", max_expressions, "cap on tested expressions")
            ->check(CLI::PositiveNumber);
        app->add_option("--max-length", max_length, "refinement length cap")
            ->check(CLI::PositiveNumber);
        app->add_option("--lambda", lambda, "heuristic gain weight");
        app->add_option("--beta", beta, "heuristic expansion/length penalty");
        app->add_option("--t", t, "CELOE accuracy weight (t > 1)");
        app->add_option("--metric", metric, "quality metric: f1|accuracy|accuracy-celoe")
            ->check(CLI::IsMember({"f1", "accuracy", "accuracy-celoe"}));
        app->add_option("--seed", seed, "RNG seed");
    }

    SearchConfig to_config() const {
        if (t <= 1.0) throw Error("--t must be > 1");
        SearchConfig cfg;
        cfg.max_runtime_seconds = max_runtime;
        cfg.max_expressions_tested = max_expressions;
        cfg.refinement_max_length = max_length;
        cfg.heuristic_params = HeuristicParams{lambda, beta, t};
        cfg.seed = seed;
        if (metric == "f1")
            cfg.quality_metric = QualityMetric::FMeasure;
        else if (metric == "accuracy")
            cfg.quality_metric = QualityMetric::AccuracySimple;
        else
            cfg.quality_metric = QualityMetric::AccuracyCeloe;
        return cfg;
    }
};

struct EmbeddingFlags {
    std::string path;
    int dim = 32;
    double noise = 0.1;

    void attach(CLI::App* app) {
        app->add_option("--embeddings", path, "embedding CSV (generated from the KB when absent)");
        app->add_option("--dim", dim, "generated embedding dimension")->check(CLI::PositiveNumber);
        app->add_option("--noise", noise, "generated embedding noise scale")
            ->check(CLI::NonNegativeNumber);
    }

    EmbeddingTable load_or_generate(const KnowledgeBase& kb, std::uint64_t seed) const {
        if (!path.empty()) return load_embeddings(path, kb);
        return generate_embeddings(kb, dim, seed, noise);
    }
};

struct LpGenFlags {
    int walks = 5;
    int states_per_walk = 20;
    int kappa = 2;
    int maxlen = 5;
    bool size_constraint = false;
    double min_frac = 0.1;
    double max_frac = 0.3;

    void attach(CLI::App* app) {
        app->add_option("--walks", walks, "independent random walks (m)")
            ->check(CLI::PositiveNumber);
        app->add_option("--states-per-walk", states_per_walk, "states stored per walk (n)")
            ->check(CLI::PositiveNumber);
        app->add_option("--kappa", kappa, "balanced resamples per goal concept")
            ->check(CLI::PositiveNumber);
        app->add_option("--maxlen", maxlen, "goal concept length cap")->check(CLI::PositiveNumber);
        app->add_flag("--size-constraint", size_constraint,
                      "keep only concepts with min-frac <= |R(c)|/|I| <= max-frac");
        app->add_option("--min-frac", min_frac, "size constraint lower fraction");
        app->add_option("--max-frac", max_frac, "size constraint upper fraction");
    }

    LpGenConfig to_config(std::uint64_t seed) const {
        LpGenConfig cfg;
        cfg.walks = walks;
        cfg.states_per_walk = states_per_walk;
        cfg.resamples = kappa;
        cfg.max_length = maxlen;
        if (size_constraint) cfg.size_constraint = SizeConstraint{min_frac, max_frac};
        cfg.seed = seed;
        return cfg;
    }
};

std::vector<std::string> split_csv_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::stringstream ss(text);
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

void print_learn_result(const std::string& lp_id, const std::string& method,
                        const LearnResult& r) {
    std::printf("method:             %s\n", method.c_str());
    std::printf("concept:            %s\n", r.best.str().c_str());
    std::printf("length:             %d\n", r.best_length);
    std::printf("f1:                 %.6f\n", r.f1);
    std::printf("accuracy:           %.6f\n", r.accuracy);
    std::printf("runtime_s:          %.6f\n", r.runtime_seconds);
    std::printf("expressions_tested: %ld\n", r.expressions_tested);
    std::printf("goal_found:         %s\n", r.goal_found ? "true" : "false");
    std::printf("RESULT lp_id=%s method=%s length=%d f1=%.17g accuracy=%.17g runtime_s=%.6f "
                "expressions_tested=%ld goal_found=%d concept=%s\n",
                lp_id.c_str(), method.c_str(), r.best_length, r.f1, r.accuracy, r.runtime_seconds,
                r.expressions_tested, r.goal_found ? 1 : 0, r.best.str().c_str());
}

int run(int argc, char** argv) {
    CLI::App app{"class expression learning over ALC knowledge bases"};
    app.require_subcommand(1);

    // ---- learn ----
    auto* learn_cmd = app.add_subcommand("learn", "solve one learning problem");
    std::string kb_path, lp_path, lp_id, method_name = "celoe", model_path, pos_list, neg_list;
    SearchFlags learn_search;
    EmbeddingFlags learn_embed;
    learn_cmd->add_option("--kb", kb_path, "knowledge base file")->required();
    learn_cmd->add_option("--lp", lp_path, "learning problem JSON file");
    learn_cmd->add_option("--lp-id", lp_id, "id of the problem to solve (default: first)");
    learn_cmd->add_option("--positives", pos_list, "inline positive examples, comma separated");
    learn_cmd->add_option("--negatives", neg_list, "inline negative examples, comma separated");
    learn_cmd->add_option("--method", method_name, "drill|celoe|ocel|random")
        ->check(CLI::IsMember({"drill", "celoe", "ocel", "random"}));
    learn_cmd->add_option("--model", model_path, "checkpoint (required for drill)");
    learn_search.attach(learn_cmd);
    learn_embed.attach(learn_cmd);

    // ---- train ----
    auto* train_cmd = app.add_subcommand("train", "train the Q-network scorer");
    std::string train_kb, train_lps_path, train_out = "model.qnet";
    bool train_generate = false;
    SearchFlags train_search;  // provides --seed/--lambda/--beta/--t/--max-length
    EmbeddingFlags train_embed;
    LpGenFlags train_gen;
    TrainingConfig train_defaults;
    int episodes = train_defaults.episodes, steps = train_defaults.steps_per_episode,
        update_every = train_defaults.update_every, batch = train_defaults.batch_size,
        hidden = train_defaults.hidden;
    double gamma = train_defaults.gamma, eps_start = train_defaults.epsilon_start,
           eps_decay = train_defaults.epsilon_decay, lr = train_defaults.learning_rate,
           maxreward = train_defaults.max_reward;
    std::size_t replay = train_defaults.replay_capacity;
    train_cmd->add_option("--kb", train_kb, "knowledge base file")->required();
    train_cmd->add_option("--lps", train_lps_path, "learning problems JSON file");
    train_cmd->add_flag("--generate", train_generate, "generate training problems from the KB");
    train_cmd->add_option("--out", train_out, "checkpoint output path");
    train_cmd->add_option("--episodes", episodes)->check(CLI::PositiveNumber);
    train_cmd->add_option("--steps", steps, "actions per episode")->check(CLI::PositiveNumber);
    train_cmd->add_option("--update-every", update_every)->check(CLI::PositiveNumber);
    train_cmd->add_option("--batch", batch, "minibatch size")->check(CLI::PositiveNumber);
    train_cmd->add_option("--hidden", hidden, "hidden layer width")->check(CLI::PositiveNumber);
    train_cmd->add_option("--gamma", gamma, "discount factor");
    train_cmd->add_option("--epsilon-start", eps_start);
    train_cmd->add_option("--epsilon-decay", eps_decay);
    train_cmd->add_option("--lr", lr, "ADAM learning rate");
    train_cmd->add_option("--maxreward", maxreward, "reward for goal states");
    train_cmd->add_option("--replay", replay, "replay buffer capacity");
    train_search.attach(train_cmd);
    train_embed.attach(train_cmd);
    train_gen.attach(train_cmd);

    // ---- generate-lps ----
    auto* gen_cmd = app.add_subcommand("generate-lps", "generate balanced learning problems");
    std::string gen_kb, gen_out = "lps.json";
    std::uint64_t gen_seed = 0;
    LpGenFlags gen_flags;
    gen_cmd->add_option("--kb", gen_kb, "knowledge base file")->required();
    gen_cmd->add_option("--out", gen_out, "output JSON path");
    gen_cmd->add_option("--seed", gen_seed, "RNG seed");
    gen_flags.attach(gen_cmd);

    // ---- evaluate ----
    auto* eval_cmd = app.add_subcommand("evaluate", "run methods over a problem set, write CSV");
    std::string eval_kb, eval_lps_path, eval_methods = "celoe", eval_model, eval_out = "results.csv";
    SearchFlags eval_search;
    EmbeddingFlags eval_embed;
    eval_cmd->add_option("--kb", eval_kb, "knowledge base file")->required();
    eval_cmd->add_option("--lps", eval_lps_path, "learning problems JSON file")->required();
    eval_cmd->add_option("--methods", eval_methods, "comma separated: drill,celoe,ocel,random");
    eval_cmd->add_option("--model", eval_model, "checkpoint (required when drill is listed)");
    eval_cmd->add_option("--out", eval_out, "CSV output path");
    eval_search.attach(eval_cmd);
    eval_embed.attach(eval_cmd);

    // ---- embed ----
    auto* embed_cmd = app.add_subcommand("embed", "write deterministic embeddings for a KB");
    std::string embed_kb, embed_out = "embeddings.csv";
    std::uint64_t embed_seed = 0;
    int embed_dim = 32;
    double embed_noise = 0.1;
    embed_cmd->add_option("--kb", embed_kb, "knowledge base file")->required();
    embed_cmd->add_option("--out", embed_out, "CSV output path");
    embed_cmd->add_option("--dim", embed_dim)->check(CLI::PositiveNumber);
    embed_cmd->add_option("--seed", embed_seed, "RNG seed");
    embed_cmd->add_option("--noise", embed_noise)->check(CLI::NonNegativeNumber);

    CLI11_PARSE(app, argc, argv);

    if (learn_cmd->parsed()) {
        KnowledgeBase kb = load_kb(kb_path);
        LearningProblem lp;
        if (!lp_path.empty()) {
            auto lps = load_learning_problems(lp_path, kb);
            if (lps.empty()) throw FormatError("no learning problems in " + lp_path);
            if (lp_id.empty()) {
                lp = lps.front();
            } else {
                auto it = std::find_if(lps.begin(), lps.end(),
                                       [&](const auto& p) { return p.id == lp_id; });
                if (it == lps.end()) throw FormatError("no learning problem with id " + lp_id);
                lp = *it;
            }
        } else {
            if (pos_list.empty() || neg_list.empty())
                throw InvalidProblemError("provide --lp or both --positives and --negatives");
            lp.positives = IndividualSet(kb.individual_count());
            lp.negatives = IndividualSet(kb.individual_count());
            for (const auto& name : split_csv_list(pos_list)) {
                int idx = kb.individual_index(name);
                if (idx < 0) throw UnknownNameError(name);
                lp.positives.insert(static_cast<std::size_t>(idx));
            }
            for (const auto& name : split_csv_list(neg_list)) {
                int idx = kb.individual_index(name);
                if (idx < 0) throw UnknownNameError(name);
                lp.negatives.insert(static_cast<std::size_t>(idx));
            }
            lp.id = "inline";
        }

        SearchConfig cfg = learn_search.to_config();
        Method method = method_from_string(method_name);
        std::optional<QNetworkParams> model;
        std::optional<EmbeddingTable> table;
        if (method == Method::Drill) {
            if (model_path.empty()) throw Error("drill requires --model");
            model = load_checkpoint(model_path);
            table = learn_embed.load_or_generate(kb, cfg.seed);
        }
        auto scorer = make_scorer(method, cfg.heuristic_params, model ? &*model : nullptr,
                                  table ? &*table : nullptr);
        LearnResult result = learn(kb, lp, *scorer, cfg);
        print_learn_result(lp.id.empty() ? "lp0" : lp.id, method_name, result);
        return 0;
    }

    if (train_cmd->parsed()) {
        KnowledgeBase kb = load_kb(train_kb);
        for (const auto& w : kb.warnings()) std::fprintf(stderr, "warning: %s\n", w.c_str());
        std::vector<LearningProblem> lps;
        if (train_generate) {
            LpGenConfig gen = train_gen.to_config(train_search.seed);
            auto built = build_learning_problems(kb, generate_goal_concepts(kb, gen), gen);
            lps = std::move(built.problems);
            if (built.skipped)
                std::fprintf(stderr, "skipped %zu degenerate goal concepts\n", built.skipped);
            if (lps.empty()) throw NoConceptsFoundError("generation produced no learning problems");
        } else if (!train_lps_path.empty()) {
            lps = load_learning_problems(train_lps_path, kb);
        } else {
            throw Error("provide --lps or --generate");
        }

        EmbeddingTable table = train_embed.load_or_generate(kb, train_search.seed);
        TrainingConfig cfg;
        cfg.episodes = episodes;
        cfg.steps_per_episode = steps;
        cfg.update_every = update_every;
        cfg.batch_size = batch;
        cfg.hidden = hidden;
        cfg.gamma = gamma;
        cfg.epsilon_start = eps_start;
        cfg.epsilon_decay = eps_decay;
        cfg.learning_rate = lr;
        cfg.max_reward = maxreward;
        cfg.replay_capacity = replay;
        cfg.refinement_max_length = train_search.max_length;
        cfg.seed = train_search.seed;
        HeuristicParams hp{train_search.lambda, train_search.beta, train_search.t};

        TrainResult result = train(kb, table, lps, cfg, hp);
        for (const auto& [episode, loss] : result.loss_history)
            std::printf("%d,%.17g\n", episode, loss);
        save_checkpoint(result.params, train_out);
        std::fprintf(stderr, "trained on %zu problems (%zu transitions); checkpoint: %s\n",
                     lps.size(), result.transitions_stored, train_out.c_str());
        return 0;
    }

    if (gen_cmd->parsed()) {
        KnowledgeBase kb = load_kb(gen_kb);
        LpGenConfig cfg = gen_flags.to_config(gen_seed);
        auto concepts = generate_goal_concepts(kb, cfg);
        auto built = build_learning_problems(kb, concepts, cfg);
        if (built.problems.empty())
            throw NoConceptsFoundError("generation produced no learning problems");
        save_learning_problems(gen_out, kb, built.problems);
        std::fprintf(stderr, "%zu goal concepts -> %zu problems (%zu skipped) -> %s\n",
                     concepts.size(), built.problems.size(), built.skipped, gen_out.c_str());
        return 0;
    }

    if (eval_cmd->parsed()) {
        KnowledgeBase kb = load_kb(eval_kb);
        auto lps = load_learning_problems(eval_lps_path, kb);
        std::vector<Method> methods;
        for (const auto& name : split_csv_list(eval_methods))
            methods.push_back(method_from_string(name));
        if (methods.empty()) throw Error("no methods given");

        SearchConfig cfg = eval_search.to_config();
        std::optional<QNetworkParams> model;
        std::optional<EmbeddingTable> table;
        if (std::find(methods.begin(), methods.end(), Method::Drill) != methods.end()) {
            if (eval_model.empty()) throw Error("drill requires --model");
            model = load_checkpoint(eval_model);
            table = eval_embed.load_or_generate(kb, cfg.seed);
        }

        std::ofstream csv(eval_out);
        if (!csv) throw IoError("cannot write results: " + eval_out);
        csv << kCsvHeader << "\n";
        auto rows = run_evaluation(kb, lps, methods, cfg, model ? &*model : nullptr,
                                   table ? &*table : nullptr, [&](const EvalRow& row) {
                                       csv << to_csv_line(row) << "\n";
                                       csv.flush();  // keep partial results on interrupt
                                   });
        std::cout << format_aggregates(aggregate_rows(rows));
        std::fprintf(stderr, "%zu rows -> %s\n", rows.size(), eval_out.c_str());
        return 0;
    }

    if (embed_cmd->parsed()) {
        KnowledgeBase kb = load_kb(embed_kb);
        EmbeddingTable table = generate_embeddings(kb, embed_dim, embed_seed, embed_noise);
        save_embeddings(embed_out, kb, table);
        std::fprintf(stderr, "wrote %zu x %d embeddings -> %s\n", table.size(), table.dimension(),
                     embed_out.c_str());
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const celkit::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 2;
    } catch (const celkit::SyntaxError& e) {
        std::fprintf(stderr, "syntax error: %s\n", e.what());
        return 3;
    } catch (const celkit::FormatError& e) {
        std::fprintf(stderr, "format error: %s\n", e.what());
        return 3;
    } catch (const celkit::UnknownNameError& e) {
        std::fprintf(stderr, "unknown name: %s\n", e.what());
        return 4;
    } catch (const celkit::InvalidProblemError& e) {
        std::fprintf(stderr, "invalid problem: %s\n", e.what());
        return 5;
    } catch (const celkit::ShapeMismatchError& e) {
        std::fprintf(stderr, "shape mismatch: %s\n", e.what());
        return 6;
    } catch (const celkit::MissingIndividualError& e) {
        std::fprintf(stderr, "missing individual: %s\n", e.what());
        return 6;
    } catch (const celkit::DimensionMismatchError& e) {
        std::fprintf(stderr, "dimension mismatch: %s\n", e.what());
        return 6;
    } catch (const celkit::NoConceptsFoundError& e) {
        std::fprintf(stderr, "no concepts found: %s\n", e.what());
        return 7;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
