#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "celkit/errors.hpp"
#include "celkit/heuristics.hpp"
#include "celkit/individual_set.hpp"
#include "celkit/kb.hpp"
#include "celkit/rng.hpp"

namespace celkit {

// 4 x d input of the Q-network: row means of the embeddings of
// [R(parent), R(child), E+, E-], in that fixed order.
using StateMatrix = Eigen::MatrixXd;

// One d-dimensional vector per knowledge-base individual, indexed by the
// KB's individual index. Immutable once built.
class EmbeddingTable {
public:
    EmbeddingTable(Eigen::MatrixXd vectors) : vectors_(std::move(vectors)) {}

    int dimension() const { return static_cast<int>(vectors_.cols()); }
    std::size_t size() const { return static_cast<std::size_t>(vectors_.rows()); }
    Eigen::MatrixXd::ConstRowXpr row(std::size_t individual) const { return vectors_.row(individual); }
    const Eigen::MatrixXd& matrix() const { return vectors_; }

    // Mean vector of a set of individuals; the empty set maps to zero.
    Eigen::RowVectorXd mean_of(const IndividualSet& set) const {
        Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(vectors_.cols());
        std::size_t n = 0;
        set.for_each([&](std::size_t i) {
            acc += vectors_.row(i);
            ++n;
        });
        if (n > 0) acc /= static_cast<double>(n);
        return acc;
    }

private:
    Eigen::MatrixXd vectors_;
};

// Header-free CSV, one row per individual: individualId,v1,...,vd.
// The dimension is inferred from the first row; every KB individual must be
// covered. Rows for unknown individuals are skipped.
inline EmbeddingTable load_embeddings(const std::string& path, const KnowledgeBase& kb) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open embeddings file: " + path);

    Eigen::MatrixXd vectors;
    std::vector<bool> covered(kb.individual_count(), false);
    int dim = -1;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() < 2) throw DimensionMismatchError("expected id,v1,...,vd", line_no);
        const int row_dim = static_cast<int>(fields.size()) - 1;
        if (dim < 0) {
            dim = row_dim;
            vectors = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(kb.individual_count()), dim);
        } else if (row_dim != dim) {
            throw DimensionMismatchError("row has " + std::to_string(row_dim) +
                                             " values, expected " + std::to_string(dim),
                                         line_no);
        }
        int idx = kb.individual_index(fields[0]);
        if (idx < 0) continue;
        for (int j = 0; j < dim; ++j) {
            std::size_t consumed = 0;
            double v = std::stod(fields[j + 1], &consumed);
            vectors(idx, j) = v;
        }
        covered[static_cast<std::size_t>(idx)] = true;
    }
    for (std::size_t i = 0; i < covered.size(); ++i)
        if (!covered[i]) throw MissingIndividualError(kb.individual_name(i));
    return EmbeddingTable(std::move(vectors));
}

// Deterministic stand-in for pretrained embeddings: hashed features of each
// individual's concept memberships and per-role in/out-degrees, unit
// normalized, plus a seeded random perturbation of Euclidean length
// noise_scale. Same (kb, d, seed, noise_scale) gives a bit-identical table;
// noise_scale 0 makes assertion-profile twins coincide.
inline EmbeddingTable generate_embeddings(const KnowledgeBase& kb, int d, std::uint64_t seed,
                                          double noise_scale = 0.1) {
    if (d < 2) throw std::invalid_argument("embedding dimension must be >= 2");
    const std::size_t n = kb.individual_count();
    Eigen::MatrixXd vectors = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), d);

    auto fnv1a = [](const std::string& s) {
        std::uint64_t h = 1469598103934665603ULL;
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        return h;
    };
    auto bump = [&](Eigen::Index i, const std::string& token, double value) {
        std::uint64_t h = fnv1a(token);
        double sign = ((h >> 32) & 1) ? 1.0 : -1.0;
        vectors(i, static_cast<Eigen::Index>(h % static_cast<std::uint64_t>(d))) += sign * value;
    };

    std::map<std::string, std::vector<int>> in_degree;
    for (const auto& role : kb.signature().roles()) {
        auto& deg = in_degree[role];
        deg.assign(n, 0);
        for (const auto& [s, o] : kb.role_pairs(role)) {
            (void)s;
            ++deg[o];
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& name : kb.signature().named_concepts())
            if (kb.members_of(name).contains(i)) bump(i, "concept:" + name, 1.0);
        for (const auto& role : kb.signature().roles()) {
            const auto out_deg = kb.successors(role, i).size();
            if (out_deg) bump(i, "out:" + role, static_cast<double>(out_deg));
            const auto in_deg = in_degree[role][i];
            if (in_deg) bump(i, "in:" + role, static_cast<double>(in_deg));
        }
        double norm = vectors.row(i).norm();
        if (norm > 1e-12)
            vectors.row(i) /= norm;
        else
            vectors(i, 0) = 1.0;  // featureless individuals share a fixed unit vector
    }

    if (noise_scale > 0.0) {
        DetRng rng(DetRng::derive(seed, /*stream=*/3));
        for (std::size_t i = 0; i < n; ++i) {
            Eigen::RowVectorXd noise(d);
            for (int j = 0; j < d; ++j) noise(j) = rng.uniform(-1.0, 1.0);
            double norm = noise.norm();
            if (norm > 1e-12) vectors.row(i) += noise * (noise_scale / norm);
        }
    }
    return EmbeddingTable(std::move(vectors));
}

// Round-trip-safe CSV writer for a table (the `embed` CLI subcommand).
inline void save_embeddings(const std::string& path, const KnowledgeBase& kb,
                            const EmbeddingTable& table) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write embeddings file: " + path);
    char buf[64];
    for (std::size_t i = 0; i < table.size(); ++i) {
        out << kb.individual_name(i);
        for (int j = 0; j < table.dimension(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", table.matrix()(i, j));
            out << ',' << buf;
        }
        out << '\n';
    }
}

// Psi: stack the four set means into the network's 4 x d input.
inline StateMatrix state_matrix(const EmbeddingTable& table, const IndividualSet& retrieved_parent,
                                const IndividualSet& retrieved_child, const LearningProblem& lp) {
    StateMatrix m(4, table.dimension());
    m.row(0) = table.mean_of(retrieved_parent);
    m.row(1) = table.mean_of(retrieved_child);
    m.row(2) = table.mean_of(lp.positives);
    m.row(3) = table.mean_of(lp.negatives);
    return m;
}

}  // namespace celkit
