#pragma once

#include <deque>
#include <string>
#include <unordered_set>
#include <vector>

#include "celkit/concept.hpp"
#include "celkit/errors.hpp"

namespace celkit {

struct RefinementConfig {
    int max_length = 12;
    bool dedup = true;
};

namespace detail {

inline void validate_names(const Signature& sig, const Concept& c) {
    switch (c.kind()) {
        case ConceptKind::Top:
        case ConceptKind::Bottom:
            return;
        case ConceptKind::Named:
            if (!sig.has_concept(c.name())) throw UnknownNameError(c.name());
            return;
        case ConceptKind::Not:
            validate_names(sig, c.child());
            return;
        case ConceptKind::Exists:
        case ConceptKind::Forall:
            if (!sig.has_role(c.name())) throw UnknownNameError(c.name());
            validate_names(sig, c.child());
            return;
        case ConceptKind::And:
        case ConceptKind::Or:
            validate_names(sig, c.left());
            validate_names(sig, c.right());
            return;
    }
}

inline void refine_into(const Signature& sig, const Concept& c, std::vector<Concept>& out) {
    // universal case, applied to every expression
    for (const auto& r : sig.roles()) out.push_back(Concept::exists(r, c));
    for (const auto& r : sig.roles()) out.push_back(Concept::forall(r, c));
    out.push_back(Concept::conjunction(c, Concept::top()));
    out.push_back(Concept::disjunction(c, Concept::top()));
    out.push_back(Concept::negation(c));
    out.push_back(c);

    // structural case, sub-refining one side at a time
    switch (c.kind()) {
        case ConceptKind::Not: {
            std::vector<Concept> sub;
            refine_into(sig, c.child(), sub);
            for (const auto& x : sub) out.push_back(Concept::negation(x));
            break;
        }
        case ConceptKind::Exists:
        case ConceptKind::Forall: {
            std::vector<Concept> sub;
            refine_into(sig, c.child(), sub);
            const bool existential = c.kind() == ConceptKind::Exists;
            for (const auto& x : sub)
                out.push_back(existential ? Concept::exists(c.name(), x)
                                          : Concept::forall(c.name(), x));
            break;
        }
        case ConceptKind::And:
        case ConceptKind::Or: {
            const bool conj = c.kind() == ConceptKind::And;
            std::vector<Concept> sub;
            refine_into(sig, c.left(), sub);
            for (const auto& x : sub)
                out.push_back(conj ? Concept::conjunction(x, c.right())
                                   : Concept::disjunction(x, c.right()));
            sub.clear();
            refine_into(sig, c.right(), sub);
            for (const auto& y : sub)
                out.push_back(conj ? Concept::conjunction(c.left(), y)
                                   : Concept::disjunction(c.left(), y));
            break;
        }
        default:
            break;
    }

    // N_C^+ when refining Top
    if (c.kind() == ConceptKind::Top) {
        for (const auto& name : sig.named_concepts()) out.push_back(Concept::named(name));
        out.push_back(Concept::top());
        out.push_back(Concept::bottom());
    }
}

}  // namespace detail

// The length-nondecreasing refinement operator. Deterministic emission order
// (universal case with roles lexicographic, then structural, then N_C^+ for
// Top); the same expression can be emitted more than once, e.g. via both
// sides of a conjunction.
inline std::vector<Concept> refine(const Signature& sig, const Concept& c) {
    detail::validate_names(sig, c);
    std::vector<Concept> out;
    detail::refine_into(sig, c, out);
    return out;
}

// refine() filtered to length <= cfg.max_length, optionally deduplicated by
// canonical key (first occurrence wins, order preserved).
inline std::vector<Concept> refine_bounded(const Signature& sig, const Concept& c,
                                           const RefinementConfig& cfg = {}) {
    std::vector<Concept> all = refine(sig, c);
    std::vector<Concept> out;
    out.reserve(all.size());
    std::unordered_set<std::string> seen;
    for (auto& d : all) {
        if (d.length() > cfg.max_length) continue;
        if (cfg.dedup && !seen.insert(d.key()).second) continue;
        out.push_back(std::move(d));
    }
    return out;
}

// Breadth-first iteration of refine() from Top. Candidates are deduplicated
// by canonical key and pruned to length(target) + 2 (admits detours through
// X and Thing). True iff something key-equal to target appears within
// max_steps levels.
inline bool reachable(const Signature& sig, const Concept& target, int max_steps) {
    detail::validate_names(sig, target);
    const int bound = target.length() + 2;
    std::unordered_set<std::string> seen{Concept::top().key()};
    if (target.key() == Concept::top().key()) return true;
    std::vector<Concept> frontier{Concept::top()};
    for (int step = 0; step < max_steps && !frontier.empty(); ++step) {
        std::vector<Concept> next;
        for (const auto& c : frontier) {
            for (auto& d : refine(sig, c)) {
                if (d.length() > bound) continue;
                if (!seen.insert(d.key()).second) continue;
                if (d.key() == target.key()) return true;
                next.push_back(std::move(d));
            }
        }
        frontier = std::move(next);
    }
    return false;
}

// Canonical keys of every expression of length <= max_length reachable from
// Top within max_steps levels (one shared sweep; the batch form of
// reachable() used when checking many targets).
inline std::unordered_set<std::string> reachable_keys(const Signature& sig, int max_length,
                                                      int max_steps) {
    std::unordered_set<std::string> seen{Concept::top().key()};
    std::vector<Concept> frontier{Concept::top()};
    for (int step = 0; step < max_steps && !frontier.empty(); ++step) {
        std::vector<Concept> next;
        for (const auto& c : frontier) {
            for (auto& d : refine(sig, c)) {
                if (d.length() > max_length) continue;
                if (!seen.insert(d.key()).second) continue;
                next.push_back(std::move(d));
            }
        }
        frontier = std::move(next);
    }
    return seen;
}

}  // namespace celkit
