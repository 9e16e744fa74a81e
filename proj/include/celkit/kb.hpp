#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "celkit/concept.hpp"
#include "celkit/errors.hpp"
#include "celkit/individual_set.hpp"

namespace celkit {

class KnowledgeBase;

// Accumulates assertions, then build() materializes the subclass closure and
// freezes everything. load_kb() is a thin file front end over this.
class KbBuilder {
public:
    KbBuilder& add_type(const std::string& individual, const std::string& concept_name) {
        int i = intern_individual(individual);
        concept_names_.insert(concept_name);
        type_facts_.emplace_back(i, concept_name);
        return *this;
    }

    KbBuilder& add_role(const std::string& subject, const std::string& role,
                        const std::string& object) {
        int s = intern_individual(subject);
        int o = intern_individual(object);
        role_names_.insert(role);
        role_facts_.emplace_back(role, std::make_pair(s, o));
        return *this;
    }

    KbBuilder& add_subclass(const std::string& sub, const std::string& super) {
        concept_names_.insert(sub);
        concept_names_.insert(super);
        subclass_axioms_.emplace_back(sub, super);
        return *this;
    }

    KbBuilder& add_individual(const std::string& name) {
        intern_individual(name);
        return *this;
    }

    bool empty() const { return type_facts_.empty() && role_facts_.empty() && subclass_axioms_.empty(); }

    KnowledgeBase build() const;

private:
    int intern_individual(const std::string& name) {
        auto it = individual_index_.find(name);
        if (it != individual_index_.end()) return it->second;
        int idx = static_cast<int>(individuals_.size());
        individuals_.push_back(name);
        individual_index_.emplace(name, idx);
        return idx;
    }

    static bool has_cycle(const std::vector<std::pair<std::string, std::string>>& axioms) {
        std::map<std::string, std::vector<std::string>> adj;
        for (const auto& [sub, super] : axioms) adj[sub].push_back(super);
        std::map<std::string, int> state;  // 0 new, 1 on stack, 2 done
        for (const auto& [start, ignored] : adj) {
            if (state[start]) continue;
            std::vector<std::pair<std::string, std::size_t>> stack{{start, 0}};
            state[start] = 1;
            while (!stack.empty()) {
                auto& [name, next] = stack.back();
                auto it = adj.find(name);
                if (it == adj.end() || next >= it->second.size()) {
                    state[name] = 2;
                    stack.pop_back();
                    continue;
                }
                const std::string& succ = it->second[next++];
                if (state[succ] == 1) return true;
                if (state[succ] == 0) {
                    state[succ] = 1;
                    stack.emplace_back(succ, 0);
                }
            }
        }
        return false;
    }

    std::vector<std::string> individuals_;  // first-seen order
    std::unordered_map<std::string, int> individual_index_;
    std::unordered_set<std::string> concept_names_;
    std::unordered_set<std::string> role_names_;
    std::vector<std::pair<int, std::string>> type_facts_;
    std::vector<std::pair<std::string, std::pair<int, int>>> role_facts_;
    std::vector<std::pair<std::string, std::string>> subclass_axioms_;
};

// Materialized ABox with closed-world retrieval semantics.
//
// retrieve() evaluates a class expression to the set of its instances by
// recursive set algebra, memoized per canonical key (search revisits shared
// subexpressions constantly). instance_check() answers the same question for
// one individual by direct recursive evaluation and deliberately shares no
// code with retrieve(): it is the brute-force oracle the tests compare
// against.
//
// Immutable after build; the retrieval cache is append-only behind a
// shared_mutex, so concurrent retrieve() calls are safe.
class KnowledgeBase {
public:
    const std::vector<std::string>& individuals() const { return individuals_; }
    std::size_t individual_count() const { return individuals_.size(); }
    const std::string& individual_name(std::size_t i) const { return individuals_[i]; }

    int individual_index(const std::string& name) const {
        auto it = individual_index_.find(name);
        return it == individual_index_.end() ? -1 : it->second;
    }

    const Signature& signature() const { return signature_; }
    const std::vector<std::string>& warnings() const { return warnings_; }
    const std::vector<std::pair<std::string, std::string>>& subclass_axioms() const {
        return subclass_axioms_;
    }

    IndividualSet all_individuals() const { return IndividualSet(individuals_.size(), true); }

    const IndividualSet& members_of(const std::string& concept_name) const {
        auto it = concept_members_.find(concept_name);
        if (it == concept_members_.end()) throw UnknownNameError(concept_name);
        return it->second;
    }

    // r-successors of individual i (sorted, deduplicated).
    const std::vector<int>& successors(const std::string& role, std::size_t i) const {
        return successor_table(role)[i];
    }

    const std::vector<std::pair<int, int>>& role_pairs(const std::string& role) const {
        auto it = role_pairs_.find(role);
        if (it == role_pairs_.end()) throw UnknownNameError(role);
        return it->second;
    }

    IndividualSet retrieve(const Concept& c) const {
        {
            std::shared_lock lock(cache_->mutex);
            auto it = cache_->map.find(c.key());
            if (it != cache_->map.end()) return it->second;
        }
        IndividualSet result = retrieve_uncached(c);
        {
            std::unique_lock lock(cache_->mutex);
            cache_->map.emplace(c.key(), result);
        }
        return result;
    }

    bool instance_check(const std::string& individual, const Concept& c) const {
        int i = individual_index(individual);
        if (i < 0) throw UnknownNameError(individual);
        return instance_check(static_cast<std::size_t>(i), c);
    }

    bool instance_check(std::size_t individual, const Concept& c) const {
        switch (c.kind()) {
            case ConceptKind::Top:
                return true;
            case ConceptKind::Bottom:
                return false;
            case ConceptKind::Named:
                return members_of(c.name()).contains(individual);
            case ConceptKind::Not:
                return !instance_check(individual, c.child());
            case ConceptKind::And:
                return instance_check(individual, c.left()) &&
                       instance_check(individual, c.right());
            case ConceptKind::Or:
                return instance_check(individual, c.left()) ||
                       instance_check(individual, c.right());
            case ConceptKind::Exists: {
                for (int y : successors(c.name(), individual))
                    if (instance_check(static_cast<std::size_t>(y), c.child())) return true;
                return false;
            }
            case ConceptKind::Forall: {
                for (int y : successors(c.name(), individual))
                    if (!instance_check(static_cast<std::size_t>(y), c.child())) return false;
                return true;  // vacuously true without successors
            }
        }
        return false;
    }

private:
    KnowledgeBase() = default;

    IndividualSet retrieve_uncached(const Concept& c) const {
        switch (c.kind()) {
            case ConceptKind::Top:
                return all_individuals();
            case ConceptKind::Bottom:
                return IndividualSet(individuals_.size());
            case ConceptKind::Named:
                return members_of(c.name());
            case ConceptKind::Not:
                return retrieve(c.child()).complement();
            case ConceptKind::And:
                return retrieve(c.left()) & retrieve(c.right());
            case ConceptKind::Or:
                return retrieve(c.left()) | retrieve(c.right());
            case ConceptKind::Exists: {
                IndividualSet filler = retrieve(c.child());
                IndividualSet out(individuals_.size());
                const auto& succ = successor_table(c.name());
                for (std::size_t x = 0; x < individuals_.size(); ++x) {
                    for (int y : succ[x]) {
                        if (filler.contains(static_cast<std::size_t>(y))) {
                            out.insert(x);
                            break;
                        }
                    }
                }
                return out;
            }
            case ConceptKind::Forall: {
                IndividualSet filler = retrieve(c.child());
                IndividualSet out(individuals_.size());
                const auto& succ = successor_table(c.name());
                for (std::size_t x = 0; x < individuals_.size(); ++x) {
                    bool all_in = true;
                    for (int y : succ[x]) {
                        if (!filler.contains(static_cast<std::size_t>(y))) {
                            all_in = false;
                            break;
                        }
                    }
                    if (all_in) out.insert(x);
                }
                return out;
            }
        }
        return IndividualSet(individuals_.size());
    }

    const std::vector<std::vector<int>>& successor_table(const std::string& role) const {
        auto it = role_successors_.find(role);
        if (it == role_successors_.end()) throw UnknownNameError(role);
        return it->second;
    }

    struct Cache {
        std::unordered_map<std::string, IndividualSet> map;
        std::shared_mutex mutex;
    };

    std::vector<std::string> individuals_;
    std::unordered_map<std::string, int> individual_index_;
    Signature signature_;
    std::map<std::string, IndividualSet> concept_members_;
    std::map<std::string, std::vector<std::vector<int>>> role_successors_;
    std::map<std::string, std::vector<std::pair<int, int>>> role_pairs_;
    std::vector<std::pair<std::string, std::string>> subclass_axioms_;
    std::vector<std::string> warnings_;

    mutable std::unique_ptr<Cache> cache_ = std::make_unique<Cache>();

    friend class KbBuilder;
};

inline KnowledgeBase KbBuilder::build() const {
    KnowledgeBase kb;
    kb.individuals_ = individuals_;
    kb.individual_index_ = individual_index_;
    kb.signature_ =
        Signature(std::vector<std::string>(concept_names_.begin(), concept_names_.end()),
                  std::vector<std::string>(role_names_.begin(), role_names_.end()));
    kb.subclass_axioms_ = subclass_axioms_;

    const std::size_t n = individuals_.size();
    for (const auto& name : kb.signature_.named_concepts())
        kb.concept_members_.emplace(name, IndividualSet(n));
    for (const auto& [ind, name] : type_facts_) kb.concept_members_.at(name).insert(ind);

    for (const auto& role : kb.signature_.roles()) {
        kb.role_successors_.emplace(role, std::vector<std::vector<int>>(n));
        kb.role_pairs_.emplace(role, std::vector<std::pair<int, int>>());
    }
    for (const auto& [role, pair] : role_facts_) {
        kb.role_successors_.at(role)[pair.first].push_back(pair.second);
        kb.role_pairs_.at(role).push_back(pair);
    }
    for (auto& [role, table] : kb.role_successors_) {
        (void)role;
        for (auto& succ : table) {
            std::sort(succ.begin(), succ.end());
            succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
        }
    }

    // Subclass closure: membership propagates along sub -> super edges until
    // a fixpoint. Cycles are legal (the loop still terminates: sets only
    // grow) but worth flagging.
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [sub, super] : subclass_axioms_) {
            IndividualSet merged = kb.concept_members_.at(super) | kb.concept_members_.at(sub);
            if (merged != kb.concept_members_.at(super)) {
                kb.concept_members_.at(super) = std::move(merged);
                changed = true;
            }
        }
    }

    if (has_cycle(subclass_axioms_)) kb.warnings_.push_back("subclass hierarchy contains a cycle");
    return kb;
}

// Line-oriented KB text format ('#' starts a comment):
//   type <individual> <ConceptName>
//   role <subject> <roleName> <object>
//   subclass <ConceptName> <ConceptName>
inline KnowledgeBase parse_kb(std::istream& in, const std::string& source_name = "<stream>") {
    KbBuilder builder;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream words(line);
        std::string directive;
        if (!(words >> directive)) continue;
        std::string a, b, c;
        if (directive == "type") {
            if (!(words >> a >> b)) throw FormatError("expected: type <individual> <Concept>", line_no);
            builder.add_type(a, b);
        } else if (directive == "role") {
            if (!(words >> a >> b >> c))
                throw FormatError("expected: role <subject> <role> <object>", line_no);
            builder.add_role(a, b, c);
        } else if (directive == "subclass") {
            if (!(words >> a >> b))
                throw FormatError("expected: subclass <Sub> <Super>", line_no);
            builder.add_subclass(a, b);
        } else {
            throw FormatError("unknown directive '" + directive + "'", line_no);
        }
        std::string extra;
        if (words >> extra) throw FormatError("trailing token '" + extra + "'", line_no);
    }
    if (builder.empty()) throw FormatError("empty knowledge base (" + source_name + ")");
    return builder.build();
}

inline KnowledgeBase load_kb(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open knowledge base file: " + path);
    return parse_kb(in, path);
}

}  // namespace celkit
