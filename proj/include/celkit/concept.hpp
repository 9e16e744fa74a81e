#pragma once

#include <algorithm>
#include <cassert>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace celkit {

enum class ConceptKind { Top, Bottom, Named, Not, And, Or, Exists, Forall };

// Immutable ALC class expression. A Concept is a cheap value handle onto a
// shared expression tree; length, height and the canonical key are computed
// once at construction. Safe to copy and share across threads.
//
// length: atoms 1; X and Y / X or Y -> |X|+|Y|+1; some/only -> |filler|+2;
//         not -> |child|+1.
// height: atoms 0; unary/quantified 1+child; binary 1+max(children).
// key():  canonical string with the operands of and/or sorted recursively,
//         so commutative variants collide; no other identification is done
//         (e.g. "only r.Thing" and "Thing" keep distinct keys).
class Concept {
public:
    Concept() : node_(top_node()) {}

    static Concept top() { return Concept(top_node()); }
    static Concept bottom() { return Concept(bottom_node()); }
    static Concept named(std::string name) {
        require_name(name, "concept name");
        return Concept(make_node(ConceptKind::Named, std::move(name), nullptr, nullptr));
    }
    static Concept negation(const Concept& child) {
        return Concept(make_node(ConceptKind::Not, "", child.node_, nullptr));
    }
    static Concept conjunction(const Concept& left, const Concept& right) {
        return Concept(make_node(ConceptKind::And, "", left.node_, right.node_));
    }
    static Concept disjunction(const Concept& left, const Concept& right) {
        return Concept(make_node(ConceptKind::Or, "", left.node_, right.node_));
    }
    static Concept exists(std::string role, const Concept& filler) {
        require_name(role, "role name");
        return Concept(make_node(ConceptKind::Exists, std::move(role), filler.node_, nullptr));
    }
    static Concept forall(std::string role, const Concept& filler) {
        require_name(role, "role name");
        return Concept(make_node(ConceptKind::Forall, std::move(role), filler.node_, nullptr));
    }

    ConceptKind kind() const { return node_->kind; }

    // Named: concept name. Exists/Forall: role name.
    const std::string& name() const { return node_->name; }

    // Not/Exists/Forall child.
    Concept child() const {
        assert(is_unary());
        return Concept(node_->a);
    }
    Concept left() const {
        assert(is_binary());
        return Concept(node_->a);
    }
    Concept right() const {
        assert(is_binary());
        return Concept(node_->b);
    }

    int length() const { return node_->length; }
    int height() const { return node_->height; }
    const std::string& key() const { return node_->key; }

    bool is_atomic() const {
        auto k = kind();
        return k == ConceptKind::Top || k == ConceptKind::Bottom || k == ConceptKind::Named;
    }
    bool is_unary() const {
        auto k = kind();
        return k == ConceptKind::Not || k == ConceptKind::Exists || k == ConceptKind::Forall;
    }
    bool is_binary() const {
        auto k = kind();
        return k == ConceptKind::And || k == ConceptKind::Or;
    }

    // Exact tree equality (does NOT identify commutative variants; use key()
    // for that).
    bool same_tree(const Concept& other) const { return nodes_equal(node_.get(), other.node_.get()); }

    // Surface form in the learner's grammar, with minimal parentheses.
    // Precedence: not/some/only > and > or; and/or left-associative.
    std::string str() const {
        std::string out;
        render(node_.get(), out, 0);
        return out;
    }

private:
    struct Node {
        ConceptKind kind = ConceptKind::Top;
        std::string name;
        std::shared_ptr<const Node> a;  // unary child or binary left
        std::shared_ptr<const Node> b;  // binary right
        int length = 1;
        int height = 0;
        std::string key;
    };
    using NodePtr = std::shared_ptr<const Node>;

    explicit Concept(NodePtr node) : node_(std::move(node)) {}

    static void require_name(const std::string& name, const char* what) {
        if (name.empty()) throw std::invalid_argument(std::string(what) + " must be nonempty");
    }

    static const NodePtr& top_node() {
        static const NodePtr n = make_node(ConceptKind::Top, "", nullptr, nullptr);
        return n;
    }
    static const NodePtr& bottom_node() {
        static const NodePtr n = make_node(ConceptKind::Bottom, "", nullptr, nullptr);
        return n;
    }

    static NodePtr make_node(ConceptKind kind, std::string name, NodePtr a, NodePtr b) {
        auto node = std::make_shared<Node>();
        node->kind = kind;
        node->name = std::move(name);
        node->a = std::move(a);
        node->b = std::move(b);
        switch (kind) {
            case ConceptKind::Top:
                node->key = "t";
                break;
            case ConceptKind::Bottom:
                node->key = "f";
                break;
            case ConceptKind::Named:
                node->key = "n" + std::to_string(node->name.size()) + ":" + node->name;
                break;
            case ConceptKind::Not:
                node->length = node->a->length + 1;
                node->height = node->a->height + 1;
                node->key = "!" + node->a->key;
                break;
            case ConceptKind::Exists:
            case ConceptKind::Forall:
                node->length = node->a->length + 2;
                node->height = node->a->height + 1;
                node->key = (kind == ConceptKind::Exists ? "e" : "a") +
                            std::to_string(node->name.size()) + ":" + node->name + node->a->key;
                break;
            case ConceptKind::And:
            case ConceptKind::Or: {
                node->length = node->a->length + node->b->length + 1;
                node->height = 1 + std::max(node->a->height, node->b->height);
                const std::string& ka = node->a->key;
                const std::string& kb = node->b->key;
                node->key = (kind == ConceptKind::And ? "&" : "|");
                if (ka <= kb)
                    node->key += ka + kb;
                else
                    node->key += kb + ka;
                break;
            }
        }
        return node;
    }

    static bool nodes_equal(const Node* x, const Node* y) {
        if (x == y) return true;
        if (x->kind != y->kind || x->name != y->name) return false;
        if (x->a && !nodes_equal(x->a.get(), y->a.get())) return false;
        if (x->b && !nodes_equal(x->b.get(), y->b.get())) return false;
        return true;
    }

    // levels: 0 = or, 1 = and, 2 = unary, 3 = atom
    static int level_of(ConceptKind k) {
        switch (k) {
            case ConceptKind::Or:
                return 0;
            case ConceptKind::And:
                return 1;
            case ConceptKind::Not:
            case ConceptKind::Exists:
            case ConceptKind::Forall:
                return 2;
            default:
                return 3;
        }
    }

    static void render(const Node* n, std::string& out, int min_level) {
        const bool parens = level_of(n->kind) < min_level;
        if (parens) out += '(';
        switch (n->kind) {
            case ConceptKind::Top:
                out += "Thing";
                break;
            case ConceptKind::Bottom:
                out += "Nothing";
                break;
            case ConceptKind::Named:
                out += n->name;
                break;
            case ConceptKind::Not:
                out += "not ";
                render(n->a.get(), out, 2);
                break;
            case ConceptKind::Exists:
            case ConceptKind::Forall:
                out += n->name;
                out += n->kind == ConceptKind::Exists ? " some " : " only ";
                render(n->a.get(), out, 2);
                break;
            case ConceptKind::And:
                render(n->a.get(), out, 1);
                out += " and ";
                render(n->b.get(), out, 2);
                break;
            case ConceptKind::Or:
                render(n->a.get(), out, 0);
                out += " or ";
                render(n->b.get(), out, 1);
                break;
        }
        if (parens) out += ')';
    }

    NodePtr node_;
};

inline int length(const Concept& c) { return c.length(); }
inline int height(const Concept& c) { return c.height(); }
inline const std::string& canonical_key(const Concept& c) { return c.key(); }
inline std::string render_concept(const Concept& c) { return c.str(); }

// Finite vocabulary a knowledge base speaks: named concept and role names,
// both kept sorted and duplicate-free.
class Signature {
public:
    Signature() = default;
    Signature(std::vector<std::string> concepts, std::vector<std::string> roles)
        : concepts_(std::move(concepts)), roles_(std::move(roles)) {
        normalize(concepts_);
        normalize(roles_);
    }

    const std::vector<std::string>& named_concepts() const { return concepts_; }
    const std::vector<std::string>& roles() const { return roles_; }

    bool has_concept(const std::string& name) const {
        return std::binary_search(concepts_.begin(), concepts_.end(), name);
    }
    bool has_role(const std::string& name) const {
        return std::binary_search(roles_.begin(), roles_.end(), name);
    }

private:
    static void normalize(std::vector<std::string>& names) {
        std::sort(names.begin(), names.end());
        names.erase(std::unique(names.begin(), names.end()), names.end());
    }

    std::vector<std::string> concepts_;
    std::vector<std::string> roles_;
};

}  // namespace celkit
