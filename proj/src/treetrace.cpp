#include "satcast/treetrace.hpp"

#include <string>

namespace satcast {

void BranchTracker::on_decide(int level) {
    const int expected =
        stack_.empty() ? 1 : (stack_.back().closed ? stack_.back().level : stack_.back().level + 1);
    if (level != expected)
        throw TraceDesync("decision at level " + std::to_string(level) + ", expected " +
                          std::to_string(expected));
    stack_.push_back({level, false, conflicts_});
}

void BranchTracker::on_conflict() {
    ++conflicts_;
    pending_leaf_depth_ = static_cast<int>(stack_.size());
    conflict_pending_ = true;
}

BackjumpSummary BranchTracker::on_backjump(int to_level) {
    if (!conflict_pending_) throw TraceDesync("backjump without a preceding conflict");
    conflict_pending_ = false;

    BackjumpSummary s;
    s.leaf_depth = pending_leaf_depth_;
    while (!stack_.empty() && stack_.back().level > to_level + 1) {
        if (stack_.back().closed) s.popped_closed_depths.push_back(static_cast<int>(stack_.size()) - 1);
        stack_.pop_back();
    }
    if (stack_.empty() || stack_.back().level != to_level + 1 || stack_.back().closed)
        throw TraceDesync("backjump to level " + std::to_string(to_level) + " has no open owner");
    stack_.back().closed = true;
    s.target_depth = static_cast<int>(stack_.size()) - 1;
    last_close_ = {s.target_depth, conflicts_ - stack_.back().conflicts_at_push};
    return s;
}

void BranchTracker::on_restart() {
    stack_.clear();
    conflicts_ = 0;
    conflict_pending_ = false;
}

namespace {

template <typename Model>
BranchStep apply_common(Model& m, const SearchEvent& e, int terminal_depth_if_unsat) {
    BranchStep step;
    if (const auto* d = std::get_if<DecideEvent>(&e)) {
        m.on_decide(d->level);
    } else if (std::holds_alternative<ConflictEvent>(e)) {
        m.on_conflict();
    } else if (const auto* b = std::get_if<BackjumpEvent>(&e)) {
        step.summary = m.on_backjump(b->to_level);
    } else if (std::holds_alternative<RestartEvent>(e)) {
        m.on_restart();
        step.restarted = true;
    } else if (const auto* s = std::get_if<SolvedEvent>(&e)) {
        if (s->status == SolveStatus::unsat) {
            step.terminal_unsat = true;
            step.terminal_leaf_depth = terminal_depth_if_unsat;
        }
    }
    return step;
}

}  // namespace

BranchStep apply_event(BranchTracker& tracker, const SearchEvent& e) {
    BranchStep step = apply_common(tracker, e, tracker.terminal_leaf_depth());
    if (step.summary) step.close = tracker.last_close();
    return step;
}

BranchStep apply_event(ExplicitTree& tree, const SearchEvent& e) {
    BranchStep step = apply_common(tree, e, tree.last_leaf_depth());
    if (step.summary) step.close = tree.last_close();
    return step;
}

int ExplicitTree::attach(int level, bool leaf) {
    Node n;
    n.parent = attach_parent_;
    n.depth = attach_parent_ < 0 ? 0 : nodes_[attach_parent_].depth + 1;
    n.level = leaf ? -1 : level;
    const int id = static_cast<int>(nodes_.size());
    if (attach_parent_ >= 0) {
        if (attach_right_)
            nodes_[attach_parent_].right = id;
        else
            nodes_[attach_parent_].left = id;
    }
    nodes_.push_back(n);
    return id;
}

void ExplicitTree::on_decide(int level) {
    const int id = attach(level, false);
    attach_parent_ = id;
    attach_right_ = false;
}

void ExplicitTree::on_conflict() {
    last_leaf_ = attach(-1, true);
    leaves_.push_back(last_leaf_);
}

BackjumpSummary ExplicitTree::on_backjump(int to_level) {
    if (last_leaf_ < 0) throw TraceDesync("oracle: backjump without a conflict leaf");
    BackjumpSummary s;
    s.leaf_depth = nodes_[last_leaf_].depth;

    int n = nodes_[last_leaf_].parent;
    std::vector<int> passed;
    while (n >= 0 && nodes_[n].level > to_level + 1) {
        passed.push_back(n);
        n = nodes_[n].parent;
    }
    if (n < 0 || nodes_[n].level != to_level + 1 || nodes_[n].closed)
        throw TraceDesync("oracle: backjump to level " + std::to_string(to_level) + " has no open owner");

    for (int id : passed)
        if (nodes_[id].closed) s.popped_closed_depths.push_back(nodes_[id].depth);
    // Splice out the unclosed pass-overs: their left subtree takes their place.
    for (int id : passed) {
        if (nodes_[id].closed) continue;
        Node& sp = nodes_[id];
        const int child = sp.left;
        if (sp.parent >= 0) {
            Node& par = nodes_[sp.parent];
            (par.left == id ? par.left : par.right) = child;
        }
        if (child >= 0) nodes_[child].parent = sp.parent;
        sp.detached = true;
    }

    nodes_[n].closed = true;
    s.target_depth = nodes_[n].depth;
    attach_parent_ = n;
    attach_right_ = true;
    last_leaf_ = -1;
    last_closed_ = n;
    return s;
}

SubtreeClose ExplicitTree::last_close() const {
    SubtreeClose close{last_closed_ < 0 ? 0 : nodes_[static_cast<size_t>(last_closed_)].depth, 0};
    if (last_closed_ < 0) return close;
    std::vector<int> todo;
    if (const int left = nodes_[static_cast<size_t>(last_closed_)].left; left >= 0)
        todo.push_back(left);
    while (!todo.empty()) {
        const Node& n = nodes_[static_cast<size_t>(todo.back())];
        todo.pop_back();
        if (n.level < 0) ++close.left_subtree_conflicts;
        if (n.left >= 0) todo.push_back(n.left);
        if (n.right >= 0) todo.push_back(n.right);
    }
    return close;
}

void ExplicitTree::on_restart() {
    nodes_.clear();
    leaves_.clear();
    attach_parent_ = -1;
    attach_right_ = false;
    last_leaf_ = -1;
    last_closed_ = -1;
}

uint64_t ExplicitTree::node_count() const {
    uint64_t n = 0;
    for (const Node& node : nodes_)
        if (!node.detached) ++n;
    return n;
}

std::vector<int> ExplicitTree::leaf_depths() const {
    std::vector<int> out;
    out.reserve(leaves_.size());
    for (int id : leaves_)
        if (!nodes_[id].detached) out.push_back(nodes_[id].depth);
    return out;
}

int ExplicitTree::last_leaf_depth() const { return last_leaf_ < 0 ? 0 : nodes_[last_leaf_].depth; }

int ExplicitTree::open_path_length() const {
    return attach_parent_ < 0 ? 0 : nodes_[attach_parent_].depth + 1;
}

}  // namespace satcast
