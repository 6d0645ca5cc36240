#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "satcast/solver.hpp"

namespace satcast {

// The event stream no longer matches any consistent branch state.
class TraceDesync : public std::logic_error {
    using std::logic_error::logic_error;
};

// One node on the branch from the root to the current search position. The
// node's depth is its index in the stack. `level` is the decision level whose
// assignment labels the edge into the node's left child; several entries may
// share a level (all but the deepest closed), which is how right-branch
// chains appear after same-level re-decisions.
struct BranchEntry {
    int level;
    bool closed;  // left subtree fully explored
    uint64_t conflicts_at_push;
};

struct BackjumpSummary {
    int leaf_depth;    // depth of the conflict leaf (stack size at the conflict)
    int target_depth;  // depth of the entry this backjump closed
    // Closed entries discarded above the target, deepest first. Unclosed
    // entries discarded at the same time are spliced out and appear nowhere:
    // the target's left subtree subsumes the whole region.
    std::vector<int> popped_closed_depths;
};

// A completed left subtree: the closed entry's depth and the conflicts spent
// inside that subtree (including the closing conflict).
struct SubtreeClose {
    int depth;
    uint64_t left_subtree_conflicts;
};

// Streaming reconstruction of the DPLL-style proper binary search tree
// implied by a CDCL event stream. Decisions descend left edges; a backjump to
// level t ends the left subtree of the deepest entry owning level t+1; a
// later decision at the same level starts that node's right branch one slot
// deeper. Restarting abandons the tree and starts a fresh one.
class BranchTracker {
public:
    void on_decide(int level);

    // Records the conflict leaf at the current position. Must precede the
    // matching on_backjump (or the terminal solved notification).
    void on_conflict();

    BackjumpSummary on_backjump(int to_level);

    // Depth of a top-level conflict leaf, ending the tree.
    int terminal_leaf_depth() const { return static_cast<int>(stack_.size()); }

    void on_restart();

    // Close produced by the most recent on_backjump.
    const SubtreeClose& last_close() const { return last_close_; }

    uint64_t conflicts_this_restart() const { return conflicts_; }
    const std::vector<BranchEntry>& stack() const { return stack_; }

private:
    std::vector<BranchEntry> stack_;
    SubtreeClose last_close_{};
    uint64_t conflicts_ = 0;
    bool conflict_pending_ = false;
    int pending_leaf_depth_ = 0;
};

// Per-event outcome of feeding one solver event through a BranchTracker.
struct BranchStep {
    std::optional<BackjumpSummary> summary;
    std::optional<SubtreeClose> close;
    bool terminal_unsat = false;
    int terminal_leaf_depth = 0;
    bool restarted = false;
};

// Online observers and offline trace replays both route through this, so the
// two modes cannot diverge.
BranchStep apply_event(BranchTracker& tracker, const SearchEvent& e);

// Test oracle: the same tree built with materialized nodes and parent links,
// deriving depths from the structure rather than from stack indices. Splices
// physically replace a node by its left child. Node counts and leaf depths
// refer to the current restart's tree and are meaningful for splice-free
// streams (chronological or exhaustive exploration).
class ExplicitTree {
public:
    void on_decide(int level);
    void on_conflict();
    BackjumpSummary on_backjump(int to_level);
    void on_restart();

    // Close produced by the most recent on_backjump, derived structurally:
    // the conflict count is the number of leaves reachable under the closed
    // node's left child rather than a chronological counter.
    SubtreeClose last_close() const;

    uint64_t node_count() const;
    std::vector<int> leaf_depths() const;  // conflict leaves, in creation order
    int last_leaf_depth() const;
    int open_path_length() const;

private:
    struct Node {
        int depth = 0;
        int parent = -1;
        int left = -1;
        int right = -1;
        int level = -1;  // -1 for leaves
        bool closed = false;
        bool detached = false;
    };

    int attach(int level, bool leaf);

    std::vector<Node> nodes_;
    std::vector<int> leaves_;  // creation order
    int attach_parent_ = -1;   // node whose next child slot receives the next node
    bool attach_right_ = false;
    int last_leaf_ = -1;
    int last_closed_ = -1;
};

BranchStep apply_event(ExplicitTree& tree, const SearchEvent& e);

}  // namespace satcast
