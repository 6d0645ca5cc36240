// Independent reference implementations the tests check production code
// against. Everything here is deliberately written by a different route than
// the code under test: truth tables instead of CDCL, materialized trees
// instead of branch stacks, Gauss-Jordan instead of a factorization, two-pass
// statistics instead of streaming ones.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "satcast/cnf.hpp"
#include "satcast/rng.hpp"
#include "satcast/solver.hpp"

namespace oracles {

// Absolute-tolerance comparison (doctest's Approx is relative-only).
inline bool near(double a, double b, double abs_tol) { return std::abs(a - b) <= abs_tol; }

// --- satisfiability by exhaustive truth table (small formulas only) --------

inline satcast::Clause make_clause(std::initializer_list<int> lits) {
    satcast::Clause c;
    for (const int lit : lits) c.push_back(satcast::Lit::from_dimacs(lit));
    return c;
}

inline bool clause_satisfied(const satcast::Clause& clause, uint32_t assignment) {
    for (const satcast::Lit lit : clause) {
        const bool value = (assignment >> (lit.var - 1)) & 1u;
        if (lit.positive == value) return true;
    }
    return false;
}

inline bool ref_satisfiable(const satcast::Formula& f) {
    if (f.num_vars > 24) throw std::invalid_argument("truth table limited to 24 variables");
    if (f.trivially_unsat) return false;
    const uint64_t total = uint64_t{1} << f.num_vars;
    for (uint64_t a = 0; a < total; ++a) {
        bool ok = true;
        for (const auto& clause : f.clauses) {
            if (!clause_satisfied(clause, static_cast<uint32_t>(a))) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    }
    return false;
}

inline bool verify_model(const satcast::Formula& f, const std::vector<bool>& model) {
    if (model.size() != static_cast<size_t>(f.num_vars)) return false;
    for (const auto& clause : f.clauses) {
        bool ok = false;
        for (const satcast::Lit lit : clause) {
            if (lit.positive == model[static_cast<size_t>(lit.var) - 1]) {
                ok = true;
                break;
            }
        }
        if (!ok) return false;
    }
    return true;
}

// Pigeonhole principle with `holes`+1 pigeons: small, provably unsatisfiable,
// and hard enough to exercise learning.
inline satcast::Formula pigeonhole(int holes) {
    const int pigeons = holes + 1;
    satcast::Formula f;
    f.num_vars = pigeons * holes;
    const auto var = [holes](int pigeon, int hole) { return pigeon * holes + hole + 1; };
    for (int p = 0; p < pigeons; ++p) {
        satcast::Clause clause;
        for (int h = 0; h < holes; ++h) clause.push_back(satcast::Lit::from_dimacs(var(p, h)));
        f.clauses.push_back(clause);
    }
    for (int h = 0; h < holes; ++h)
        for (int p = 0; p < pigeons; ++p)
            for (int q = p + 1; q < pigeons; ++q)
                f.clauses.push_back(make_clause({-var(p, h), -var(q, h)}));
    return f;
}

// --- materialized proper binary trees and their chronological traces --------

struct ProbeTree {
    // Node 0 is the root; children[i] empty means leaf.
    std::vector<int> left, right, depth;

    size_t node_count() const { return left.size(); }
    bool is_leaf(int n) const { return left[static_cast<size_t>(n)] < 0; }
};

// Proper binary tree with `leaves` leaves (2*leaves - 1 nodes); each internal
// node splits its leaf budget at a uniform fraction within [lo, hi].
inline ProbeTree make_tree(satcast::Rng& rng, int leaves, double lo = 0.25, double hi = 0.75) {
    ProbeTree t;
    struct Item {
        int node, leaves, depth;
    };
    t.left.push_back(-1);
    t.right.push_back(-1);
    t.depth.push_back(0);
    std::vector<Item> todo{{0, leaves, 0}};
    while (!todo.empty()) {
        const Item item = todo.back();
        todo.pop_back();
        if (item.leaves == 1) continue;
        const double u = lo + rng.unit() * (hi - lo);
        int k = static_cast<int>(std::lround(u * item.leaves));
        k = std::clamp(k, 1, item.leaves - 1);
        const int l = static_cast<int>(t.left.size());
        t.left.push_back(-1);
        t.right.push_back(-1);
        t.depth.push_back(item.depth + 1);
        const int r = static_cast<int>(t.left.size());
        t.left.push_back(-1);
        t.right.push_back(-1);
        t.depth.push_back(item.depth + 1);
        t.left[static_cast<size_t>(item.node)] = l;
        t.right[static_cast<size_t>(item.node)] = r;
        todo.push_back({l, k, item.depth + 1});
        todo.push_back({r, item.leaves - k, item.depth + 1});
    }
    return t;
}

// A degenerate spine: every left child is a leaf, depth `levels`. Exercises
// the deep, unbalanced end that balanced random splits never reach.
inline ProbeTree make_spine(int levels) {
    ProbeTree t;
    t.left.push_back(-1);
    t.right.push_back(-1);
    t.depth.push_back(0);
    int node = 0;
    for (int d = 0; d < levels; ++d) {
        const int l = static_cast<int>(t.left.size());
        t.left.push_back(-1);
        t.right.push_back(-1);
        t.depth.push_back(d + 1);
        const int r = static_cast<int>(t.left.size());
        t.left.push_back(-1);
        t.right.push_back(-1);
        t.depth.push_back(d + 1);
        t.left[static_cast<size_t>(node)] = l;
        t.right[static_cast<size_t>(node)] = r;
        node = r;  // keep descending the right edge
    }
    return t;
}

// Chronological depth-first exploration of the whole tree, rendered as a
// solver event stream plus the conflict-leaf depth multiset in visit order.
// Decisions descend left edges; each conflict backjumps to the deepest
// ancestor whose right child is still unexplored.
struct DfsTrace {
    std::vector<satcast::SearchEvent> events;
    std::vector<int> leaf_depths;             // oracle multiset, one per conflict
    std::vector<size_t> conflict_positions;   // index into events of each conflict
};

inline DfsTrace emit_dfs(const ProbeTree& t) {
    DfsTrace out;
    struct Frame {
        int node;
        int level;  // decision level emitted for this node's decide
        bool took_right;
    };
    std::vector<Frame> path;  // internal ancestors of the current node
    // Mirror of the branch stack's (level, closed) pairs, to emit decide
    // levels the way a real solver would: a right branch re-decides at the
    // closed owner's level, so levels repeat along right-descent chains while
    // depth keeps growing.
    std::vector<std::pair<int, bool>> mirror;
    int node = 0;
    for (;;) {
        while (!t.is_leaf(node)) {
            const int level = mirror.empty() ? 1
                              : mirror.back().second ? mirror.back().first
                                                     : mirror.back().first + 1;
            mirror.emplace_back(level, false);
            out.events.push_back(satcast::DecideEvent{level, level});
            path.push_back({node, level, false});
            node = t.left[static_cast<size_t>(node)];
        }
        const int leaf_depth = t.depth[static_cast<size_t>(node)];
        out.conflict_positions.push_back(out.events.size());
        out.events.push_back(satcast::ConflictEvent{2, 1, leaf_depth});
        out.leaf_depths.push_back(leaf_depth);
        while (!path.empty() && path.back().took_right) path.pop_back();
        if (path.empty()) {
            out.events.push_back(satcast::SolvedEvent{satcast::SolveStatus::unsat});
            return out;
        }
        // Close the deepest ancestor whose right child is unexplored: jump to
        // one level below the level its decide was emitted at.
        const int target_level = path.back().level;
        const int from_level = mirror.back().first;
        out.events.push_back(satcast::BackjumpEvent{from_level, target_level - 1, leaf_depth});
        // Unwind the mirror the way BranchTracker will: drop entries deeper
        // than the target level, close the deepest (open) owner of it.
        while (!mirror.empty() && mirror.back().first > target_level) mirror.pop_back();
        if (mirror.empty() || mirror.back().first != target_level || mirror.back().second)
            throw std::logic_error("emitter desync");
        mirror.back().second = true;
        path.back().took_right = true;
        node = t.right[static_cast<size_t>(path.back().node)];
    }
}

// Direct weighted-probe estimate over a leaf-depth multiset, in the linear
// domain. Usable whenever the values stay finite (depths < ~1000).
inline double direct_estimate_linear(const std::vector<int>& leaf_depths) {
    double num = 0.0, den = 0.0;
    for (const int d : leaf_depths) {
        num += std::exp2(-d) * (std::exp2(d + 1) - 1.0);
        den += std::exp2(-d);
    }
    return num / den;
}

// --- ordinary least squares via Gauss-Jordan --------------------------------

// Solves min ||y - Xw - b||² by the normal equations on the raw (intercept-
// augmented) design, with partial pivoting. Returns {w..., b}.
inline std::vector<double> ols_gauss_jordan(const std::vector<std::vector<double>>& X,
                                            const std::vector<double>& y) {
    const size_t n = X.size(), p = X.empty() ? 0 : X[0].size();
    const size_t m = p + 1;  // intercept last
    std::vector<std::vector<double>> A(m, std::vector<double>(m + 1, 0.0));
    const auto cell = [&](size_t i, size_t j) {
        double s = 0.0;
        for (size_t r = 0; r < n; ++r) {
            const double xi = i < p ? X[r][i] : 1.0;
            const double xj = j < p ? X[r][j] : 1.0;
            s += xi * xj;
        }
        return s;
    };
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = 0; j < m; ++j) A[i][j] = cell(i, j);
        double s = 0.0;
        for (size_t r = 0; r < n; ++r) s += (i < p ? X[r][i] : 1.0) * y[r];
        A[i][m] = s;
    }
    for (size_t col = 0; col < m; ++col) {
        size_t pivot = col;
        for (size_t r = col + 1; r < m; ++r)
            if (std::abs(A[r][col]) > std::abs(A[pivot][col])) pivot = r;
        std::swap(A[col], A[pivot]);
        if (std::abs(A[col][col]) < 1e-12) throw std::runtime_error("singular design");
        const double inv = 1.0 / A[col][col];
        for (size_t j = col; j <= m; ++j) A[col][j] *= inv;
        for (size_t r = 0; r < m; ++r) {
            if (r == col) continue;
            const double f = A[r][col];
            for (size_t j = col; j <= m; ++j) A[r][j] -= f * A[col][j];
        }
    }
    std::vector<double> w(m);
    for (size_t i = 0; i < m; ++i) w[i] = A[i][m];
    return w;
}

// --- two-pass statistics ------------------------------------------------------

struct TwoPass {
    double mean = 0.0, sd = 0.0, min = 0.0, max = 0.0, last = 0.0;
};

inline TwoPass two_pass(const std::vector<double>& xs) {
    TwoPass r;
    if (xs.empty()) return r;
    r.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    double ss = 0.0;
    for (const double x : xs) ss += (x - r.mean) * (x - r.mean);
    r.sd = std::sqrt(ss / static_cast<double>(xs.size()));
    r.min = *std::min_element(xs.begin(), xs.end());
    r.max = *std::max_element(xs.begin(), xs.end());
    r.last = xs.back();
    return r;
}

// --- error factor, recomputed the long way -----------------------------------

inline double ref_error_factor(const std::vector<double>& preds, const std::vector<double>& truths,
                               double k) {
    size_t within = 0;
    for (size_t i = 0; i < preds.size(); ++i) {
        if (!(preds[i] > 0.0) || !std::isfinite(preds[i])) continue;
        const double log_gap = std::abs(std::log(preds[i]) - std::log(truths[i]));
        if (log_gap <= std::log(k) + 1e-12) ++within;
    }
    return 100.0 * static_cast<double>(within) / static_cast<double>(preds.size());
}

// Event recorder for replay tests.
struct Recorder : satcast::EventObserver {
    std::vector<satcast::SearchEvent> events;
    void on_event(const satcast::SearchEvent& e) override { events.push_back(e); }
};

}  // namespace oracles
