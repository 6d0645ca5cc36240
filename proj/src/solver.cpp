#include "satcast/solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace satcast {

namespace {

// Internal literal encoding: 2*v for variable v, 2*v+1 for its negation.
inline int ilit(int dimacs) { return dimacs > 0 ? 2 * (dimacs - 1) : 2 * (-dimacs - 1) + 1; }
inline int to_dimacs(int l) { return (l & 1) ? -((l >> 1) + 1) : (l >> 1) + 1; }
inline int ivar(int l) { return l >> 1; }
inline int ineg(int l) { return l ^ 1; }

// Sorted, duplicate-free internal literals; nullopt for tautologies.
std::optional<std::vector<int>> normalize_clause(const Clause& c) {
    std::vector<int> lits;
    lits.reserve(c.size());
    for (const Lit& l : c) lits.push_back(ilit(l.dimacs()));
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (size_t i = 1; i < lits.size(); ++i)
        if (ivar(lits[i - 1]) == ivar(lits[i])) return std::nullopt;  // x with ~x
    return lits;
}

struct Cls {
    std::vector<int> lits;
    double activity = 0.0;
    bool learnt = false;
    bool deleted = false;
};

struct Watch {
    int cref;
    int blocker;
};

// Indexed max-heap over variables ordered by (activity desc, index asc).
class VarHeap {
public:
    explicit VarHeap(const std::vector<double>& act) : act_(act) {}

    void grow(int n) { pos_.resize(n, -1); }
    bool contains(int v) const { return pos_[v] >= 0; }
    bool empty() const { return heap_.empty(); }
    int top() const { return heap_[0]; }

    void insert(int v) {
        if (contains(v)) return;
        pos_[v] = static_cast<int>(heap_.size());
        heap_.push_back(v);
        up(pos_[v]);
    }

    int pop() {
        const int v = heap_[0];
        heap_[0] = heap_.back();
        pos_[heap_[0]] = 0;
        heap_.pop_back();
        pos_[v] = -1;
        if (!heap_.empty()) down(0);
        return v;
    }

    void increased(int v) {
        if (contains(v)) up(pos_[v]);
    }

private:
    bool before(int a, int b) const {
        return act_[a] > act_[b] || (act_[a] == act_[b] && a < b);
    }
    void up(int i) {
        const int v = heap_[i];
        while (i > 0) {
            const int parent = (i - 1) >> 1;
            if (!before(v, heap_[parent])) break;
            heap_[i] = heap_[parent];
            pos_[heap_[i]] = i;
            i = parent;
        }
        heap_[i] = v;
        pos_[v] = i;
    }
    void down(int i) {
        const int v = heap_[i];
        const int n = static_cast<int>(heap_.size());
        while (true) {
            int child = 2 * i + 1;
            if (child >= n) break;
            if (child + 1 < n && before(heap_[child + 1], heap_[child])) ++child;
            if (!before(heap_[child], v)) break;
            heap_[i] = heap_[child];
            pos_[heap_[i]] = i;
            i = child;
        }
        heap_[i] = v;
        pos_[v] = i;
    }

    const std::vector<double>& act_;
    std::vector<int> heap_;
    std::vector<int> pos_;
};

constexpr double kVarActRescale = 1e100;
constexpr double kClaActRescale = 1e20;
constexpr double kClauseDecay = 0.999;

class Searcher {
public:
    Searcher(const Formula& f, const SolverConfig& cfg, std::span<EventObserver* const> observers)
        : cfg_(cfg), observers_(observers), nv_(f.num_vars), heap_(activity_) {
        assign_.resize(nv_, 0);
        reason_.resize(nv_, -1);
        level_.resize(nv_, 0);
        activity_.resize(nv_, 0.0);
        seen_.resize(nv_, 0);
        watches_.resize(2 * static_cast<size_t>(nv_));
        heap_.grow(nv_);
        for (int v = 0; v < nv_; ++v) heap_.insert(v);
        load_ok_ = load(f);
    }

    SolveOutcome run() {
        outcome_.per_restart_conflicts.assign(1, 0);
        if (!load_ok_) {
            emit(SolvedEvent{SolveStatus::unsat});
            outcome_.status = SolveStatus::unsat;
            return finish();
        }
        for (size_t i = 0; i < trail_.size(); ++i) emit(PropagateEvent{0, to_dimacs(trail_[i])});

        uint64_t restart_limit = restart_schedule(cfg_, restart_index_);
        while (true) {
            const int confl = propagate();
            if (confl >= 0) {
                ++outcome_.total_conflicts;
                ++outcome_.per_restart_conflicts.back();
                const int assigned_before = static_cast<int>(trail_.size());
                const int conflict_size = static_cast<int>(db_[confl].lits.size());

                if (decision_level() == 0) {
                    emit(ConflictEvent{conflict_size, 0, assigned_before});
                    emit(SolvedEvent{SolveStatus::unsat});
                    outcome_.status = SolveStatus::unsat;
                    return finish();
                }

                std::vector<int> learnt;
                int bt_level = 0;
                analyze(confl, learnt, bt_level);
                emit(ConflictEvent{conflict_size, static_cast<int>(learnt.size()), assigned_before});

                const int from_level = decision_level();
                cancel_until(bt_level);
                emit(BackjumpEvent{from_level, bt_level, static_cast<int>(trail_.size())});

                if (learnt.size() == 1) {
                    unchecked_enqueue(learnt[0], -1);
                } else {
                    const int cref = static_cast<int>(db_.size());
                    db_.push_back({std::move(learnt), cla_inc_, true, false});
                    attach(cref);
                    ++learnts_live_;
                    unchecked_enqueue(db_[cref].lits[0], cref);
                }

                var_inc_ /= cfg_.var_decay;
                cla_inc_ /= kClauseDecay;
                if (learnts_live_ > db_cap_) reduce_db();

                if (outcome_.total_conflicts >= cfg_.conflict_budget) {
                    outcome_.status = SolveStatus::budget_exhausted;
                    return finish();
                }
                if (outcome_.per_restart_conflicts.back() >= restart_limit) {
                    cancel_until(0);
                    ++restart_index_;
                    restart_limit = restart_schedule(cfg_, restart_index_);
                    outcome_.per_restart_conflicts.push_back(0);
                    emit(RestartEvent{restart_index_, restart_limit});
                }
            } else {
                if (static_cast<int>(trail_.size()) == nv_) {
                    outcome_.model.resize(nv_);
                    for (int v = 0; v < nv_; ++v) outcome_.model[v] = assign_[v] > 0;
                    emit(SolvedEvent{SolveStatus::sat});
                    outcome_.status = SolveStatus::sat;
                    return finish();
                }
                int next = -1;
                while (!heap_.empty()) {
                    const int v = heap_.pop();
                    if (assign_[v] == 0) {
                        next = v;
                        break;
                    }
                }
                const int lit = 2 * next + (cfg_.polarity_default ? 0 : 1);
                trail_lim_.push_back(static_cast<int>(trail_.size()));
                ++outcome_.total_decisions;
                assign_var(lit, -1);
                emit(DecideEvent{decision_level(), to_dimacs(lit)});
            }
        }
    }

private:
    int decision_level() const { return static_cast<int>(trail_lim_.size()); }
    int value(int lit) const {
        const int a = assign_[ivar(lit)];
        return (lit & 1) ? -a : a;
    }

    void emit(const SearchEvent& e) {
        for (EventObserver* o : observers_) o->on_event(e);
    }

    bool load(const Formula& f) {
        if (f.trivially_unsat) return false;
        uint64_t original = 0;
        for (const Clause& c : f.clauses) {
            auto norm = normalize_clause(c);
            if (!norm) continue;
            if (norm->empty()) return false;
            if (norm->size() == 1) {
                const int l = (*norm)[0];
                if (value(l) < 0) return false;
                if (value(l) == 0) assign_var(l, -1);
                continue;
            }
            const int cref = static_cast<int>(db_.size());
            db_.push_back({std::move(*norm), 0.0, false, false});
            attach(cref);
            ++original;
        }
        db_cap_ = cfg_.clause_db_cap == kUnlimited
                      ? kUnlimited
                      : std::max<uint64_t>(cfg_.clause_db_cap, original);
        return true;
    }

    void assign_var(int lit, int reason) {
        assign_[ivar(lit)] = (lit & 1) ? -1 : 1;
        level_[ivar(lit)] = decision_level();
        reason_[ivar(lit)] = reason;
        trail_.push_back(lit);
    }

    void unchecked_enqueue(int lit, int reason) {
        assign_var(lit, reason);
        emit(PropagateEvent{decision_level(), to_dimacs(lit)});
    }

    void attach(int cref) {
        const Cls& c = db_[cref];
        watches_[ineg(c.lits[0])].push_back({cref, c.lits[1]});
        watches_[ineg(c.lits[1])].push_back({cref, c.lits[0]});
    }

    void detach(int cref) {
        const Cls& c = db_[cref];
        for (int k = 0; k < 2; ++k) {
            auto& ws = watches_[ineg(c.lits[k])];
            for (size_t i = 0; i < ws.size(); ++i)
                if (ws[i].cref == cref) {
                    ws[i] = ws.back();
                    ws.pop_back();
                    break;
                }
        }
    }

    // Returns the conflicting clause ref, or -1.
    int propagate() {
        while (qhead_ < trail_.size()) {
            const int p = trail_[qhead_++];
            ++outcome_.total_propagations;
            auto& ws = watches_[p];
            size_t i = 0, j = 0;
            while (i < ws.size()) {
                const Watch w = ws[i];
                if (value(w.blocker) > 0) {
                    ws[j++] = ws[i++];
                    continue;
                }
                Cls& c = db_[w.cref];
                if (c.deleted) {
                    ++i;
                    continue;
                }
                const int false_lit = ineg(p);
                if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
                ++i;
                if (value(c.lits[0]) > 0) {
                    ws[j++] = {w.cref, c.lits[0]};
                    continue;
                }
                bool moved = false;
                for (size_t k = 2; k < c.lits.size(); ++k) {
                    if (value(c.lits[k]) >= 0) {
                        std::swap(c.lits[1], c.lits[k]);
                        watches_[ineg(c.lits[1])].push_back({w.cref, c.lits[0]});
                        moved = true;
                        break;
                    }
                }
                if (moved) continue;
                ws[j++] = {w.cref, c.lits[0]};
                if (value(c.lits[0]) < 0) {
                    qhead_ = trail_.size();
                    while (i < ws.size()) ws[j++] = ws[i++];
                    ws.resize(j);
                    return w.cref;
                }
                unchecked_enqueue(c.lits[0], w.cref);
            }
            ws.resize(j);
        }
        return -1;
    }

    void bump_var(int v) {
        activity_[v] += var_inc_;
        if (activity_[v] > kVarActRescale) {
            for (double& a : activity_) a *= 1.0 / kVarActRescale;
            var_inc_ *= 1.0 / kVarActRescale;
        }
        heap_.increased(v);
    }

    void bump_clause(Cls& c) {
        c.activity += cla_inc_;
        if (c.activity > kClaActRescale) {
            for (Cls& d : db_)
                if (d.learnt && !d.deleted) d.activity *= 1.0 / kClaActRescale;
            cla_inc_ *= 1.0 / kClaActRescale;
        }
    }

    // First-UIP conflict analysis. learnt[0] is the asserting literal and
    // learnt[1] the deepest remaining literal, whose level is the backjump
    // target.
    void analyze(int confl, std::vector<int>& learnt, int& bt_level) {
        learnt.push_back(0);  // placeholder for the asserting literal
        int counter = 0;
        int p = -1;
        size_t idx = trail_.size();

        while (true) {
            Cls& c = db_[confl];
            if (c.learnt) bump_clause(c);
            for (size_t k = (p == -1 ? 0 : 1); k < c.lits.size(); ++k) {
                const int q = c.lits[k];
                const int v = ivar(q);
                if (!seen_[v] && level_[v] > 0) {
                    seen_[v] = 1;
                    bump_var(v);
                    if (level_[v] >= decision_level())
                        ++counter;
                    else
                        learnt.push_back(q);
                }
            }
            while (!seen_[ivar(trail_[idx - 1])]) --idx;
            p = trail_[idx - 1];
            --idx;
            seen_[ivar(p)] = 0;
            --counter;
            if (counter == 0) break;
            confl = reason_[ivar(p)];
        }
        learnt[0] = ineg(p);

        bt_level = 0;
        if (learnt.size() > 1) {
            size_t max_i = 1;
            for (size_t k = 2; k < learnt.size(); ++k)
                if (level_[ivar(learnt[k])] > level_[ivar(learnt[max_i])]) max_i = k;
            std::swap(learnt[1], learnt[max_i]);
            bt_level = level_[ivar(learnt[1])];
        }
        for (size_t k = 1; k < learnt.size(); ++k) seen_[ivar(learnt[k])] = 0;
    }

    void cancel_until(int lvl) {
        if (decision_level() <= lvl) return;
        const int bound = trail_lim_[lvl];
        for (int k = static_cast<int>(trail_.size()) - 1; k >= bound; --k) {
            const int v = ivar(trail_[k]);
            assign_[v] = 0;
            reason_[v] = -1;
            heap_.insert(v);
        }
        trail_.resize(bound);
        trail_lim_.resize(lvl);
        qhead_ = trail_.size();
    }

    bool locked(int cref) const {
        const Cls& c = db_[cref];
        return value(c.lits[0]) > 0 && reason_[ivar(c.lits[0])] == cref;
    }

    // Evict the lowest-activity half of the live learnt clauses, keeping
    // clauses that are currently reasons.
    void reduce_db() {
        std::vector<int> order;
        order.reserve(learnts_live_);
        for (int cref = 0; cref < static_cast<int>(db_.size()); ++cref)
            if (db_[cref].learnt && !db_[cref].deleted && !locked(cref)) order.push_back(cref);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return db_[a].activity < db_[b].activity || (db_[a].activity == db_[b].activity && a < b);
        });
        uint64_t target = learnts_live_ / 2;
        for (int cref : order) {
            if (target == 0) break;
            detach(cref);
            db_[cref].deleted = true;
            db_[cref].lits.clear();
            db_[cref].lits.shrink_to_fit();
            --learnts_live_;
            --target;
        }
    }

    SolveOutcome finish() { return std::move(outcome_); }

    const SolverConfig& cfg_;
    std::span<EventObserver* const> observers_;
    int nv_;
    bool load_ok_;

    std::vector<Cls> db_;
    std::vector<std::vector<Watch>> watches_;
    std::vector<int8_t> assign_;
    std::vector<int> reason_;
    std::vector<int> level_;
    std::vector<int> trail_;
    std::vector<int> trail_lim_;
    size_t qhead_ = 0;

    std::vector<double> activity_;
    VarHeap heap_;
    std::vector<int8_t> seen_;
    double var_inc_ = 1.0;
    double cla_inc_ = 1.0;

    uint64_t learnts_live_ = 0;
    uint64_t db_cap_ = kUnlimited;
    uint64_t restart_index_ = 0;

    SolveOutcome outcome_;
};

}  // namespace

uint64_t restart_schedule(const SolverConfig& cfg, uint64_t index) {
    if (!cfg.restarts_enabled) return kUnlimited;
    const double x = static_cast<double>(cfg.restart_base) * std::pow(cfg.restart_factor, static_cast<double>(index));
    if (!(x < 9.0e18)) return kUnlimited;
    return static_cast<uint64_t>(std::llround(x));
}

void validate(const SolverConfig& cfg) {
    if (cfg.restart_base < 1) throw std::invalid_argument("restart_base must be >= 1");
    if (cfg.restarts_enabled && !(cfg.restart_factor > 1.0))
        throw std::invalid_argument("restart_factor must exceed 1 when restarts are enabled");
    if (!(cfg.var_decay > 0.0) || cfg.var_decay > 1.0)
        throw std::invalid_argument("var_decay must lie in (0, 1]");
    if (cfg.conflict_budget == 0) throw std::invalid_argument("conflict_budget must be >= 1");
}

SolveOutcome solve(const Formula& f, const SolverConfig& cfg, std::span<EventObserver* const> observers) {
    validate(cfg);
    Searcher s(f, cfg, observers);
    return s.run();
}

DbLoadStats db_load_stats(const Formula& f) {
    DbLoadStats s;
    for (const Clause& c : f.clauses) {
        auto norm = normalize_clause(c);
        if (!norm || norm->size() < 2) continue;
        ++s.clauses;
        if (norm->size() == 2) ++s.binary;
        if (norm->size() == 3) ++s.ternary;
        s.literal_sum += norm->size();
    }
    return s;
}

}  // namespace satcast
