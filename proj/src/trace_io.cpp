#include "satcast/trace_io.hpp"

#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace satcast {

namespace {

struct LineWriter {
    std::ostream& out;
    void operator()(const DecideEvent& e) const { out << "d " << e.level << ' ' << e.lit << '\n'; }
    void operator()(const PropagateEvent& e) const { out << "p " << e.level << ' ' << e.lit << '\n'; }
    void operator()(const ConflictEvent& e) const {
        out << "c " << e.conflict_clause_size << ' ' << e.learnt_clause_size << ' ' << e.assigned_before
            << '\n';
    }
    void operator()(const BackjumpEvent& e) const {
        out << "b " << e.from_level << ' ' << e.to_level << ' ' << e.assigned_after << '\n';
    }
    void operator()(const RestartEvent& e) const {
        out << "r " << e.index << ' ';
        if (e.conflict_limit == kUnlimited)
            out << "inf";
        else
            out << e.conflict_limit;
        out << '\n';
    }
    void operator()(const SolvedEvent& e) const {
        out << "s " << (e.status == SolveStatus::sat ? "sat" : "unsat") << '\n';
    }
};

[[noreturn]] void bad_line(int line_no, const std::string& line) {
    throw std::runtime_error("trace line " + std::to_string(line_no) + ": malformed '" + line + "'");
}

}  // namespace

void write_trace_line(const SearchEvent& e, std::ostream& out) { std::visit(LineWriter{out}, e); }

std::string write_trace(const std::vector<SearchEvent>& events) {
    std::ostringstream os;
    for (const SearchEvent& e : events) write_trace_line(e, os);
    return os.str();
}

std::vector<SearchEvent> read_trace(std::istream& in) {
    std::vector<SearchEvent> events;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        char tag = 0;
        ls >> tag;
        switch (tag) {
            case 'd': {
                DecideEvent e{};
                if (!(ls >> e.level >> e.lit)) bad_line(line_no, line);
                events.emplace_back(e);
                break;
            }
            case 'p': {
                PropagateEvent e{};
                if (!(ls >> e.level >> e.lit)) bad_line(line_no, line);
                events.emplace_back(e);
                break;
            }
            case 'c': {
                ConflictEvent e{};
                if (!(ls >> e.conflict_clause_size >> e.learnt_clause_size >> e.assigned_before))
                    bad_line(line_no, line);
                events.emplace_back(e);
                break;
            }
            case 'b': {
                BackjumpEvent e{};
                if (!(ls >> e.from_level >> e.to_level >> e.assigned_after)) bad_line(line_no, line);
                events.emplace_back(e);
                break;
            }
            case 'r': {
                RestartEvent e{};
                std::string limit;
                if (!(ls >> e.index >> limit)) bad_line(line_no, line);
                if (limit == "inf")
                    e.conflict_limit = kUnlimited;
                else
                    try {
                        e.conflict_limit = std::stoull(limit);
                    } catch (const std::exception&) {
                        bad_line(line_no, line);
                    }
                events.emplace_back(e);
                break;
            }
            case 's': {
                std::string status;
                if (!(ls >> status)) bad_line(line_no, line);
                if (status == "sat")
                    events.emplace_back(SolvedEvent{SolveStatus::sat});
                else if (status == "unsat")
                    events.emplace_back(SolvedEvent{SolveStatus::unsat});
                else
                    bad_line(line_no, line);
                break;
            }
            default:
                bad_line(line_no, line);
        }
    }
    return events;
}

}  // namespace satcast
