#pragma once

#include <iosfwd>
#include <vector>

#include "satcast/solver.hpp"

namespace satcast {

// Line-delimited event trace. One event per line, space-separated:
//   d <level> <lit>                    decision
//   p <level> <lit>                    propagation
//   c <conflict_size> <learnt_size> <assigned_before>
//   b <from_level> <to_level> <assigned_after>
//   r <index> <limit>                  restart ("inf" for an unlimited limit)
//   s sat|unsat                        terminal status
// A budget-exhausted run simply ends without an s line. Replaying a trace
// through the analysis stack yields bit-identical results to observing the
// solve live (tested).
void write_trace_line(const SearchEvent& e, std::ostream& out);

class TraceWriter : public EventObserver {
public:
    explicit TraceWriter(std::ostream& out) : out_(out) {}
    void on_event(const SearchEvent& e) override { write_trace_line(e, out_); }

private:
    std::ostream& out_;
};

std::vector<SearchEvent> read_trace(std::istream& in);  // throws std::runtime_error
std::string write_trace(const std::vector<SearchEvent>& events);

}  // namespace satcast
