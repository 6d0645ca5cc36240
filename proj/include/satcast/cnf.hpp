#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace satcast {

struct Lit {
    int var = 0;  // >= 1
    bool positive = true;

    int dimacs() const { return positive ? var : -var; }
    static Lit from_dimacs(int d) { return {d < 0 ? -d : d, d > 0}; }
    bool operator==(const Lit&) const = default;
};

using Clause = std::vector<Lit>;

struct Formula {
    int num_vars = 0;
    std::vector<Clause> clauses;
    std::string origin;             // provenance label; survives a write/parse cycle
    bool trivially_unsat = false;   // an empty clause was present

    bool operator==(const Formula&) const = default;
};

struct GeneratorConfig {
    int num_vars = 0;
    double clause_ratio = 0.0;  // clauses = round(clause_ratio * num_vars)
    int clause_size = 3;
    uint64_t seed = 0;
};

// Statistics of the formula as written, before any solver preprocessing.
struct FormulaStats {
    double num_vars = 0;
    double num_clauses = 0;
    double clauses_per_var = 0;
    double vars_per_clause = 0;
    double frac_binary = 0;
    double frac_ternary = 0;
    double avg_clause_size = 0;
};

class ParseError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseResult {
    Formula formula;
    // Header clause count differed from the clauses actually present. The
    // formula is still usable; callers decide whether to care.
    bool clause_count_mismatch = false;
};

ParseResult parse_dimacs(std::istream& in);
ParseResult parse_dimacs_file(const std::string& path);

// Canonical form: optional "c origin:" comment, "p cnf" header, one
// zero-terminated clause per line. Writing the same formula twice yields
// identical bytes, and parse(write(f)) == f.
void write_dimacs(const Formula& f, std::ostream& out);
std::string write_dimacs(const Formula& f);

// Fixed-width random k-SAT: round(clause_ratio * num_vars) clauses, each over
// clause_size distinct variables with independent fair-coin signs. Duplicate
// clauses may occur; that matches the generation model the ensembles assume.
Formula generate_random_ksat(const GeneratorConfig& cfg);

FormulaStats static_stats(const Formula& f);

}  // namespace satcast
