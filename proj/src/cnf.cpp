#include "satcast/cnf.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "satcast/rng.hpp"

namespace satcast {

namespace {

const char kOriginPrefix[] = "c origin: ";

}  // namespace

ParseResult parse_dimacs(std::istream& in) {
    ParseResult result;
    Formula& f = result.formula;

    std::string line;
    int declared_clauses = -1;
    int line_no = 0;
    bool saw_header = false;
    Clause current;
    bool in_clause = false;
    bool done = false;

    while (!done && std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == 'c') {
            if (line.rfind(kOriginPrefix, 0) == 0) f.origin = line.substr(sizeof(kOriginPrefix) - 1);
            continue;
        }
        if (line[0] == '%') break;  // satlib-style trailer
        if (line[0] == 'p') {
            if (saw_header) throw ParseError("line " + std::to_string(line_no) + ": duplicate header");
            std::istringstream hs(line);
            std::string p, fmt;
            int v = 0, c = 0;
            if (!(hs >> p >> fmt >> v >> c) || fmt != "cnf" || v < 0 || c < 0)
                throw ParseError("line " + std::to_string(line_no) + ": malformed header");
            f.num_vars = v;
            declared_clauses = c;
            saw_header = true;
            continue;
        }
        if (!saw_header) throw ParseError("line " + std::to_string(line_no) + ": clause before header");

        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) {
            if (tok == "%") { done = true; break; }
            int d = 0;
            try {
                size_t pos = 0;
                d = std::stoi(tok, &pos);
                if (pos != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw ParseError("line " + std::to_string(line_no) + ": bad token '" + tok + "'");
            }
            if (d == 0) {
                if (current.empty()) f.trivially_unsat = true;
                f.clauses.push_back(std::move(current));
                current.clear();
                in_clause = false;
            } else {
                const int v = d < 0 ? -d : d;
                if (v > f.num_vars)
                    throw ParseError("line " + std::to_string(line_no) + ": variable " + std::to_string(v) +
                                     " exceeds declared " + std::to_string(f.num_vars));
                current.push_back(Lit::from_dimacs(d));
                in_clause = true;
            }
        }
    }

    if (!saw_header) throw ParseError("missing 'p cnf' header");
    if (in_clause) throw ParseError("unterminated clause at end of input");
    result.clause_count_mismatch = declared_clauses != static_cast<int>(f.clauses.size());
    return result;
}

ParseResult parse_dimacs_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    ParseResult r = parse_dimacs(in);
    if (r.formula.origin.empty()) r.formula.origin = path;
    return r;
}

void write_dimacs(const Formula& f, std::ostream& out) {
    if (!f.origin.empty()) out << kOriginPrefix << f.origin << '\n';
    out << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
    for (const Clause& c : f.clauses) {
        for (const Lit& l : c) out << l.dimacs() << ' ';
        out << "0\n";
    }
}

std::string write_dimacs(const Formula& f) {
    std::ostringstream os;
    write_dimacs(f, os);
    return os.str();
}

Formula generate_random_ksat(const GeneratorConfig& cfg) {
    if (cfg.num_vars < cfg.clause_size || cfg.clause_size < 1 || cfg.clause_ratio < 0)
        throw std::invalid_argument("generate_random_ksat: bad config");

    Formula f;
    f.num_vars = cfg.num_vars;
    const auto num_clauses = static_cast<size_t>(std::llround(cfg.clause_ratio * cfg.num_vars));
    f.clauses.reserve(num_clauses);

    Rng rng(cfg.seed);
    std::vector<int> picked(cfg.clause_size);
    for (size_t i = 0; i < num_clauses; ++i) {
        Clause c;
        c.reserve(cfg.clause_size);
        for (int j = 0; j < cfg.clause_size; ++j) {
            int v;
            bool fresh;
            do {
                v = static_cast<int>(rng.below(static_cast<uint64_t>(cfg.num_vars))) + 1;
                fresh = true;
                for (int t = 0; t < j; ++t)
                    if (picked[t] == v) { fresh = false; break; }
            } while (!fresh);
            picked[j] = v;
            c.push_back({v, rng.coin()});
        }
        f.clauses.push_back(std::move(c));
    }

    std::ostringstream origin;
    origin << "ksat n=" << cfg.num_vars << " ratio=" << cfg.clause_ratio << " k=" << cfg.clause_size
           << " seed=" << cfg.seed;
    f.origin = origin.str();
    return f;
}

FormulaStats static_stats(const Formula& f) {
    FormulaStats s;
    s.num_vars = f.num_vars;
    s.num_clauses = static_cast<double>(f.clauses.size());
    size_t lits = 0, bin = 0, tern = 0;
    for (const Clause& c : f.clauses) {
        lits += c.size();
        if (c.size() == 2) ++bin;
        if (c.size() == 3) ++tern;
    }
    if (f.num_vars > 0) s.clauses_per_var = s.num_clauses / s.num_vars;
    if (!f.clauses.empty()) {
        s.vars_per_clause = s.num_vars / s.num_clauses;
        s.frac_binary = static_cast<double>(bin) / s.num_clauses;
        s.frac_ternary = static_cast<double>(tern) / s.num_clauses;
        s.avg_clause_size = static_cast<double>(lits) / s.num_clauses;
    }
    return s;
}

}  // namespace satcast
