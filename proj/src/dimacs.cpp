#include "fmsat/dimacs.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace fmsat {

namespace {

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;
    int line = 1;

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    void advance() {
        if (text[pos] == '\n') ++line;
        ++pos;
    }
    void skip_space() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
    }
    void skip_line() {
        while (!eof() && peek() != '\n') advance();
        if (!eof()) advance();
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw DimacsError("line " + std::to_string(line) + ": " + msg);
    }
    long long read_int(const char* what) {
        skip_space();
        if (eof()) fail(std::string("expected ") + what + ", got end of input");
        bool negative = false;
        if (peek() == '-') {
            negative = true;
            advance();
        }
        if (eof() || !std::isdigit(static_cast<unsigned char>(peek())))
            fail(std::string("expected ") + what);
        long long value = 0;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
            value = value * 10 + (peek() - '0');
            if (value > 1000000000LL) fail("number out of range");
            advance();
        }
        return negative ? -value : value;
    }
};

}  // namespace

Formula parse_dimacs(const std::string& text, std::vector<std::string>* comments) {
    Cursor cur{text};
    long long declared_vars = -1, declared_clauses = -1;

    // Header: comments followed by exactly one problem line.
    for (;;) {
        cur.skip_space();
        if (cur.eof()) cur.fail("missing problem line");
        char c = cur.peek();
        if (c == 'c') {
            std::size_t start = cur.pos;
            cur.skip_line();
            if (comments) {
                std::size_t end = cur.pos;
                while (end > start && (text[end - 1] == '\n' || text[end - 1] == '\r')) --end;
                comments->push_back(text.substr(start, end - start));
            }
        } else if (c == 'p') {
            cur.advance();
            cur.skip_space();
            if (cur.pos + 3 > text.size() || text.compare(cur.pos, 3, "cnf") != 0)
                cur.fail("malformed problem line, expected 'p cnf'");
            cur.pos += 3;
            declared_vars = cur.read_int("variable count");
            declared_clauses = cur.read_int("clause count");
            if (declared_vars < 0 || declared_clauses < 0)
                cur.fail("negative counts in problem line");
            break;
        } else {
            cur.fail("unexpected character before problem line");
        }
    }

    std::vector<Clause> clauses;
    clauses.reserve(static_cast<std::size_t>(declared_clauses));
    std::vector<Lit> lits;

    for (;;) {
        cur.skip_space();
        if (cur.eof()) break;
        if (cur.peek() == 'c') {
            std::size_t start = cur.pos;
            cur.skip_line();
            if (comments) {
                std::size_t end = cur.pos;
                while (end > start && (text[end - 1] == '\n' || text[end - 1] == '\r')) --end;
                comments->push_back(text.substr(start, end - start));
            }
            continue;
        }
        if (cur.peek() == 'p') cur.fail("duplicate problem line");

        // A zero-terminated clause.
        lits.clear();
        for (;;) {
            long long v = cur.read_int("literal");
            if (v == 0) break;
            if (v > declared_vars || v < -declared_vars)
                cur.fail("literal " + std::to_string(v) + " out of declared range");
            lits.emplace_back(static_cast<int>(v));
            cur.skip_space();
            if (cur.eof()) cur.fail("clause missing terminating 0");
        }
        clauses.emplace_back(std::move(lits));
        lits = {};
    }

    if (static_cast<long long>(clauses.size()) != declared_clauses)
        throw DimacsError("clause count mismatch: header declares " +
                          std::to_string(declared_clauses) + ", found " +
                          std::to_string(clauses.size()));

    return Formula(static_cast<int>(declared_vars), std::move(clauses));
}

Formula read_dimacs_file(const std::string& path, std::vector<std::string>* comments) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DimacsError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_dimacs(ss.str(), comments);
}

std::string write_dimacs(const Formula& f) {
    std::ostringstream out;
    out << "p cnf " << f.num_vars() << ' ' << f.num_clauses() << '\n';
    for (const Clause& c : f.clauses()) {
        for (Lit l : c.literals()) out << l.code() << ' ';
        out << "0\n";
    }
    return out.str();
}

void write_dimacs_file(const Formula& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DimacsError("cannot open " + path + " for writing");
    out << write_dimacs(f);
}

}  // namespace fmsat
