#pragma once

// Text serialization shared by the library and the CLI.
//
// Polynomial files: first line `sp <version> <nvars>` (version is 1), then
// one line per term, `<coeff> <e1> ... <en>` in decimal. Blank lines and
// lines starting with `#` are ignored. Writers emit canonical (sorted) term
// order. Exponent-set files: one decimal integer per line, same comment and
// blank-line rules.

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "polycore.hpp"

namespace spmul {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline bool skippable(const std::string& line) {
    for (char ch : line) {
        if (ch == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(ch))) return false;
    }
    return true;
}

inline ZZ parse_zz(const std::string& tok, const char* what) {
    // mpz accepts leading +/- and digits; reject anything else loudly
    if (tok.empty()) throw ParseError(std::string(what) + ": empty integer");
    std::size_t i = (tok[0] == '+' || tok[0] == '-') ? 1 : 0;
    if (i == tok.size()) throw ParseError(std::string(what) + ": bad integer '" + tok + "'");
    for (; i < tok.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(tok[i])))
            throw ParseError(std::string(what) + ": bad integer '" + tok + "'");
    return ZZ(tok);
}

} // namespace detail

inline void write_poly(std::ostream& os, const MultiPoly& f) {
    os << "sp 1 " << f.nvars() << "\n";
    for (const auto& t : f.terms()) {
        os << t.c.get_str();
        for (const auto& e : t.e) os << ' ' << e.get_str();
        os << "\n";
    }
}

inline MultiPoly read_poly(std::istream& is) {
    std::string line;
    // header
    while (std::getline(is, line))
        if (!detail::skippable(line)) break;
    std::istringstream hdr(line);
    std::string tag;
    long version = 0, nvars = 0;
    if (!(hdr >> tag >> version >> nvars) || tag != "sp")
        throw ParseError("polynomial file: expected header 'sp <version> <nvars>'");
    if (version != 1) throw ParseError("polynomial file: unsupported version");
    if (nvars < 1) throw ParseError("polynomial file: nvars must be >= 1");

    std::vector<MTerm> terms;
    while (std::getline(is, line)) {
        if (detail::skippable(line)) continue;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        MTerm t{detail::parse_zz(tok, "coefficient"), {}};
        for (long v = 0; v < nvars; ++v) {
            if (!(ls >> tok)) throw ParseError("polynomial file: term with too few exponents");
            t.e.push_back(detail::parse_zz(tok, "exponent"));
        }
        if (ls >> tok) throw ParseError("polynomial file: term with too many exponents");
        terms.push_back(std::move(t));
    }
    return MultiPoly::from_terms(static_cast<int>(nvars), std::move(terms));
}

inline void write_set(std::ostream& os, const ExponentSet& s) {
    for (const auto& v : s.values()) os << v.get_str() << "\n";
}

inline ExponentSet read_set(std::istream& is) {
    std::vector<ZZ> vals;
    std::string line;
    while (std::getline(is, line)) {
        if (detail::skippable(line)) continue;
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        vals.push_back(detail::parse_zz(tok, "set element"));
        if (ls >> tok) throw ParseError("set file: one integer per line");
    }
    return ExponentSet::from_values(std::move(vals));
}

// ------------------------------------------------------------ file wrappers

inline void write_poly_file(const std::string& path, const MultiPoly& f) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_poly(os, f);
    if (!os) throw std::runtime_error("write failed: " + path);
}

inline MultiPoly read_poly_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);
    return read_poly(is);
}

inline void write_set_file(const std::string& path, const ExponentSet& s) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_set(os, s);
    if (!os) throw std::runtime_error("write failed: " + path);
}

inline ExponentSet read_set_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);
    return read_set(is);
}

// univariate <-> multivariate bridges used by the CLI

inline MultiPoly to_multi(const SparsePoly& f) {
    std::vector<MTerm> ts;
    ts.reserve(f.nnz());
    for (const auto& t : f.terms()) ts.push_back({t.c, {t.e}});
    return MultiPoly::from_terms(1, std::move(ts));
}

inline SparsePoly to_univariate(const MultiPoly& f) {
    if (f.nvars() != 1) throw std::invalid_argument("to_univariate: polynomial has several variables");
    std::vector<Term> ts;
    ts.reserve(f.nnz());
    for (const auto& t : f.terms()) ts.push_back({t.c, t.e[0]});
    return SparsePoly::from_terms(std::move(ts));
}

} // namespace spmul
