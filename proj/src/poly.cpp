#include "h10/poly.hpp"

#include "h10/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

namespace h10::poly {

namespace {

// ---------------------------------------------------------------------------
// Tokenizer

enum class Tok { Int, Ident, Plus, Minus, Star, Caret, LParen, RParen, Equals, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

std::vector<Token> tokenize(const std::string& s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            out.push_back({Tok::Int, s.substr(i, j - i), i});
            i = j;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
                ++j;
            out.push_back({Tok::Ident, s.substr(i, j - i), i});
            i = j;
            continue;
        }
        Tok k;
        switch (c) {
            case '+': k = Tok::Plus; break;
            case '-': k = Tok::Minus; break;
            case '*': k = Tok::Star; break;
            case '^': k = Tok::Caret; break;
            case '(': k = Tok::LParen; break;
            case ')': k = Tok::RParen; break;
            case '=': k = Tok::Equals; break;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", i);
        }
        out.push_back({k, std::string(1, c), i});
        ++i;
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

// ---------------------------------------------------------------------------
// Parser.  Works directly on sparse exponent-map polynomials; exponent keys
// are padded lazily because the variable set grows as the input is read.

using Key = std::vector<std::uint32_t>;

struct KeyLess {
    bool operator()(const Key& a, const Key& b) const {
        std::size_t n = std::max(a.size(), b.size());
        for (std::size_t i = 0; i < n; ++i) {
            std::uint32_t x = i < a.size() ? a[i] : 0;
            std::uint32_t y = i < b.size() ? b[i] : 0;
            if (x != y) return x < y;
        }
        return false;
    }
};

// Term map.  KeyLess treats missing trailing exponents as zero, so keys
// created before later variables were registered stay valid.
using WPoly = std::map<Key, BigInt, KeyLess>;

WPoly wp_add(const WPoly& a, const WPoly& b, bool subtract) {
    WPoly r = a;
    for (const auto& [k, c] : b) {
        if (subtract)
            r[k] -= c;
        else
            r[k] += c;
    }
    return r;
}

WPoly wp_mul(const WPoly& a, const WPoly& b) {
    WPoly r;
    for (const auto& [ka, ca] : a) {
        for (const auto& [kb, cb] : b) {
            Key k(std::max(ka.size(), kb.size()), 0);
            for (std::size_t i = 0; i < ka.size(); ++i) k[i] += ka[i];
            for (std::size_t i = 0; i < kb.size(); ++i) k[i] += kb[i];
            r[k] += ca * cb;
        }
    }
    return r;
}

std::size_t nonzero_terms(const WPoly& p) {
    std::size_t n = 0;
    for (const auto& [k, c] : p)
        if (c != 0) ++n;
    return n;
}

struct Parser {
    std::vector<Token> toks;
    std::size_t cur = 0;
    ParseOptions opts;
    std::vector<std::string> vars;
    std::unordered_map<std::string, std::size_t> var_index;

    const Token& peek() const { return toks[cur]; }
    Token take() { return toks[cur++]; }

    [[noreturn]] void fail(const std::string& msg, const Token& t) const {
        throw ParseError(msg + (t.kind == Tok::End ? " at end of input"
                                                   : " near '" + t.text + "'"),
                         t.pos);
    }

    std::size_t var(const std::string& name) {
        auto it = var_index.find(name);
        if (it != var_index.end()) return it->second;
        std::size_t idx = vars.size();
        vars.push_back(name);
        var_index.emplace(name, idx);
        return idx;
    }

    // Returns the parsed value and whether it was a parenthesized sum
    // (more than one surviving term), which restricts exponentiation.
    std::pair<WPoly, bool> parse_base() {
        Token t = peek();
        if (t.kind == Tok::Int) {
            take();
            WPoly r;
            r[Key{}] = BigInt(t.text);
            return {r, false};
        }
        if (t.kind == Tok::Ident) {
            take();
            std::size_t j = var(t.text);
            Key k(j + 1, 0);
            k[j] = 1;
            WPoly r;
            r[k] = 1;
            return {r, false};
        }
        if (t.kind == Tok::LParen) {
            take();
            WPoly e = parse_expr();
            if (peek().kind != Tok::RParen) fail("expected ')'", peek());
            take();
            return {e, nonzero_terms(e) > 1};
        }
        fail("expected integer, variable, or '('", t);
    }

    WPoly parse_factor() {
        auto [base, is_sum] = parse_base();
        if (peek().kind != Tok::Caret) return base;
        Token caret = take();
        Token e = peek();
        if (e.kind != Tok::Int) fail("exponent must be a nonnegative integer", e);
        take();
        unsigned long long exp = 0;
        try {
            exp = std::stoull(e.text);
        } catch (...) {
            fail("exponent out of range", e);
        }
        if (exp > 0xFFFFFFFFull) fail("exponent out of range", e);
        if (is_sum && exp > opts.max_expansion_degree)
            throw ParseError("exponent " + e.text + " on a parenthesized sum exceeds the expansion bound " +
                                 std::to_string(opts.max_expansion_degree),
                             caret.pos);
        // Repeated multiplication; bounded by the expansion limit for sums
        // and cheap for single-term bases.
        if (base.size() <= 1 && exp > 64) {
            // Single term: exponentiate coefficient and key directly.
            WPoly r;
            if (base.empty()) {
                if (exp == 0) r[Key{}] = 1;
                return r;
            }
            const auto& [k, c] = *base.begin();
            bool constant = true;
            for (auto ke : k)
                if (ke != 0) constant = false;
            if (constant && exp > 1000000) fail("exponent out of range", e);
            Key kk(k.size(), 0);
            for (std::size_t i = 0; i < k.size(); ++i) {
                unsigned long long v = static_cast<unsigned long long>(k[i]) * exp;
                if (v > 0xFFFFFFFFull) fail("exponent out of range", e);
                kk[i] = static_cast<std::uint32_t>(v);
            }
            r[kk] = boost::multiprecision::pow(c, static_cast<unsigned>(exp));
            return r;
        }
        WPoly r;
        r[Key{}] = 1;
        for (unsigned long long i = 0; i < exp; ++i) r = wp_mul(r, base);
        return r;
    }

    WPoly parse_term() {
        WPoly r = parse_factor();
        while (peek().kind == Tok::Star) {
            take();
            r = wp_mul(r, parse_factor());
        }
        return r;
    }

    WPoly parse_expr() {
        bool negate = false;
        if (peek().kind == Tok::Plus) {
            take();
        } else if (peek().kind == Tok::Minus) {
            take();
            negate = true;
        }
        WPoly r = parse_term();
        if (negate) r = wp_add(WPoly{}, r, /*subtract=*/true);
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            bool sub = take().kind == Tok::Minus;
            r = wp_add(r, parse_term(), sub);
        }
        return r;
    }

    WPoly parse_equation() {
        WPoly lhs = parse_expr();
        if (peek().kind == Tok::Equals) {
            take();
            WPoly rhs = parse_expr();
            lhs = wp_add(lhs, rhs, /*subtract=*/true);
        }
        if (peek().kind != Tok::End) fail("unexpected token", peek());
        return lhs;
    }
};

// Canonical monomial order: total degree descending, then exponent vector
// lexicographically descending.
bool monomial_before(const Monomial& a, const Monomial& b) {
    std::uint64_t da = 0, db = 0;
    for (auto e : a.exps) da += e;
    for (auto e : b.exps) db += e;
    if (da != db) return da > db;
    return a.exps > b.exps;
}

}  // namespace

std::uint32_t Polynomial::degree() const {
    std::uint64_t d = 0;
    for (const auto& m : monomials) {
        std::uint64_t t = 0;
        for (auto e : m.exps) t += e;
        d = std::max(d, t);
    }
    return static_cast<std::uint32_t>(d);
}

bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.vars != b.vars || a.monomials.size() != b.monomials.size()) return false;
    for (std::size_t i = 0; i < a.monomials.size(); ++i)
        if (a.monomials[i].coeff != b.monomials[i].coeff || a.monomials[i].exps != b.monomials[i].exps)
            return false;
    return true;
}

Polynomial parse_equation(const std::string& text, const ParseOptions& opts) {
    Parser ps;
    ps.toks = tokenize(text);
    ps.opts = opts;
    WPoly w = ps.parse_equation();
    if (ps.vars.empty())
        throw ParseError("equation contains no variables", 0);

    Polynomial p;
    p.vars = ps.vars;
    const std::size_t K = p.vars.size();
    for (const auto& [k, c] : w) {
        if (c == 0) continue;
        Monomial m;
        m.coeff = c;
        m.exps.assign(K, 0);
        for (std::size_t i = 0; i < k.size(); ++i) m.exps[i] = k[i];
        p.monomials.push_back(std::move(m));
    }
    std::sort(p.monomials.begin(), p.monomials.end(), monomial_before);
    return p;
}

std::string print(const Polynomial& p) {
    const std::size_t K = p.num_vars();

    // Render one monomial (absolute value of the coefficient; sign handled
    // by the joiner).
    auto render = [&](const Monomial& m) {
        BigInt c = m.coeff < 0 ? BigInt(-m.coeff) : m.coeff;
        std::ostringstream os;
        bool any_var = false;
        for (auto e : m.exps)
            if (e > 0) any_var = true;
        bool wrote = false;
        if (!any_var || c != 1) {
            os << c.str();
            wrote = true;
        }
        for (std::size_t j = 0; j < K; ++j) {
            if (m.exps[j] == 0) continue;
            if (wrote) os << "*";
            os << p.vars[j];
            if (m.exps[j] > 1) os << "^" << m.exps[j];
            wrote = true;
        }
        return os.str();
    };

    // The printed form must re-register variables in their original order.
    // Check whether the natural term layout already introduces every
    // variable, in order; if not, pin the order with zero-coefficient
    // markers up front.
    std::vector<std::size_t> first_seen;
    std::vector<bool> seen(K, false);
    for (const auto& m : p.monomials)
        for (std::size_t j = 0; j < K; ++j)
            if (m.exps[j] > 0 && !seen[j]) {
                seen[j] = true;
                first_seen.push_back(j);
            }
    bool natural = first_seen.size() == K;
    for (std::size_t j = 0; natural && j < K; ++j)
        if (first_seen[j] != j) natural = false;

    std::ostringstream os;
    bool first = true;
    auto emit = [&](const std::string& body, bool negative) {
        if (first) {
            if (negative) os << "-";
            os << body;
            first = false;
        } else {
            os << (negative ? " - " : " + ") << body;
        }
    };
    if (!natural)
        for (std::size_t j = 0; j < K; ++j) emit("0*" + p.vars[j], false);
    for (const auto& m : p.monomials) emit(render(m), m.coeff < 0);
    return os.str();
}

Assignment to_assignment(const std::vector<std::int64_t>& occupancy) {
    Assignment a;
    a.reserve(occupancy.size());
    for (std::int64_t v : occupancy) a.emplace_back(v);
    return a;
}

BigInt evaluate(const Polynomial& p, const Assignment& a) {
    if (a.size() != p.num_vars())
        throw ConfigError("assignment has " + std::to_string(a.size()) + " values, polynomial has " +
                          std::to_string(p.num_vars()) + " variables");
    BigInt total = 0;
    for (const auto& m : p.monomials) {
        BigInt t = m.coeff;
        for (std::size_t j = 0; j < a.size(); ++j)
            if (m.exps[j] > 0) t *= boost::multiprecision::pow(a[j], m.exps[j]);
        total += t;
    }
    return total;
}

BigInt evaluate_squared(const Polynomial& p, const Assignment& a) {
    BigInt v = evaluate(p, a);
    return v * v;
}

namespace {

// Precomputed value^exponent tables for every (variable, exponent) pair the
// polynomial uses; turns inner-loop evaluation into table lookups.
struct PowTables {
    // tables[j] maps exponent -> per-value powers (index by n_j).
    std::vector<std::map<std::uint32_t, std::vector<BigInt>>> tables;

    PowTables(const Polynomial& p, const std::vector<std::int64_t>& cutoffs) {
        const std::size_t K = p.num_vars();
        tables.resize(K);
        for (const auto& m : p.monomials)
            for (std::size_t j = 0; j < K; ++j)
                if (m.exps[j] > 0) tables[j].emplace(m.exps[j], std::vector<BigInt>{});
        for (std::size_t j = 0; j < K; ++j)
            for (auto& [e, col] : tables[j]) {
                col.resize(static_cast<std::size_t>(cutoffs[j]));
                for (std::int64_t v = 0; v < cutoffs[j]; ++v)
                    col[static_cast<std::size_t>(v)] = boost::multiprecision::pow(BigInt(v), e);
            }
    }

    BigInt value_squared(const Polynomial& p, const std::vector<std::int64_t>& tuple) const {
        BigInt total = 0;
        for (const auto& m : p.monomials) {
            BigInt t = m.coeff;
            for (std::size_t j = 0; j < tuple.size(); ++j)
                if (m.exps[j] > 0)
                    t *= tables[j].at(m.exps[j])[static_cast<std::size_t>(tuple[j])];
            total += t;
        }
        return total * total;
    }
};

void decode(std::uint64_t linear, const std::vector<std::int64_t>& cutoffs,
            std::vector<std::int64_t>& tuple) {
    for (std::size_t j = cutoffs.size(); j-- > 0;) {
        tuple[j] = static_cast<std::int64_t>(linear % static_cast<std::uint64_t>(cutoffs[j]));
        linear /= static_cast<std::uint64_t>(cutoffs[j]);
    }
}

// Advance the tuple odometer-style (last variable fastest), matching
// lexicographic order of ascending linear index.
void advance(std::vector<std::int64_t>& tuple, const std::vector<std::int64_t>& cutoffs) {
    for (std::size_t j = tuple.size(); j-- > 0;) {
        if (++tuple[j] < cutoffs[j]) return;
        tuple[j] = 0;
    }
}

struct ChunkResult {
    std::optional<BigInt> min;
    std::vector<std::uint64_t> argmins;  // linear indices, ascending
};

ChunkResult scan_range(const Polynomial& p, const PowTables& tabs,
                       const std::vector<std::int64_t>& cutoffs, std::uint64_t begin,
                       std::uint64_t end) {
    ChunkResult r;
    std::vector<std::int64_t> tuple(cutoffs.size());
    decode(begin, cutoffs, tuple);
    for (std::uint64_t i = begin; i < end; ++i) {
        BigInt v = tabs.value_squared(p, tuple);
        if (!r.min || v < *r.min) {
            r.min = v;
            r.argmins.assign(1, i);
        } else if (v == *r.min) {
            r.argmins.push_back(i);
        }
        advance(tuple, cutoffs);
    }
    return r;
}

}  // namespace

BruteForceResult brute_force_min(const Polynomial& p, const std::vector<std::int64_t>& cutoffs,
                                 std::uint64_t budget, bool parallel) {
    const std::size_t K = p.num_vars();
    if (cutoffs.size() != K)
        throw ConfigError("got " + std::to_string(cutoffs.size()) + " cutoffs for " +
                          std::to_string(K) + " variables");
    BigInt vol = 1;
    for (auto c : cutoffs) {
        if (c < 1) throw ConfigError("cutoffs must be >= 1");
        vol *= c;
    }
    if (vol > BigInt(budget))
        throw ConfigError("search volume " + vol.str() + " exceeds budget " + std::to_string(budget));
    const std::uint64_t volume = static_cast<std::uint64_t>(vol);

    PowTables tabs(p, cutoffs);

    std::vector<ChunkResult> chunks;
    if (!parallel) {
        chunks.push_back(scan_range(p, tabs, cutoffs, 0, volume));
    } else {
        const std::uint64_t chunk = 4096;  // fixed size keeps chunk boundaries thread-independent
        const std::uint64_t n_chunks = (volume + chunk - 1) / chunk;
        chunks.resize(static_cast<std::size_t>(n_chunks));
#pragma omp parallel for schedule(static) num_threads(par::thread_budget())
        for (std::int64_t c = 0; c < static_cast<std::int64_t>(n_chunks); ++c) {
            std::uint64_t b = static_cast<std::uint64_t>(c) * chunk;
            chunks[static_cast<std::size_t>(c)] =
                scan_range(p, tabs, cutoffs, b, std::min(b + chunk, volume));
        }
    }

    // Ordered merge: chunk order is fixed, so the result is identical for
    // any thread count.
    BruteForceResult out;
    out.points_scanned = volume;
    std::vector<std::uint64_t> argmins;
    std::optional<BigInt> best;
    for (const auto& ch : chunks) {
        if (!ch.min) continue;
        if (!best || *ch.min < *best) {
            best = ch.min;
            argmins = ch.argmins;
        } else if (*ch.min == *best) {
            argmins.insert(argmins.end(), ch.argmins.begin(), ch.argmins.end());
        }
    }
    out.min_value = *best;
    out.argmins.reserve(argmins.size());
    std::vector<std::int64_t> tuple(K);
    for (auto li : argmins) {
        decode(li, cutoffs, tuple);
        Assignment a(K);
        for (std::size_t j = 0; j < K; ++j) a[j] = tuple[j];
        out.argmins.push_back(std::move(a));
    }
    return out;
}

}  // namespace h10::poly
