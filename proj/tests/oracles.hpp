#pragma once

// Independent brute-force reference computations used to freeze expected values.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

// smallest x in [0,p) with a*x = 1 mod p
inline std::optional<uint32_t> inverse_mod(uint32_t a, uint32_t p)
{
    for (uint32_t x = 0; x < p; ++x)
        if ((uint64_t(a) * x) % p == 1)
            return x;
    return std::nullopt;
}

// a*b in F_p[w]/(m), schoolbook then long division, coefficients low to high
inline std::vector<uint32_t> fq_mul(std::vector<uint32_t> a, std::vector<uint32_t> b, const std::vector<uint32_t> &m,
                                    uint32_t p)
{
    std::vector<uint32_t> r(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    const std::size_t d = m.size() - 1;
    for (std::size_t k = r.size(); k-- > d;) {
        const uint32_t c = r[k];
        if (!c)
            continue;
        for (std::size_t i = 0; i <= d; ++i)
            r[k - d + i] = (r[k - d + i] + (p - c) * m[i]) % p;
    }
    r.resize(d);
    return r;
}

// all x in [0, p^N) with x = a mod p and x^p = x mod p^N
inline std::vector<uint64_t> teichmuller_candidates(uint32_t a, uint32_t p, int N)
{
    uint64_t pn = 1;
    for (int i = 0; i < N; ++i)
        pn *= p;
    std::vector<uint64_t> out;
    for (uint64_t x = a % p; x < pn; x += p) {
        uint64_t y = 1;
        for (uint32_t i = 0; i < p; ++i)
            y = (y * x) % pn;
        if (y == x % pn)
            out.push_back(x);
    }
    return out;
}

inline int padic_val(int64_t x, int64_t p)
{
    int v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

} // namespace oracle

#include "hlf/expansion.hpp"

namespace oracle {

// v_F by elementary degree bookkeeping: min t-degree (or Gauss p-valuation) of num minus den.
inline int64_t top_valuation(const hlf::Element &x)
{
    const auto &f = *x.field();
    auto low = [&](const hlf::LaurentPoly &p) {
        int64_t m = INT64_MAX;
        for (const auto &t : p.terms())
            m = std::min<int64_t>(m, f.top_padic() ? hlf::padic_val(t.c.rat(), f.prime()) : t.e[f.coords().back().var]);
        return m;
    };
    return low(x.num()) - low(x.den());
}

// The recursion v_n = v_F, v_{n-1}(a) = v_{F-bar}(rho(a * t_n^{-v_n})), ..., with an
// explicit choice of parameters: params[0] is t_n in F, params[1] is t_{n-1} in F-bar, ...
inline std::vector<int64_t> rank_valuation(hlf::Element x, const std::vector<hlf::Element> &params)
{
    std::vector<int64_t> out;
    std::size_t k = 0;
    while (x.field()->dim() > 0) {
        const int64_t v = top_valuation(x);
        out.insert(out.begin(), v);
        x = hlf::residue(x * params[k].pow(-v));
        ++k;
    }
    return out;
}

inline std::vector<hlf::Element> standard_params(const hlf::FieldPtr &f)
{
    std::vector<hlf::Element> ps;
    for (hlf::FieldPtr g = f; g->dim() > 0; g = g->residue()) {
        const auto &c = g->coords().back();
        ps.push_back(c.kind == hlf::Coord::Kind::PAdic ? hlf::Element::integer(g, g->prime())
                                                       : hlf::Element::param(g, c.var));
    }
    return ps;
}

} // namespace oracle
