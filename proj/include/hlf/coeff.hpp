#pragma once

// Bottom of the tower: finite fields F_q = F_p[w]/(m(w)), exact rationals and
// p-adic approximations with three-state exactness.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace hlf {

using Integer = mpz_class;
using Rational = mpq_class;

constexpr int kMaxFqDegree = 8;

class FqField {
public:
    // modulus is monic, coefficients low to high, length degree+1.
    static const FqField &get(uint32_t p, const std::vector<uint32_t> &modulus,
                              const std::string &gen = "w");
    static const FqField &prime(uint32_t p);

    uint32_t p() const { return p_; }
    int degree() const { return m_; }
    uint64_t order() const { return q_; }
    const std::vector<uint32_t> &modulus() const { return mod_; }
    const std::string &generator() const { return gen_; }
    // "5" or "4;w^2+w+1"
    std::string descriptor() const;

    FqField(uint32_t p, std::vector<uint32_t> mod, std::string gen);

private:
    uint32_t p_;
    int m_;
    uint64_t q_;
    std::vector<uint32_t> mod_;
    std::string gen_;
};

class FqElem {
public:
    FqElem() = default;
    explicit FqElem(const FqField &f, int64_t v = 0);
    static FqElem generator(const FqField &f);
    static FqElem from_index(const FqField &f, uint64_t idx);

    const FqField &field() const { return *f_; }
    const FqField *field_ptr() const { return f_; }
    bool is_zero() const;
    bool is_one() const;
    // prime-field value if the element lies in F_p
    std::optional<uint32_t> as_prime() const;
    uint32_t coeff(int i) const { return c_[i]; }
    // base-p digits of the coefficient vector; a bijection onto [0, q)
    uint64_t index() const;

    FqElem operator+(const FqElem &o) const;
    FqElem operator-(const FqElem &o) const;
    FqElem operator*(const FqElem &o) const;
    FqElem operator-() const;
    FqElem inv() const;
    FqElem pow(uint64_t e) const;

    bool operator==(const FqElem &o) const;
    bool operator!=(const FqElem &o) const { return !(*this == o); }
    bool operator<(const FqElem &o) const { return index() < o.index(); }

    std::string str() const;

private:
    void check(const FqElem &o) const;
    const FqField *f_ = nullptr;
    std::array<uint32_t, kMaxFqDegree> c_{};
};

enum class FqOp { Add, Mul, Inv, Neg };
FqElem fq_arith(FqOp op, const FqElem &a, const FqElem *b = nullptr);

// v_p of a nonzero integer / rational.
int64_t padic_val(const Integer &x, uint32_t p);
int64_t padic_val(const Rational &x, uint32_t p);
// x mod p for a rational whose denominator is prime to p.
uint32_t reduce_mod_p(const Rational &x, uint32_t p);
Integer pow_int(uint32_t p, uint64_t e);

class PAdicApprox {
public:
    enum class State { ExactZero, Known, Insufficient };

    static PAdicApprox zero(uint32_t p);
    // x = p^k * unit, unit known mod p^N
    static PAdicApprox known(uint32_t p, int64_t k, const Integer &unit, int64_t N);
    // all digits below p^bound vanish, nothing else known
    static PAdicApprox insufficient(uint32_t p, int64_t bound);
    static PAdicApprox from_rational(const Rational &x, uint32_t p, int64_t N);

    uint32_t p() const { return p_; }
    State state() const { return state_; }
    int64_t exponent() const { return k_; }
    int64_t precision() const { return N_; }
    // unit part mod p^N in [0, p^N)
    const Integer &unit() const { return u_; }
    // absolute precision: value known mod p^(k+N)
    int64_t absolute_precision() const;

    PAdicApprox operator+(const PAdicApprox &o) const;
    PAdicApprox operator-() const;
    PAdicApprox operator-(const PAdicApprox &o) const { return *this + (-o); }
    PAdicApprox operator*(const PAdicApprox &o) const;

    // representative integer/rational of the approximation (p^k * unit)
    Rational value() const;
    std::string str() const;

private:
    uint32_t p_ = 2;
    State state_ = State::ExactZero;
    int64_t k_ = 0;
    int64_t N_ = 0;
    Integer u_;
};

// nullopt encodes UNKNOWN.
std::optional<int64_t> padic_val(const PAdicApprox &x);

// Teichmuller representative of a in F_p, mod p^N, as an integer in [0, p^N).
Integer teichmuller_int(uint32_t a, uint32_t p, int64_t N);
PAdicApprox teichmuller(const FqElem &a, int64_t N);
// Exact rational Teichmuller representative when one exists (0, 1, -1).
std::optional<Rational> teichmuller_exact(uint32_t a, uint32_t p);

bool is_prime(uint64_t n);

} // namespace hlf
