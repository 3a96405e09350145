#pragma once

// Basic open neighbourhoods of zero in the higher topology, as finitely
// presented recursive descriptors, and membership.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "hlf/element.hpp"
#include "hlf/random.hpp"

namespace hlf {

using Json = nlohmann::ordered_json;

class BasicOpen;

struct OpenNode;

class BasicOpen {
public:
    enum class Kind { Zero, Full, Leveled, Meet };

    struct Below {
        enum class Kind { Constant, Shifted, Periodic };
        Kind kind = Kind::Constant;
        std::vector<BasicOpen> sets;   // one set, or the period for Periodic
        std::array<int64_t, 3> poly{}; // Shifted: level i uses sets[0] shifted by c0 + c1*i + c2*i^2
    };

    BasicOpen(); // Full
    static BasicOpen full();
    static BasicOpen zero();
    static BasicOpen leveled(int64_t cutoff, std::vector<std::pair<int64_t, BasicOpen>> levels, Below below);
    static BasicOpen constant_below(int64_t cutoff, std::vector<std::pair<int64_t, BasicOpen>> levels,
                                    const BasicOpen &below);
    // u^m * F_q[[u]] at depth 1 (levels below m are zero)
    static BasicOpen ball(int64_t m);
    // shrinking template of the given depth: depth 1 is ball(0), depth d uses
    // level i -> template(d-1) shifted by i^2
    static BasicOpen shrinking(int depth);
    static BasicOpen meet(const BasicOpen &a, const BasicOpen &b);

    Kind kind() const;
    bool is_full() const { return kind() == Kind::Full; }
    bool is_zero() const { return kind() == Kind::Zero; }
    // U_i = E for i >= cutoff; INT64_MIN for Full
    int64_t cutoff() const;
    BasicOpen level(int64_t i) const;

    // shifts[k] moves the depth-k levels (k = 0 is this depth)
    BasicOpen shifted(const std::vector<int64_t> &shifts) const;
    BasicOpen shifted_top(int64_t s) const { return shifted({s}); }

    // u^m with m the ball exponent, if this is (a shift of) a depth-1 ball
    std::optional<int64_t> ball_exponent() const;

    Json to_json() const;
    static BasicOpen from_json(const Json &j);
    std::string dump() const { return to_json().dump(); }
    bool operator==(const BasicOpen &o) const { return dump() == o.dump(); }

    // Zero only at depth 0, levels only at depth >= 1.
    void validate(int depth) const;

private:
    std::shared_ptr<const OpenNode> n_;
    std::vector<int64_t> sh_;
};

BasicOpen intersect(const BasicOpen &a, const BasicOpen &b);

struct MemberResult {
    enum class Verdict { Yes, No, Unknown };
    Verdict verdict = Verdict::Yes;
    std::vector<int64_t> path; // levels leading to the violation (top first)
    std::string reason;

    bool yes() const { return verdict == Verdict::Yes; }
    bool no() const { return verdict == Verdict::No; }
};

const char *verdict_name(MemberResult::Verdict v);

// max_digits bounds p-adic digit extraction with non-exact lifts.
MemberResult member(const Element &x, const BasicOpen &U, int64_t max_digits = 64);

// descriptor of alpha * U for monomial alpha (times an admissible unit)
BasicOpen scale_open(const Element &alpha, const BasicOpen &U);

// Random descriptor of the given depth (cutoffs and exponents in [-r, r]).
BasicOpen random_open(int depth, Rng &rng, int r = 3);
// Random subgroup descriptor of depth 2: levels u^{m_i} O below the cutoff.
BasicOpen random_subgroup_open(Rng &rng, int r = 3);

// rho(U) = U_0 for U intersected with the valuation ring
BasicOpen residue_image(const BasicOpen &U);

} // namespace hlf
