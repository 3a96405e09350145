#pragma once

// Decision procedure for x_n -> l on monomial-affine families, with replayable
// certificates (tail indices) and defeating neighbourhoods.

#include <functional>
#include <optional>
#include <string>

#include "hlf/basic_open.hpp"
#include "hlf/family.hpp"

namespace hlf {

enum class Topology { Valuation, Higher };

const char *topology_name(Topology t);
Topology parse_topology(const std::string &s);

// Sample range used to confirm witnesses and observed tails.
constexpr int64_t kSampleHorizon = 200;

struct Verdict {
    enum class Kind { Converges, Diverges, Unknown };
    Kind kind = Kind::Unknown;
    Topology topology = Topology::Higher;
    std::string reason;
    Json certificate; // CONVERGES: how the tail index is obtained
    std::optional<BasicOpen> witness;       // higher topology
    std::optional<int64_t> valuation_ball;  // valuation topology: {v_F >= m} rejects the tail
    int64_t witness_from = 0;               // first index of the confirmed rejected tail
    bool witness_verified = false;
    // CONVERGES only: n0 with x_n - l in U for all n >= n0 (higher), or v_F(x_n - l) >= m (valuation)
    std::function<int64_t(const BasicOpen &)> tail;
    std::function<int64_t(int64_t)> valuation_tail;

    bool converges() const { return kind == Kind::Converges; }
    bool diverges() const { return kind == Kind::Diverges; }
    Json to_json() const;
};

const char *kind_name(Verdict::Kind k);

Verdict converges(const SeqFamily &f, const Element &limit, Topology top);

// Replays a CONVERGES certificate: x_n - l must lie in U for sampled n >= n0(U).
bool check_certificate(const SeqFamily &f, const Element &limit, const Verdict &v, const BasicOpen &U, Rng &rng,
                       int samples = 12);
// Valuation-topology replay for the ball {v_F >= m}.
bool check_valuation_certificate(const SeqFamily &f, const Element &limit, const Verdict &v, int64_t m, Rng &rng,
                                 int samples = 12);

// Eventual inverse-lex order of term positions: <0, 0, >0.
int eventual_compare(const Field &f, const FTerm &a, const FTerm &b);

} // namespace hlf
