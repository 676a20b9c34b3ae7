#pragma once

// Richelot (2,2)-isogenies between genus-2 curves and the superspecial
// isogeny-graph walk.

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ssp/isomorphy.hpp"

namespace ssp {

struct Splitting {
    HyperModel base;                  // over K
    std::array<std::array<int, 2>, 3> pairs;  // indices into roots
    std::vector<P1Pt> roots;          // the six Weierstrass x's, in L
    std::array<Poly, 3> G;            // over L; y^2 = G0 G1 G2, degree <= 2 each
    Fe delta;
};

// Galois-stable pair partitions of the Weierstrass points
std::vector<Splitting> splittings(const HyperModel& m);

struct GraphNode {
    enum class Kind { curve, product };
    Kind kind = Kind::curve;
    HyperModel model;         // curve: y^2 = f over F_{p^2}, c = 1
    Genus2Key key;            // curve
    std::array<Fe, 2> js{};   // product: sorted j-invariants
};

GraphNode codomain(const Splitting& s);

// j-invariant of y^2 = cubic
Fe j_of_cubic(const Poly& cubic);

// Legendre parameters of supersingular curves, roots in F_{p^2} of the Hasse polynomial
std::vector<Fe> supersingular_lambdas(u32 p);
// supersingular j-invariants in F_{p^2}, sorted
std::vector<Fe> supersingular_js(u32 p);
Fe legendre_j(const Fe& lambda);

// bielliptic y^2 = x^6 + a x^4 + b x^2 + c from a supersingular E: u^3 + a u^2 + b u + c
// whose companion v^3 + b v^2 + a c v + c^2 is supersingular too
struct Glued {
    HyperModel curve;
    std::array<Fe, 2> js;  // sorted j(E), j(E')
};
HyperModel glue_seed(u32 p);
// every hit of the gluing scan, optionally limited to the given j pairs
std::vector<Glued> glue_scan(u32 p, const std::vector<std::array<Fe, 2>>* pairs = nullptr, size_t limit = 0);

struct WalkResult {
    std::vector<GraphNode> curves;                // one per geometric class, in discovery order
    std::vector<std::array<Fe, 2>> products;      // sorted, distinct
    u64 edges = 0;
    u64 partial_splittings = 0;  // nodes whose stable partitions numbered fewer than 15
    bool used_fallback = false;
    bool stopped = false;        // the visitor asked to stop; counts are partial
};

// visit is called on every new curve node; returning false ends the walk early
WalkResult walk(u32 p, const std::function<bool(const GraphNode&)>& visit = nullptr);

}  // namespace ssp
