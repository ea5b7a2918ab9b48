#pragma once

// Fast implementers: a certified family of tree pairs (G_i, Gbar_i) with
// ratios (mu_i, chi_i) whose compositions g_i = f_mu o f_chi contract a
// rational disk U around the repelling fixed point of f_lambda0, derivative
// pinned inside the annular sector A.  Once certified, any target P is
// reachable to precision eps by a composed ratio of length O(log 1/eps);
// the emitted object is an explicit bounded-degree tree with exact
// partition values.
//
// Certification is exact wherever the data is rational (loxodromy, disk
// images, derivative modulus band, the covering of U, every containment in
// the pipeline); arguments and irrational fixed points are checked at 259
// bits with explicit margins.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hardcore/catalog.hpp"
#include "hardcore/geometry.hpp"
#include "hardcore/graph.hpp"
#include "hardcore/moebius.hpp"
#include "hardcore/mp.hpp"

namespace hardcore {

// A = {z : 2pi/3 - 0.01 < arg z < 2pi/3, 1/17 < |z| < 1/16}.
struct SectorSpec {
    static Rational mod2_lo() { return make_rational(1, 289); }
    static Rational mod2_hi() { return make_rational(1, 256); }
    static MPFloat arg_lo();
    static MPFloat arg_hi();

    enum class Member { In, Out, Unknown };
    // Modulus bounds exact for rational z (squared); argument numeric with margin.
    static Member contains(const MPComplex& z, const MPFloat& arg_margin);
    static Member contains(const GaussianRational& z, const MPFloat& arg_margin);
};

struct SeedPair {
    MPComplex mu0, chi0;
};

// chi0 = (z0+1)^2 a / (z0 - (z0+1) a),  mu0 = z0 (z0 + chi0 + 1)/(z0 + 1);
// then g_{mu0,chi0}(z0) = z0 and g'_{mu0,chi0}(z0) = a.
SeedPair seed_pair(const MPComplex& z0, const MPComplex& alpha);

struct SearchParams {
    int catalog_vertices = 17;
    int budget = 4000;            // refinement attempts
    int quadtree_max_depth = 12;
    int beam_width = 56;
    int beam_depth = 64;
    int covering_rounds = 4;
    double r_scale = 1.0e-3;      // r_U ~ r_scale * |1 + z0 + chi|
    double hex_spacing = 0.066;   // * r_U
    double hex_extent = 1.018;    // * r_U
    double tol_z = 0.012;         // * r_U
    std::uint64_t seed = 0;       // reserved; the search is deterministic
};

struct ImplementerPair {
    std::vector<int> mu_blocks;   // catalog indices, path order (innermost first)
    GaussianRational mu;
    MoebiusQ g;                   // f_mu o f_chi
    RationalDisk g_disk;          // g(U)
    MPComplex z_fix;              // attracting fixed point of g
    bool z_fix_exact = false;
};

struct SearchDiagnostics {
    int refinement_failures = 0;
    int loxodromy_failures = 0;
    int band_failures = 0;
    int fixed_point_failures = 0;
    int uncovered_cells = 0;
    std::string to_string() const;
};

struct CoverageCertificate {
    int max_depth_used = 0;
    std::uint64_t cells_tested = 0;
    std::uint64_t exact_tests = 0;
};

struct FastImplementer {
    GaussianRational lambda0;
    int delta = 3;
    TreeCatalog catalog;

    std::vector<int> chi_blocks;  // catalog indices, path order
    GaussianRational chibar;
    RootedGraph chi_tree;
    PartitionPair chi_pair;

    RationalDisk U;
    std::vector<ImplementerPair> pairs;
    CoverageCertificate coverage;

    MoebiusQ f0;                  // f_lambda0
    FixedPoints f0_fixed;         // z0 repelling / a attracting
    MPComplex z0, a;

    // close_to_p machinery, input-independent, computed once
    int pullback_N = 0;
    RationalDisk D0, D1, D2, D3;
    Rational delta_hat;           // dyadic lower bound on the boundary gaps
    std::vector<GaussianRational> critical_orbit; // f^k(0), k >= 1
};

// Constructs and certifies a fast implementer at lambda0 (non-real, in Q[i]).
// The catalog supplies the ratio pool; the search composes catalog blocks on
// paths to synthesize the pair ratios near the seed.  Throws SearchFailed
// with diagnostics when the budget is exhausted or lambda0 is hopeless
// (inside the Shearer disk, real, ...).
FastImplementer search_fast_implementer(const GaussianRational& lambda0, int delta,
                                        const TreeCatalog& catalog,
                                        const SearchParams& params = {});

// Paper's two-case construction: a disk D inside both A and B with
// area(D) >= area(A)/128, given center(A) in B and B not contained in A.
// All postconditions are established exactly before returning.
RationalDisk generate_disk(const RationalDisk& A_disk, const RationalDisk& B_disk);

struct FastIntoD1Result {
    int i = 0;                   // pair index whose z_i was captured
    std::vector<int> js;         // j_1 .. j_{K-1}
    int K = 1;
    RationalDisk D_K;
};

// Pullback walk: expands D1 (inside U) by g^{-1} steps, doubling its area
// each step, until some z_i is captured; the forward replay
// (g_{j_1} o ... o g_{j_{K-1}})(D_K) subset D1 is re-verified exactly.
FastIntoD1Result fast_into_d1(const FastImplementer& imp, const RationalDisk& D1);

// Smallest K with |g_i^K(0) - Q| < eps, verified exactly.
int quickly_to_zi(const FastImplementer& imp, int i, const GaussianRational& Q,
                  const Rational& eps);

struct CloseToPResult {
    RationalDisk D;
    int K = 0;
};

// A disk D inside U with f_lambda0^K(D) inside B(P, eps), both containments
// exact; requires P away from the attracting fixed point (|P-a| >= eps/2).
CloseToPResult close_to_p(const FastImplementer& imp, const GaussianRational& P,
                          const Rational& eps);

struct PlanLabel {
    enum class Kind { Lambda0, Mu, Chi } kind;
    int pair = -1; // for Mu
};

struct ImplementationPlan {
    std::vector<PlanLabel> labels; // path order, last label = lambda0
    GaussianRational target;
    Rational eps;
    GaussianRational replay_value; // exact (f_{w_K} o ... o f_{w_1})(0)
    Rational replay_error2;        // |value - target|^2, exact
    int k_close = 0, k_walk = 0, k_spiral = 0;
    int length() const { return static_cast<int>(labels.size()); }
};

// Full pipeline: |replay - P| < eps guaranteed and checked exactly.
ImplementationPlan run_fast_implementation(const FastImplementer& imp,
                                           const GaussianRational& P, const Rational& eps);

struct EmittedTree {
    RootedGraph tree;
    PartitionPair pair; // exact (Z^in, Z^out) at lambda0 via the path recurrence
};

// Materializes the plan as a tree in G_Delta^1 and computes its exact
// partition values by the one-step path recurrence.
EmittedTree emit_tree(const ImplementationPlan& plan, const FastImplementer& imp);

// Certificate (disks as 3-point rational tuples, trees as graph JSON).
std::string implementer_to_json(const FastImplementer& imp);

} // namespace hardcore
