#include "hardcore/fast_impl.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

#include "hardcore/regions.hpp"

namespace hardcore {

namespace {

MPFloat mp_pi() { return 4 * atan(MPFloat(1)); }

using CD = std::complex<double>;

CD to_cd(const GaussianRational& x) { return {mpq_get_d(x.re.get_mpq_t()), mpq_get_d(x.im.get_mpq_t())}; }
CD to_cd(const MPComplex& z) { return {to_double(z.re), to_double(z.im)}; }

} // namespace

MPFloat SectorSpec::arg_lo() { return 2 * mp_pi() / 3 - MPFloat(1) / 100; }
MPFloat SectorSpec::arg_hi() { return 2 * mp_pi() / 3; }

SectorSpec::Member SectorSpec::contains(const MPComplex& z, const MPFloat& arg_margin) {
    MPFloat n2 = norm2(z);
    MPFloat lo2 = to_mp(mod2_lo()), hi2 = to_mp(mod2_hi());
    MPFloat m2 = arg_margin * arg_margin;
    if (n2 <= lo2 + m2 || n2 >= hi2 - m2) {
        if (n2 < lo2 - m2 || n2 > hi2 + m2) return Member::Out;
        return Member::Unknown;
    }
    MPFloat a = arg(z);
    if (a > arg_lo() + arg_margin && a < arg_hi() - arg_margin) return Member::In;
    if (a < arg_lo() - arg_margin || a > arg_hi() + arg_margin) return Member::Out;
    return Member::Unknown;
}

SectorSpec::Member SectorSpec::contains(const GaussianRational& z, const MPFloat& arg_margin) {
    Rational n2 = z.norm2();
    if (cmp(n2, mod2_lo()) <= 0 || cmp(n2, mod2_hi()) >= 0) return Member::Out;
    MPFloat a = arg(to_mp(z));
    if (a > arg_lo() + arg_margin && a < arg_hi() - arg_margin) return Member::In;
    if (a < arg_lo() - arg_margin || a > arg_hi() + arg_margin) return Member::Out;
    return Member::Unknown;
}

SeedPair seed_pair(const MPComplex& z0, const MPComplex& alpha) {
    const MPFloat tiny = pow(MPFloat(2), -80);
    if (abs(z0) < tiny || abs(z0 + MPComplex(1.0)) < tiny)
        throw DegenerateSeed("z0 must avoid 0 and -1");
    if (abs(alpha) < tiny) throw DegenerateSeed("alpha must be nonzero");
    MPComplex den = z0 - (z0 + MPComplex(1.0)) * alpha;
    if (abs(den) < tiny) throw DegenerateSeed("alpha = z0/(z0+1) is excluded");
    SeedPair s;
    s.chi0 = (z0 + MPComplex(1.0)) * (z0 + MPComplex(1.0)) * alpha / den;
    s.mu0 = z0 * (z0 + s.chi0 + MPComplex(1.0)) / (z0 + MPComplex(1.0));
    // residual self-check: g(z0) - z0 and g'(z0) - alpha at working precision
    MPComplex g_z0 = s.mu0 / (MPComplex(1.0) + s.chi0 / (MPComplex(1.0) + z0));
    MPComplex w = MPComplex(1.0) + z0 + s.chi0;
    MPComplex der = s.mu0 * s.chi0 / (w * w);
    const MPFloat bound = pow(MPFloat(2), -100);
    if (abs(g_z0 - z0) > bound || abs(der - alpha) > bound)
        throw InternalError("seed pair residuals exceed 2^-100");
    return s;
}

std::string SearchDiagnostics::to_string() const {
    std::ostringstream out;
    out << "refinement failures: " << refinement_failures
        << ", loxodromy failures: " << loxodromy_failures
        << ", derivative-band failures: " << band_failures
        << ", fixed-point failures: " << fixed_point_failures
        << ", uncovered cells: " << uncovered_cells;
    return out.str();
}

// ---------------------------------------------------------------------------
// value pool with an approximate nearest-neighbor grid (doubles only; all
// certificates are re-established exactly downstream)
// ---------------------------------------------------------------------------

namespace {

struct PoolIndex {
    double cell = 0.01;
    std::vector<CD> pts;                 // position i <-> catalog index ids[i]
    std::vector<int> ids;
    std::unordered_map<std::int64_t, std::vector<int>> buckets; // values: positions

    static std::int64_t key(int ix, int iy) {
        return (static_cast<std::int64_t>(ix) << 32) ^ (static_cast<std::int64_t>(iy) & 0xffffffffLL);
    }
    void add(int catalog_id, CD p) {
        int pos = static_cast<int>(pts.size());
        pts.push_back(p);
        ids.push_back(catalog_id);
        int ix = static_cast<int>(std::floor(p.real() / cell));
        int iy = static_cast<int>(std::floor(p.imag() / cell));
        buckets[key(ix, iy)].push_back(pos);
    }
    void nearest(CD q, int k, std::vector<std::pair<double, int>>& out) const {
        out.clear();
        if (pts.empty()) return;
        int cx = static_cast<int>(std::floor(q.real() / cell));
        int cy = static_cast<int>(std::floor(q.imag() / cell));
        const int max_ring = 20000;
        int settled_ring = -1;
        for (int ring = 0; ring <= max_ring; ++ring) {
            for (int ix = cx - ring; ix <= cx + ring; ++ix) {
                int step = (ix == cx - ring || ix == cx + ring) ? 1 : 2 * ring;
                if (step == 0) step = 1;
                for (int iy = cy - ring; iy <= cy + ring; iy += step) {
                    auto it = buckets.find(key(ix, iy));
                    if (it == buckets.end()) continue;
                    for (int pos : it->second)
                        out.push_back({std::abs(pts[pos] - q), pos});
                }
            }
            if (settled_ring < 0 && static_cast<int>(out.size()) >= k) settled_ring = ring + 1;
            if (settled_ring >= 0 && ring >= settled_ring) break;
        }
        std::sort(out.begin(), out.end(),
                  [&](const std::pair<double, int>& a, const std::pair<double, int>& b) {
                      if (a.first != b.first) return a.first < b.first;
                      return ids[a.second] < ids[b.second];
                  });
        if (static_cast<int>(out.size()) > k) out.resize(k);
    }
    double nn_dist(CD q, int k) const {
        std::vector<std::pair<double, int>> tmp;
        nearest(q, k, tmp);
        if (static_cast<int>(tmp.size()) < k) return 1e18;
        return tmp[k - 1].first;
    }
};

struct BeamState {
    CD target;
    double tol;
    std::vector<int> letters; // catalog ids, first chosen = outermost
};

// Inverse-step refinement: find catalog blocks b_1..b_m (path order) whose
// path-implemented ratio lands within ~tol of `target`.  Letters are chosen
// greedily over a beam; each inverse step T -> u/T - 1 multiplies the
// admissible tolerance by |u|/|T|^2.
struct Refiner {
    const TreeCatalog& catalog;
    PoolIndex index;
    std::vector<CD> anchors;
    int beam_width, beam_depth;
    int* budget = nullptr;
    SearchDiagnostics* diag = nullptr;

    Refiner(const TreeCatalog& cat, CD attracting, int width, int depth)
        : catalog(cat), beam_width(width), beam_depth(depth) {
        for (int i = 0; i < static_cast<int>(cat.entries.size()); ++i) {
            const auto& e = cat.entries[i];
            if (e.ratio.kind != RatioValue::Kind::Finite) continue;
            CD v = to_cd(e.ratio.value);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) continue;
            if (std::abs(v) > 1e6) continue;
            index.add(i, v);
        }
        // anchors: attracting fixed point plus the densest histogram cells
        std::map<std::pair<int, int>, int> hist;
        for (const CD& p : index.pts)
            if (std::abs(p) < 4.0)
                ++hist[{static_cast<int>(std::floor(p.real() * 2)), static_cast<int>(std::floor(p.imag() * 2))}];
        std::vector<std::pair<int, std::pair<int, int>>> ranked;
        for (auto& [cellxy, n] : hist) ranked.push_back({n, cellxy});
        std::sort(ranked.begin(), ranked.end(), [](auto& a, auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        anchors.push_back(attracting);
        for (size_t i = 0; i < ranked.size() && anchors.size() < 9; ++i)
            anchors.push_back({ranked[i].second.first / 2.0 + 0.25, ranked[i].second.second / 2.0 + 0.25});
    }

    // returns blocks in path order (innermost first); empty on failure
    std::vector<int> refine(CD target, double tol) const {
        if (budget) {
            if (*budget <= 0) throw SearchFailed("search budget exhausted; " +
                                                 (diag ? diag->to_string() : std::string()));
            --*budget;
        }
        std::vector<BeamState> beam{{target, tol, {}}};
        std::vector<std::pair<double, int>> knn;
        for (int depth = 0; depth <= beam_depth; ++depth) {
            // success check
            for (const auto& st : beam) {
                index.nearest(st.target, 1, knn);
                if (!knn.empty() && knn[0].first <= st.tol) {
                    std::vector<int> blocks;
                    blocks.push_back(index.ids[knn[0].second]);
                    for (auto it = st.letters.rbegin(); it != st.letters.rend(); ++it)
                        blocks.push_back(*it);
                    std::reverse(blocks.begin(), blocks.end());
                    // path order: innermost (terminal) first
                    std::reverse(blocks.begin(), blocks.end());
                    return blocks;
                }
            }
            if (depth == beam_depth) break;
            std::vector<BeamState> next;
            for (const auto& st : beam) {
                const CD T = st.target;
                double aT = std::abs(T);
                if (aT < 1e-14) continue;
                std::set<int> cand;
                auto add_near = [&](CD u_target, int k) {
                    if (!std::isfinite(u_target.real()) || !std::isfinite(u_target.imag())) return;
                    if (std::abs(u_target) > 50.0) return;
                    index.nearest(u_target, k, knn);
                    for (auto& [d, pos] : knn) cand.insert(pos);
                };
                for (const CD& vh : anchors) add_near(T * (1.0 + vh), 6);
                for (double s : {0.9, 1.3, 2.0}) add_near(T / aT * s, 4);
                add_near(2.0 * T, 4);
                for (int pos : cand) {
                    CD u = index.pts[pos];
                    CD v = u / T - 1.0;
                    double av = std::abs(v);
                    if (av < 0.01 || av > 120.0) continue;
                    if (std::abs(1.0 + v) < 0.01) continue;
                    BeamState ns;
                    ns.target = v;
                    ns.tol = st.tol * std::abs(u) / (aT * aT);
                    ns.letters = st.letters;
                    ns.letters.push_back(index.ids[pos]);
                    next.push_back(std::move(ns));
                }
            }
            if (next.empty()) break;
            std::vector<std::pair<double, int>> scored(next.size());
            for (size_t i = 0; i < next.size(); ++i) {
                double local = index.nn_dist(next[i].target, 4) + 1e-12;
                scored[i] = {std::log(next[i].tol) - 0.7 * std::log(local), static_cast<int>(i)};
            }
            std::sort(scored.begin(), scored.end(), [&](auto& a, auto& b) {
                if (a.first != b.first) return a.first > b.first;
                return next[a.second].letters < next[b.second].letters;
            });
            std::set<std::pair<long long, long long>> seen;
            beam.clear();
            for (auto& [s, i] : scored) {
                auto k = std::make_pair(static_cast<long long>(next[i].target.real() * 1e7),
                                        static_cast<long long>(next[i].target.imag() * 1e7));
                if (!seen.insert(k).second) continue;
                beam.push_back(std::move(next[i]));
                if (static_cast<int>(beam.size()) >= beam_width) break;
            }
        }
        if (diag) ++diag->refinement_failures;
        return {};
    }
};

// Exact path-recurrence fold over catalog blocks; never divides.
PartitionPair fold_blocks(const TreeCatalog& catalog, const std::vector<int>& blocks) {
    if (blocks.empty()) throw InternalError("empty block chain");
    PartitionPair acc = catalog.entries[blocks[0]].pair;
    for (size_t i = 1; i < blocks.size(); ++i) {
        const PartitionPair& h = catalog.entries[blocks[i]].pair;
        acc = {h.z_in * acc.z_out, h.z_out * (acc.z_in + acc.z_out)};
    }
    return acc;
}

RootedGraph materialize_blocks(const TreeCatalog& catalog, const std::vector<int>& blocks) {
    std::vector<RootedGraph> trees;
    trees.reserve(blocks.size());
    for (int b : blocks) trees.push_back(catalog.tree_of(catalog.entries[b]));
    return implement_on_path(trees);
}

} // namespace

// ---------------------------------------------------------------------------
// generate_disk (two-case sector construction)
// ---------------------------------------------------------------------------

namespace {

// One orientation of the construction: rotate the first stored boundary point
// of A around its center by quarter turns; membership of the closure of B
// selects the case.  Returns nullopt when neither case matches.
std::optional<RationalDisk> generate_disk_one_sided(const RationalDisk& A_disk,
                                                    const RationalDisk& B_disk) {
    const GaussianRational cA = A_disk.center();
    const GaussianRational i_unit(Rational(0), Rational(1));
    GaussianRational P[4];
    P[0] = A_disk.p1;
    for (int k = 1; k < 4; ++k) P[k] = cA + i_unit * (P[k - 1] - cA);
    bool member[4];
    for (int k = 0; k < 4; ++k) member[k] = contains_point(B_disk, P[k]) != Containment::Outside;

    for (int k = 0; k < 4; ++k) {
        if (member[k] && member[(k + 1) % 4]) {
            // case 1: R = midpoint of the quarter chord, c_D = (c_A + 3R)/4
            GaussianRational R = (P[k] + P[(k + 1) % 4]) / GaussianRational(2);
            GaussianRational cD = (cA + GaussianRational(3) * R) / GaussianRational(4);
            return RationalDisk(R, cD + i_unit * (R - cD), cD - (R - cD));
        }
    }
    for (int k = 0; k < 4; ++k) {
        if (member[k]) {
            // case 2: c_D = (c_A + 3 P_k)/4 with P_k on the boundary
            GaussianRational cD = (cA + GaussianRational(3) * P[k]) / GaussianRational(4);
            return RationalDisk(P[k], cD + i_unit * (P[k] - cD), cD - (P[k] - cD));
        }
    }
    return std::nullopt;
}

} // namespace

RationalDisk generate_disk(const RationalDisk& A_disk, const RationalDisk& B_disk) {
    if (contains_point(B_disk, A_disk.center()) != Containment::Inside)
        throw GeometryPrecondition("center of A must lie inside B");
    if (disk_in_disk(B_disk, A_disk))
        throw GeometryPrecondition("B must not be contained in A");

    auto ok = [&](const RationalDisk& D) {
        return disk_in_disk(D, A_disk) && disk_in_disk(D, B_disk) &&
               128 * D.squared_radius() >= A_disk.squared_radius();
    };
    if (auto D = generate_disk_one_sided(A_disk, B_disk); D && ok(*D)) return *D;
    if (auto D = generate_disk_one_sided(B_disk, A_disk); D && ok(*D)) return *D;
    throw InternalError("generate_disk: no sector case certified (contradicts the lemma)");
}

// ---------------------------------------------------------------------------
// search
// ---------------------------------------------------------------------------

namespace {

CD alpha_at(CD z, CD chi) { return z * chi / ((1.0 + z) * (1.0 + z + chi)); }

struct PairCandidate {
    std::vector<int> blocks;
    GaussianRational mu;
};

// Exact per-pair certification of loxodromy, the derivative band over
// closure(U), and the attracting fixed point lying in U.
std::optional<ImplementerPair> certify_pair(const GaussianRational& mu,
                                            const GaussianRational& chibar,
                                            const std::vector<int>& blocks,
                                            const RationalDisk& U,
                                            SearchDiagnostics& diag) {
    if (mu.is_zero()) return std::nullopt;
    MoebiusQ g = compose(f_lambda(mu), f_lambda(chibar));
    if (classify(g).kind != MoebiusKind::Loxodromic) {
        ++diag.loxodromy_failures;
        return std::nullopt;
    }
    // |g'(z)|^2 = |mu chi|^2 / |1 + z + chi|^4 within (1/289, 1/256) on closure(U)
    GaussianRational w_c = GaussianRational(1) + U.center() + chibar;
    Rational P = w_c.norm2(), R = U.squared_radius();
    if (!(P > R)) {
        ++diag.band_failures;
        return std::nullopt;
    }
    Rational m2 = (mu * chibar).norm2();
    if (!quartic_sum_lt(P, R, 289 * m2) || !quartic_diff_gt(P, R, 256 * m2)) {
        ++diag.band_failures;
        return std::nullopt;
    }
    // arg g' = arg(mu chi) - 2 arg(1 + z + chi); range over the disk
    MPFloat am = arg(to_mp(mu * chibar));
    MPComplex wc_mp = to_mp(w_c);
    MPFloat aw = arg(wc_mp);
    MPFloat half = asin(sqrt(to_mp(R)) / abs(wc_mp));
    MPFloat lo = am - 2 * aw - 2 * half, hi = am - 2 * aw + 2 * half;
    const MPFloat two_pi = 2 * mp_pi();
    while (lo > mp_pi()) { lo -= two_pi; hi -= two_pi; }
    while (lo <= -mp_pi()) { lo += two_pi; hi += two_pi; }
    const MPFloat margin = pow(MPFloat(2), -180);
    if (!(lo > SectorSpec::arg_lo() + margin && hi < SectorSpec::arg_hi() - margin)) {
        ++diag.band_failures;
        return std::nullopt;
    }
    // attracting fixed point inside U
    FixedPoints fp = fixed_points(g);
    MPComplex z_fix;
    bool exact_in = false;
    if (fp.exact) {
        const SpherePoint* pick = nullptr;
        if (fp.tag1 == FixedPointTag::Attracting) pick = &fp.p1;
        else if (fp.tag2 == FixedPointTag::Attracting) pick = &fp.p2;
        if (!pick || !pick->is_finite()) {
            ++diag.fixed_point_failures;
            return std::nullopt;
        }
        if (contains_point(U, pick->v) != Containment::Inside) {
            ++diag.fixed_point_failures;
            return std::nullopt;
        }
        z_fix = to_mp(pick->v);
        exact_in = true;
    } else {
        MPComplex cand;
        if (fp.tag1 == FixedPointTag::Attracting) cand = fp.approx1;
        else if (fp.tag2 == FixedPointTag::Attracting) cand = fp.approx2;
        else {
            ++diag.fixed_point_failures;
            return std::nullopt;
        }
        MPFloat dist = abs(cand - to_mp(U.center()));
        MPFloat rad = sqrt(to_mp(U.squared_radius()));
        if (!(dist < rad * (1 - pow(MPFloat(2), -30)))) {
            ++diag.fixed_point_failures;
            return std::nullopt;
        }
        z_fix = cand;
    }
    RationalDisk gU = disk_image(g, U);
    return ImplementerPair{blocks, mu, g, gU, z_fix, exact_in};
}

struct QuadtreeResult {
    bool covered = false;
    std::vector<CD> uncovered_centers;
    CoverageCertificate cert;
};

QuadtreeResult cover_with_quadtree(const RationalDisk& U, const std::vector<ImplementerPair>& pairs,
                                   int max_depth) {
    QuadtreeResult res;
    struct Cell { Rational cx, cy, half; int depth; };
    std::vector<Cell> stack{{U.center().re, U.center().im, Rational(0), 0}};
    // root half-side: exact radius bound (U radius is dyadic by construction,
    // but recompute a safe half from r^2)
    {
        MPFloat r = sqrt(to_mp(U.squared_radius()));
        Rational half = dyadic_round(r * (1 + pow(MPFloat(2), -40)), 60);
        while (half * half < U.squared_radius()) half = half * 2;
        stack[0].half = half;
    }
    const CenterRadius Ucr = U.as_center_radius();
    struct DiskD { CD c; double r; };
    std::vector<DiskD> approx;
    std::vector<CenterRadius> exact;
    for (const auto& p : pairs) {
        exact.push_back(p.g_disk.as_center_radius());
        approx.push_back({to_cd(exact.back().center), std::sqrt(mpq_get_d(exact.back().r2.get_mpq_t()))});
    }
    std::vector<std::pair<double, int>> order;
    while (!stack.empty()) {
        Cell cell = stack.back();
        stack.pop_back();
        ++res.cert.cells_tested;
        res.cert.max_depth_used = std::max(res.cert.max_depth_used, cell.depth);
        GaussianRational lo(cell.cx - cell.half, cell.cy - cell.half);
        GaussianRational hi(cell.cx + cell.half, cell.cy + cell.half);
        // cell disjoint from closure(U)?
        if (box_point_dist2(lo, hi, U.center()) > Ucr.r2) continue;
        // covered: closure of the cell circumdisk strictly inside some g_i(U)
        CD cc(mpq_get_d(cell.cx.get_mpq_t()), mpq_get_d(cell.cy.get_mpq_t()));
        double ch = mpq_get_d(cell.half.get_mpq_t());
        double cell_r = ch * std::sqrt(2.0);
        order.clear();
        for (int i = 0; i < static_cast<int>(approx.size()); ++i) {
            double margin = approx[i].r - (std::abs(cc - approx[i].c) + cell_r);
            if (margin > -ch) order.push_back({-margin, i});
        }
        std::sort(order.begin(), order.end());
        bool covered = false;
        CenterRadius cell_cr{GaussianRational(cell.cx, cell.cy), 2 * cell.half * cell.half};
        for (size_t k = 0; k < order.size() && k < 4; ++k) {
            ++res.cert.exact_tests;
            if (disk_strictly_inside(cell_cr, exact[order[k].second])) {
                covered = true;
                break;
            }
        }
        if (covered) continue;
        if (cell.depth >= max_depth) {
            res.uncovered_centers.push_back(cc);
            if (res.uncovered_centers.size() > 4096) return res; // hopeless; bail out
            continue;
        }
        Rational h2 = cell.half / 2;
        for (int dx = -1; dx <= 1; dx += 2)
            for (int dy = -1; dy <= 1; dy += 2)
                stack.push_back({cell.cx + dx * h2, cell.cy + dy * h2, h2, cell.depth + 1});
    }
    res.covered = res.uncovered_centers.empty();
    return res;
}

} // namespace

FastImplementer search_fast_implementer(const GaussianRational& lambda0, int delta,
                                        const TreeCatalog& catalog, const SearchParams& params) {
    SearchDiagnostics diag;
    if (delta < 3) throw DomainError("fast implementers need Delta >= 3");
    if (!(catalog.lambda0 == lambda0) || catalog.delta != delta)
        throw DomainError("catalog was built for different (lambda0, Delta)");
    if (lambda0.im == 0)
        throw SearchFailed("lambda0 is real: the implementation lemma needs lambda0 in C \\ R");
    if (shearer_contains(lambda0, delta).status == RegionStatus::Inside)
        throw SearchFailed("lambda0 lies in the Shearer disk: ratios are uniformly bounded, no "
                           "fast implementer exists");
    if (params.budget <= 0) throw SearchFailed("search budget exhausted; " + diag.to_string());
    if (catalog.entries.empty() || catalog.entries[0].shape != -1)
        throw DomainError("catalog must start with the K1 entry");

    MoebiusQ f0 = f_lambda(lambda0);
    FixedPoints fp = fixed_points(f0);
    MPComplex z0 = fp.tag1 == FixedPointTag::Repelling ? fp.approx1 : fp.approx2;
    MPComplex a_fix = fp.tag1 == FixedPointTag::Attracting ? fp.approx1 : fp.approx2;
    if (!((fp.tag1 == FixedPointTag::Repelling && fp.tag2 == FixedPointTag::Attracting) ||
          (fp.tag2 == FixedPointTag::Repelling && fp.tag1 == FixedPointTag::Attracting)))
        throw SearchFailed("f_lambda0 is not loxodromic with finite fixed points");

    std::optional<GaussianRational> z0_exact, a_exact;
    if (fp.exact) {
        const SpherePoint& zr = fp.tag1 == FixedPointTag::Repelling ? fp.p1 : fp.p2;
        const SpherePoint& za = fp.tag1 == FixedPointTag::Attracting ? fp.p1 : fp.p2;
        if (zr.is_finite()) z0_exact = zr.v;
        if (za.is_finite()) a_exact = za.v;
    }

    // alpha at the log-polar midpoint of A
    MPComplex alpha_c = polar(1 / sqrt(MPFloat(272)), 2 * mp_pi() / 3 - MPFloat(1) / 200);
    SeedPair seed = seed_pair(z0, alpha_c);

    int budget = params.budget;
    Refiner refiner(catalog, to_cd(a_fix), params.beam_width, params.beam_depth);
    refiner.budget = &budget;
    refiner.diag = &diag;

    const CD lam_d = to_cd(lambda0);

    // forced outermost K1 block keeps the chain root degree at 1
    auto refine_with_stem = [&](CD target, double tol) -> std::vector<int> {
        CD v_target = lam_d / target - 1.0;
        double tol_v = tol * std::abs(lam_d) / std::norm(target);
        std::vector<int> blocks = refiner.refine(v_target, tol_v);
        if (blocks.empty()) return blocks;
        blocks.push_back(0); // K1
        return blocks;
    };

    // --- chi
    CD chi_target = to_cd(seed.chi0);
    std::vector<int> chi_blocks = refine_with_stem(chi_target, 1.2e-4);
    if (chi_blocks.empty())
        throw SearchFailed("could not synthesize chi near the seed; " + diag.to_string());
    PartitionPair chi_pair_acc = fold_blocks(catalog, chi_blocks);
    RatioValue chi_ratio = ratio_of(chi_pair_acc);
    if (!chi_ratio.is_finite() || chi_ratio.value.is_zero())
        throw SearchFailed("chi chain degenerated; " + diag.to_string());
    GaussianRational chibar = chi_ratio.value;

    // --- U: rational disk around z0
    GaussianRational c_U = z0_exact && bit_size(*z0_exact).bits <= 96 ? *z0_exact
                                                                      : dyadic_round(z0, 48);
    GaussianRational w_c = GaussianRational(1) + c_U + chibar;
    MPFloat r_target = MPFloat(params.r_scale) * abs(to_mp(w_c));
    Rational r_U = dyadic_round(r_target, 40);
    if (r_U <= 0) throw SearchFailed("degenerate U radius");

    RationalDisk U = disk_from_center_radius(c_U, r_U);
    for (int shrink = 0;; ++shrink) {
        if (shrink > 8) throw SearchFailed("could not certify U conditions; " + diag.to_string());
        bool ok = true;
        // z0 in U
        if (z0_exact) ok = contains_point(U, *z0_exact) == Containment::Inside;
        else ok = abs(z0 - to_mp(U.center())) < sqrt(to_mp(U.squared_radius())) * (1 - pow(MPFloat(2), -30));
        // 0 outside closure(U) (pole of f^{-1})
        ok = ok && contains_point(U, GaussianRational(0)) == Containment::Outside;
        // (U-1) closure(U) inside f(U):  f^{-1}(U) strictly inside U
        if (ok) {
            try {
                RationalDisk Uin = disk_image(inverse(f0), U);
                ok = disk_strictly_inside(Uin, U);
            } catch (const NotADisk&) {
                ok = false;
            }
        }
        // (U-2) attracting fixed point outside closure(U)
        if (ok) {
            if (a_exact) ok = contains_point(U, *a_exact) == Containment::Outside;
            else ok = abs(a_fix - to_mp(U.center())) > sqrt(to_mp(U.squared_radius())) * (1 + pow(MPFloat(2), -30));
        }
        // pole of every g (= -(1+chi)) outside closure(U)
        ok = ok && contains_point(U, -(GaussianRational(1) + chibar)) == Containment::Outside;
        if (ok) break;
        r_U = r_U / 2;
        U = disk_from_center_radius(c_U, r_U);
    }

    const double r_d = std::sqrt(mpq_get_d(U.squared_radius().get_mpq_t()));
    const CD c_d = to_cd(U.center());
    const CD chi_d = to_cd(chibar);

    // --- pair synthesis over a hex net of fixed-point targets
    auto make_pair_at = [&](CD h) -> std::optional<PairCandidate> {
        CD zt = to_cd(z0);
        for (int it = 0; it < 4; ++it) {
            CD al = alpha_at(zt, chi_d);
            zt = (h - al * c_d) / (1.0 - al);
        }
        if (std::abs(zt - c_d) > r_d * (1 - 0.013))
            zt = c_d + (zt - c_d) / std::abs(zt - c_d) * r_d * (1 - 0.013);
        CD mu_t = zt * (zt + chi_d + 1.0) / (zt + 1.0);
        std::vector<int> blocks = refine_with_stem(mu_t, params.tol_z * r_d);
        if (blocks.empty()) return std::nullopt;
        PartitionPair acc = fold_blocks(catalog, blocks);
        RatioValue val = ratio_of(acc);
        if (!val.is_finite() || val.value.is_zero()) return std::nullopt;
        return PairCandidate{std::move(blocks), val.value};
    };

    std::vector<ImplementerPair> pairs;
    std::unordered_set<std::string> mu_seen;
    auto try_add_pair = [&](CD h) {
        auto cand = make_pair_at(h);
        if (!cand) return;
        if (!mu_seen.insert(value_key(cand->mu)).second) return;
        auto p = certify_pair(cand->mu, chibar, cand->blocks, U, diag);
        if (p) pairs.push_back(std::move(*p));
    };

    const double s_hex = params.hex_spacing * r_d;
    const double extent = params.hex_extent * r_d;
    int row = 0;
    for (double y = -extent; y <= extent + 1e-18; y += s_hex * std::sqrt(3.0) / 2, ++row) {
        for (double x = -extent - (row % 2 ? s_hex / 2 : 0.0); x <= extent + 1e-18; x += s_hex) {
            if (std::hypot(x, y) <= extent) try_add_pair(c_d + CD(x, y));
        }
    }

    // --- covering certification with repair rounds
    QuadtreeResult cov;
    for (int round = 0;; ++round) {
        cov = cover_with_quadtree(U, pairs, params.quadtree_max_depth);
        if (cov.covered) break;
        if (round >= params.covering_rounds) {
            diag.uncovered_cells = static_cast<int>(cov.uncovered_centers.size());
            throw SearchFailed("covering condition (2) not certified; " + diag.to_string());
        }
        size_t limit = std::min<size_t>(cov.uncovered_centers.size(), 256);
        for (size_t k = 0; k < limit; ++k) try_add_pair(cov.uncovered_centers[k]);
    }

    // --- close_to_p machinery (input independent)
    // push U forward until the pole -1 falls inside; then the complement of
    // the next image is a euclidean disk around the attracting fixed point
    GaussianRational a_round = a_exact && bit_size(*a_exact).bits <= 96 ? *a_exact
                                                                        : dyadic_round(a_fix, 48);
    Rational S = (GaussianRational(1) + a_round).norm2();
    Rational L = lambda0.norm2();
    Rational delta_V = make_rational(1, 4);
    while (!(S > delta_V * delta_V &&
             quartic_diff_gt(S, delta_V * delta_V, make_rational(100, 81) * L))) {
        delta_V = delta_V / 2;
        if (delta_V < make_rational(1, 1 << 20))
            throw SearchFailed("no certified contraction ball around the attracting fixed point");
    }
    CenterRadius Vball{a_round, delta_V * delta_V};

    int pullback_N = 0;
    RationalDisk Ucur = U;
    std::optional<RationalDisk> D0;
    for (int step = 0; step < 500; ++step) {
        Containment pole_pos = contains_point(Ucur, GaussianRational(-1, 0));
        if (pole_pos == Containment::OnBoundary)
            throw SearchFailed("forward orbit of U hit the pole boundary; perturb the radius");
        if (pole_pos == Containment::Inside) {
            auto img = [&](const GaussianRational& q) {
                return (f0.a * q + f0.b) / (f0.c * q + f0.d);
            };
            D0 = RationalDisk(img(Ucur.p1), img(Ucur.p2), img(Ucur.p3));
            pullback_N = step + 1;
            break;
        }
        Ucur = disk_image(f0, Ucur);
    }
    if (!D0) throw SearchFailed("forward images of U never wrapped the pole");
    while (!disk_strictly_inside(D0->as_center_radius(), Vball)) {
        D0 = disk_image(f0, *D0);
        ++pullback_N;
        if (pullback_N > 2000)
            throw SearchFailed("complement disk failed to contract into the certified ball");
    }
    RationalDisk D1 = disk_image(f0, *D0);
    RationalDisk D2 = disk_image(f0, D1);
    RationalDisk D3 = disk_image(f0, D2);
    if (!disk_strictly_inside(D1, *D0) || !disk_strictly_inside(D2, D1) ||
        !disk_strictly_inside(D3, D2))
        throw InternalError("pullback disks are not nested");

    auto gap_lower = [](const RationalDisk& outer, const RationalDisk& inner) {
        MPFloat g = sqrt(to_mp(outer.squared_radius())) - sqrt(to_mp(inner.squared_radius())) -
                    abs(to_mp(inner.center()) - to_mp(outer.center()));
        return g;
    };
    MPFloat gap = gap_lower(*D0, D1);
    gap = std::min(gap, gap_lower(D1, D2));
    gap = std::min(gap, gap_lower(D2, D3));
    Rational delta_hat = dyadic_round(gap * (1 - pow(MPFloat(2), -30)), 60);
    if (delta_hat <= 0) throw SearchFailed("degenerate pullback gap");

    std::vector<GaussianRational> orbit;
    {
        SpherePoint v{GaussianRational(0)};
        for (int k = 0; k < 96; ++k) {
            v = apply(f0, v);
            if (!v.is_finite()) break;
            orbit.push_back(v.v);
        }
    }

    RootedGraph chi_tree = materialize_blocks(catalog, chi_blocks);

    return FastImplementer{lambda0,
                           delta,
                           catalog,
                           std::move(chi_blocks),
                           std::move(chibar),
                           std::move(chi_tree),
                           chi_pair_acc,
                           std::move(U),
                           std::move(pairs),
                           cov.cert,
                           f0,
                           fp,
                           z0,
                           a_fix,
                           pullback_N,
                           std::move(*D0),
                           std::move(D1),
                           std::move(D2),
                           std::move(D3),
                           std::move(delta_hat),
                           std::move(orbit)};
}

// ---------------------------------------------------------------------------
// pipeline
// ---------------------------------------------------------------------------

FastIntoD1Result fast_into_d1(const FastImplementer& imp, const RationalDisk& D1) {
    if (!disk_in_disk(D1, imp.U)) throw GeometryPrecondition("D1 must lie inside U");
    const MPFloat rim = pow(MPFloat(2), -30);
    RationalDisk D = D1;
    std::vector<int> js;
    int captured = -1;
    for (int step = 0; step < 500; ++step) {
        // capture test: some attracting fixed point safely inside D
        MPComplex c_mp = to_mp(D.center());
        MPFloat r_mp = sqrt(to_mp(D.squared_radius()));
        for (int i = 0; i < static_cast<int>(imp.pairs.size()); ++i) {
            if (abs(imp.pairs[i].z_fix - c_mp) < r_mp * (1 - rim)) {
                captured = i;
                break;
            }
        }
        if (captured >= 0) break;
        const GaussianRational m = D.center();
        int j = -1;
        for (int i = 0; i < static_cast<int>(imp.pairs.size()); ++i) {
            if (contains_point(imp.pairs[i].g_disk, m) == Containment::Inside) {
                j = i;
                break;
            }
        }
        if (j < 0) throw InternalError("center of a walk disk escaped the certified covering");
        RationalDisk Dt = generate_disk(D, imp.pairs[j].g_disk);
        RationalDisk Dn = disk_image(inverse(imp.pairs[j].g), Dt);
        if (!(Dn.squared_radius() >= 2 * D.squared_radius()))
            throw InternalError("area doubling violated in the pullback walk");
        if (!disk_in_disk(Dn, imp.U)) throw InternalError("walk disk escaped U");
        js.push_back(j);
        D = std::move(Dn);
    }
    if (captured < 0) throw InternalError("pullback walk failed to capture a fixed point");

    // exact replay: (g_{j_1} o ... o g_{j_{K-1}})(D_K) inside D1
    RationalDisk W = D;
    for (auto it = js.rbegin(); it != js.rend(); ++it)
        W = disk_image(imp.pairs[*it].g, W);
    if (!disk_in_disk(W, D1)) throw InternalError("forward replay left D1");

    return FastIntoD1Result{captured, std::move(js), static_cast<int>(js.size()) + 1, std::move(D)};
}

int quickly_to_zi(const FastImplementer& imp, int i, const GaussianRational& Q,
                  const Rational& eps) {
    if (i < 0 || i >= static_cast<int>(imp.pairs.size())) throw DomainError("pair index out of range");
    if (eps <= 0) throw DomainError("eps must be positive");
    const MoebiusQ& g = imp.pairs[i].g;
    const Rational eps2 = eps * eps;
    SpherePoint v{GaussianRational(0)};
    for (int k = 1; k <= 2000; ++k) {
        v = apply(g, v);
        if (!v.is_finite()) continue;
        if ((v.v - Q).norm2() < eps2) return k;
    }
    throw InternalError("spiral orbit never entered the target ball (contradicts the sector lemma)");
}

namespace {

RationalDisk pull_back(const FastImplementer& imp, RationalDisk D, int steps) {
    MoebiusQ finv = inverse(imp.f0);
    for (int k = 0; k < steps; ++k) D = disk_image(finv, D);
    return D;
}

} // namespace

CloseToPResult close_to_p(const FastImplementer& imp, const GaussianRational& P,
                          const Rational& eps) {
    if (eps <= 0) throw DomainError("eps must be positive");
    Rational half_gap = imp.delta_hat / 2;
    Rational eps_eff = eps < half_gap ? eps : half_gap;
    for (int attempt = 0; attempt < 24; ++attempt, eps_eff = eps_eff / 2) {
        try {
            bool p_inside_d2 = contains_point(imp.D2, P) == Containment::Inside;
            GaussianRational center = P;
            int n0 = 0;
            if (p_inside_d2) {
                MoebiusQ finv = inverse(imp.f0);
                SpherePoint pk{P};
                bool found = false;
                for (int k = 1; k <= 5000; ++k) {
                    pk = apply(finv, pk);
                    if (!pk.is_finite())
                        throw WrongBranch("target is on the critical orbit; use the direct branch");
                    if (contains_point(imp.D1, pk.v) == Containment::Inside &&
                        contains_point(imp.D2, pk.v) != Containment::Inside) {
                        center = pk.v;
                        n0 = k;
                        found = true;
                        break;
                    }
                }
                if (!found) throw InternalError("backward orbit never crossed the D1/D2 shell");
            }
            RationalDisk Dt = disk_from_center_radius(center, eps_eff);
            if (!disks_disjoint(Dt.as_center_radius(), imp.D3.as_center_radius()))
                throw NotADisk("shell margin too small");
            if (p_inside_d2 && !disk_strictly_inside(Dt, imp.D0))
                throw NotADisk("shell margin too small");
            RationalDisk D = pull_back(imp, Dt, imp.pullback_N + 3);
            if (!disk_in_disk(D, imp.U)) throw NotADisk("pullback left U");
            int K = imp.pullback_N + 3 + n0;
            // exact forward replay: f^K(D) inside B(P, eps)
            RationalDisk W = D;
            for (int k = 0; k < K; ++k) W = disk_image(imp.f0, W);
            if (!disk_in_disk(W.as_center_radius(), CenterRadius{P, eps * eps}))
                throw NotADisk("forward replay missed the target ball");
            return CloseToPResult{std::move(D), K};
        } catch (const NotADisk&) {
            continue; // shrink eps_eff and retry
        }
    }
    throw InternalError("close_to_p failed at every shrink level");
}

ImplementationPlan run_fast_implementation(const FastImplementer& imp, const GaussianRational& P,
                                           const Rational& eps) {
    if (eps <= 0) throw DomainError("eps must be positive");
    ImplementationPlan plan;
    plan.target = P;
    plan.eps = eps;
    const Rational eps2 = eps * eps;

    auto finish = [&](std::vector<PlanLabel> labels, int k1, int k2, int k3) {
        plan.labels = std::move(labels);
        plan.k_close = k1;
        plan.k_walk = k2;
        plan.k_spiral = k3;
        // exact replay of the composed ratio
        PartitionPair acc;
        bool first = true;
        for (const PlanLabel& l : plan.labels) {
            PartitionPair h;
            switch (l.kind) {
                case PlanLabel::Kind::Lambda0: h = {imp.lambda0, GaussianRational(1)}; break;
                case PlanLabel::Kind::Chi: h = imp.chi_pair; break;
                case PlanLabel::Kind::Mu: h = fold_blocks(imp.catalog, imp.pairs[l.pair].mu_blocks); break;
            }
            if (first) {
                acc = h;
                first = false;
            } else {
                acc = {h.z_in * acc.z_out, h.z_out * (acc.z_in + acc.z_out)};
            }
        }
        RatioValue v = ratio_of(acc);
        if (!v.is_finite()) throw InternalError("plan replay is not finite");
        plan.replay_value = v.value;
        plan.replay_error2 = (v.value - P).norm2();
        if (!(plan.replay_error2 < eps2))
            throw InternalError("plan replay missed the target tolerance");
        return plan;
    };

    // on-orbit prescan: pure-lambda0 plans
    for (size_t k = 0; k < imp.critical_orbit.size(); ++k) {
        if ((imp.critical_orbit[k] - P).norm2() < eps2)
            return finish(std::vector<PlanLabel>(k + 1, {PlanLabel::Kind::Lambda0, -1}), 0, 0,
                          static_cast<int>(k + 1));
    }

    // near the attracting fixed point: forward iteration only
    MPFloat dist_a = abs(to_mp(P) - imp.a);
    if (dist_a < MPFloat(0.6) * to_mp(eps)) {
        SpherePoint v{GaussianRational(0)};
        int k = 0;
        const int cap = 20000;
        while (k < cap) {
            v = apply(imp.f0, v);
            ++k;
            if (v.is_finite() && (v.v - P).norm2() < eps2) break;
        }
        if (k >= cap) throw InternalError("forward orbit failed to settle near a");
        return finish(std::vector<PlanLabel>(k, {PlanLabel::Kind::Lambda0, -1}), k, 0, 0);
    }

    CloseToPResult ctp = close_to_p(imp, P, eps);
    FastIntoD1Result walk = fast_into_d1(imp, ctp.D);

    // dyadic lower bound rho <= radius(D_K), within 2^-10 relatively
    Rational r2 = walk.D_K.squared_radius();
    MPFloat r_mp = sqrt(to_mp(r2));
    Rational rho = dyadic_round(r_mp * (1 - pow(MPFloat(2), -12)), 80);
    while (!(rho * rho <= r2)) rho = rho * make_rational(4095, 4096);
    if (rho <= 0) throw InternalError("degenerate walk disk");

    int k3 = quickly_to_zi(imp, walk.i, walk.D_K.center(), rho);

    std::vector<PlanLabel> labels;
    for (int k = 0; k < k3; ++k) {
        labels.push_back({PlanLabel::Kind::Chi, -1});
        labels.push_back({PlanLabel::Kind::Mu, walk.i});
    }
    for (auto it = walk.js.rbegin(); it != walk.js.rend(); ++it) {
        labels.push_back({PlanLabel::Kind::Chi, -1});
        labels.push_back({PlanLabel::Kind::Mu, *it});
    }
    for (int k = 0; k < ctp.K; ++k) labels.push_back({PlanLabel::Kind::Lambda0, -1});
    return finish(std::move(labels), ctp.K, static_cast<int>(walk.js.size()), k3);
}

EmittedTree emit_tree(const ImplementationPlan& plan, const FastImplementer& imp) {
    if (plan.labels.empty()) throw DomainError("empty plan");
    if (plan.labels.back().kind != PlanLabel::Kind::Lambda0)
        throw DomainError("plan must terminate with lambda0");

    std::map<int, RootedGraph> mu_trees;
    auto tree_of_label = [&](const PlanLabel& l) -> RootedGraph {
        switch (l.kind) {
            case PlanLabel::Kind::Lambda0: return single_vertex(imp.delta);
            case PlanLabel::Kind::Chi: return imp.chi_tree;
            case PlanLabel::Kind::Mu: {
                auto it = mu_trees.find(l.pair);
                if (it == mu_trees.end())
                    it = mu_trees.emplace(l.pair,
                                          materialize_blocks(imp.catalog, imp.pairs[l.pair].mu_blocks))
                             .first;
                return it->second;
            }
        }
        throw InternalError("unknown label");
    };

    std::vector<RootedGraph> blocks;
    blocks.reserve(plan.labels.size());
    PartitionPair acc;
    bool first = true;
    for (const PlanLabel& l : plan.labels) {
        blocks.push_back(tree_of_label(l));
        PartitionPair h;
        switch (l.kind) {
            case PlanLabel::Kind::Lambda0: h = {imp.lambda0, GaussianRational(1)}; break;
            case PlanLabel::Kind::Chi: h = imp.chi_pair; break;
            case PlanLabel::Kind::Mu: h = fold_blocks(imp.catalog, imp.pairs[l.pair].mu_blocks); break;
        }
        if (first) {
            acc = h;
            first = false;
        } else {
            acc = {h.z_in * acc.z_out, h.z_out * (acc.z_in + acc.z_out)};
        }
    }
    RootedGraph tree = implement_on_path(blocks);
    if (tree.root_degree() != 1 && tree.vertex_count > 1)
        throw InternalError("emitted tree root degree must be 1");

    if (acc.z_out.is_zero()) {
        for (const auto& cand : exceptional_candidates(imp.delta))
            if (cand == imp.lambda0)
                throw ExceptionalParameter("Z^out vanished: lambda0 is an exceptional parameter");
        throw InternalError("Z^out vanished although lambda0 is not exceptional");
    }
    // |ratio - P|^2 < eps^2, cross-multiplied to avoid division
    GaussianRational num = acc.z_in - plan.target * acc.z_out;
    if (!(num.norm2() < plan.eps * plan.eps * acc.z_out.norm2()))
        throw InternalError("emitted tree ratio missed the target tolerance");
    return EmittedTree{std::move(tree), std::move(acc)};
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

std::string implementer_to_json(const FastImplementer& imp) {
    nlohmann::json j;
    j["lambda0"] = to_string(imp.lambda0);
    j["delta"] = imp.delta;
    auto disk_json = [](const RationalDisk& d) {
        return nlohmann::json{{"p1", to_string(d.p1)}, {"p2", to_string(d.p2)}, {"p3", to_string(d.p3)}};
    };
    j["U"] = disk_json(imp.U);
    j["chi"] = {{"value", to_string(imp.chibar)}, {"blocks", imp.chi_blocks}};

    std::set<int> used(imp.chi_blocks.begin(), imp.chi_blocks.end());
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& p : imp.pairs) {
        used.insert(p.mu_blocks.begin(), p.mu_blocks.end());
        nlohmann::json pj;
        pj["mu"] = to_string(p.mu);
        pj["chi"] = to_string(imp.chibar);
        pj["blocks"] = p.mu_blocks;
        pj["g"] = to_string(p.g);
        pj["g_of_U"] = disk_json(p.g_disk);
        pj["z_fix"] = {{"re", to_decimal_string(p.z_fix.re, 40)},
                       {"im", to_decimal_string(p.z_fix.im, 40)},
                       {"exact", p.z_fix_exact},
                       {"precision_bits", p.z_fix_exact ? 0 : kMPBits}};
        pairs.push_back(std::move(pj));
    }
    j["pairs"] = std::move(pairs);

    nlohmann::json trees;
    for (int idx : used)
        trees[std::to_string(idx)] =
            nlohmann::json::parse(graph_to_json(imp.catalog.tree_of(imp.catalog.entries[idx])));
    j["catalog_trees"] = std::move(trees);

    j["conditions"] = {
        {"fixed_points_in_U", "per pair, exact when the discriminant is a Q[i] square, else 259-bit with margin"},
        {"derivative_band", "modulus band exact (square-root-free quartic comparisons), argument at 259 bits with 2^-180 margin"},
        {"covering", {{"method", "quadtree"},
                      {"max_depth_used", imp.coverage.max_depth_used},
                      {"cells_tested", imp.coverage.cells_tested},
                      {"exact_tests", imp.coverage.exact_tests}}},
        {"U1", "exact (f^{-1}(U) strictly inside U)"},
        {"U2", "exact when the fixed point is rational, else 259-bit with margin"},
        {"U3", "by construction (center + dyadic radius)"},
    };
    j["close_to_p"] = {{"N", imp.pullback_N},
                       {"D0", disk_json(imp.D0)},
                       {"D1", disk_json(imp.D1)},
                       {"D2", disk_json(imp.D2)},
                       {"D3", disk_json(imp.D3)},
                       {"delta_hat", to_string(imp.delta_hat)}};
    return j.dump();
}

} // namespace hardcore
