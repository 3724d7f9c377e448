// Exact solvers for the single-shot repositioning problem.
//
// For a fixed per-station net transfer vector r, total lost demand is
//
//     Phi(r) = sum_s sum_k min(0, c_{s,k} + r_s),   c_{s,k} = bikes_s + net_{k,s}
//
// which is separable and concave in r. Per-station tables of sorted c values
// with prefix sums give O(log K) evaluation of one station's contribution,
// so moves can be applied and undone incrementally during search.
//
// solve() runs branch and bound over per-vehicle (pickup, dropoff, count)
// triples in two passes. Pass one establishes the optimal objective value
// using admissible tail bounds built from three ingredients, each a valid
// upper bound on how much lost demand t future trips can recover:
//   - the total current shortfall -Phi,
//   - t times the best single-trip package achievable from the current state
//     (sound for sequences of trips: any t-trip completion's net effect can
//     be rewritten as at most t station-to-station transfers within vehicle
//     capacity, and concavity makes their isolated gains an overestimate),
//   - merged marginal gain and pickup-loss curves evaluated at the largest
//     unit count t vehicles could carry.
// Pass two re-searches in lexicographic triple order, pruning subtrees whose
// bound exceeds the known optimum, and stops at the first assignment that
// attains it. That assignment is the lexicographically smallest optimal one,
// which is exactly the plan solve_exhaustive()'s in-order scan with
// strict-improvement updates settles on, so the two entry points agree move
// for move and not just in objective value.
//
// Vehicles with equal capacity are interchangeable; both passes restrict to
// assignments whose triples are non-decreasing within each capacity class.
// The lexicographically smallest optimum always has that shape (swapping two
// out-of-order triples of equal-capacity vehicles preserves feasibility and
// value while shrinking the vector lexicographically).

#include "bsr/mip.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "json.hpp"

namespace bsr {
namespace mip {

namespace {

using i64 = std::int64_t;
using i128 = __int128;

i64 gcd_i64(i64 a, i64 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

unsigned __int128 gcd_u128(unsigned __int128 a, unsigned __int128 b) {
    while (b != 0) {
        unsigned __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Reduce num/den where num may need 128 bits mid-computation. The reduced
// numerator must fit in 64 bits; instances validated by ProblemInstance
// stay far away from that limit.
void reduce_objective(i128 num, i64 den, std::int64_t* out_num, std::int64_t* out_den) {
    bool neg = num < 0;
    unsigned __int128 un = neg ? static_cast<unsigned __int128>(-num) : static_cast<unsigned __int128>(num);
    unsigned __int128 ud = static_cast<unsigned __int128>(den);
    unsigned __int128 g = un == 0 ? ud : gcd_u128(un, ud);
    un /= g;
    ud /= g;
    if (un > static_cast<unsigned __int128>(std::numeric_limits<i64>::max()))
        throw std::overflow_error("objective numerator exceeds 64-bit range");
    *out_num = neg ? -static_cast<i64>(un) : static_cast<i64>(un);
    *out_den = static_cast<i64>(ud);
}

struct Triple {
    i64 p = 0;
    i64 q = 0;
    i64 m = 0;
};

bool operator<(const Triple& a, const Triple& b) {
    return std::tie(a.p, a.q, a.m) < std::tie(b.p, b.q, b.m);
}

// One station's contribution to Phi: f(r) = sum_k min(0, c_k + r) over the
// sorted c values, via prefix sums.
struct StationTable {
    std::vector<i64> c;    // ascending
    std::vector<i64> pre;  // pre[i] = c[0] + ... + c[i-1]

    void build(std::vector<i64> values) {
        c = std::move(values);
        std::sort(c.begin(), c.end());
        pre.assign(c.size() + 1, 0);
        for (std::size_t i = 0; i < c.size(); ++i) pre[i + 1] = pre[i] + c[i];
    }

    i64 f(i64 r) const {
        // terms with c_k + r < 0, i.e. c_k < -r
        std::size_t idx = std::lower_bound(c.begin(), c.end(), -r) - c.begin();
        return pre[idx] + static_cast<i64>(idx) * r;
    }

    // Number of scenarios gaining from the j-th unit dropped on top of r.
    i64 drop_marginal(i64 r, i64 j) const {
        // count of c_k <= -r - j
        return std::upper_bound(c.begin(), c.end(), -r - j) - c.begin();
    }

    // Negative of the scenarios hurt by the j-th unit picked from r.
    i64 pick_marginal(i64 r, i64 j) const {
        return -(std::upper_bound(c.begin(), c.end(), j - r - 1) - c.begin());
    }
};

// Shared incremental state for both solver passes and the exhaustive oracle.
struct SearchState {
    const ProblemInstance& inst;
    int S;
    int V;
    i128 trip_w;  // scaled cost of one moving vehicle: K * alpha_num * beta_den
    i128 lost_w;  // scaled weight of lost demand:      beta_num * alpha_den
    i64 obj_den;  // alpha_den * beta_den

    std::vector<StationTable> tab;
    std::vector<i64> r;       // committed net transfer per station
    std::vector<i64> picked;  // committed pickups per station
    std::vector<i64> fcur;    // tab[s].f(r[s]) cache
    i64 phi = 0;              // sum of fcur
    i64 trips = 0;

    explicit SearchState(const ProblemInstance& in) : inst(in) {
        S = in.stations;
        V = in.vehicles;
        trip_w = static_cast<i128>(in.scenarios()) * in.alpha.num * in.beta.den;
        lost_w = static_cast<i128>(in.beta.num) * in.alpha.den;
        obj_den = in.alpha.den * in.beta.den;
        tab.resize(S);
        for (int s = 0; s < S; ++s) {
            std::vector<i64> vals(in.net_flow.size());
            for (std::size_t k = 0; k < in.net_flow.size(); ++k)
                vals[k] = in.bikes[s] + in.net_flow[k][s];
            tab[s].build(std::move(vals));
        }
        r.assign(S, 0);
        picked.assign(S, 0);
        fcur.resize(S);
        phi = 0;
        for (int s = 0; s < S; ++s) {
            fcur[s] = tab[s].f(0);
            phi += fcur[s];
        }
    }

    i64 avail(int s) const { return inst.bikes[s] - picked[s]; }
    i64 gain(int s, i64 m) const { return tab[s].f(r[s] + m) - fcur[s]; }
    i64 loss(int s, i64 m) const { return tab[s].f(r[s] - m) - fcur[s]; }

    // Units a dropoff at s can place while every unit still helps at least
    // one scenario. Zero when no scenario at s is short.
    i64 absorb(int s) const {
        i64 worst = tab[s].c.front() + r[s];
        return worst < 0 ? -worst : 0;
    }

    i128 value() const { return trip_w * trips - lost_w * phi; }

    void apply(const Triple& t) {
        if (t.m == 0) return;
        r[t.p] -= t.m;
        r[t.q] += t.m;
        picked[t.p] += t.m;
        for (int s : {static_cast<int>(t.p), static_cast<int>(t.q)}) {
            i64 nf = tab[s].f(r[s]);
            phi += nf - fcur[s];
            fcur[s] = nf;
        }
        ++trips;
    }

    void undo(const Triple& t) {
        if (t.m == 0) return;
        r[t.p] += t.m;
        r[t.q] -= t.m;
        picked[t.p] -= t.m;
        for (int s : {static_cast<int>(t.p), static_cast<int>(t.q)}) {
            i64 nf = tab[s].f(r[s]);
            phi += nf - fcur[s];
            fcur[s] = nf;
        }
        --trips;
    }
};

constexpr i64 kSpreadUnitLimit = 4096;  // beyond this, fall back to coarser bounds
constexpr i64 kHoistLimit = 4096;       // largest unit count with a cached pickup list

class BranchAndBound {
public:
    explicit BranchAndBound(const ProblemInstance& inst) : st_(inst) {
        S_ = st_.S;
        V_ = st_.V;
        // usum_[j][t] = combined capacity of the t largest-capacity vehicles
        // among j..V-1; cmax_[j] = largest single capacity in that suffix.
        usum_.resize(V_ + 1);
        cmax_.assign(V_ + 1, 0);
        for (int j = V_; j >= 0; --j) {
            std::vector<i64> caps(inst.capacity.begin() + j, inst.capacity.end());
            std::sort(caps.begin(), caps.end(), std::greater<i64>());
            usum_[j].assign(caps.size() + 1, 0);
            for (std::size_t t = 0; t < caps.size(); ++t)
                usum_[j][t + 1] = usum_[j][t] + caps[t];
            cmax_[j] = caps.empty() ? 0 : caps[0];
        }
        cur_.resize(V_);
        gtop_.resize(V_);
        utop_.resize(V_);
        ltop_.resize(V_);
    }

    std::vector<Triple> run() {
        best_ = greedy_value();
        if (const char* cut = std::getenv("BSR_SOLVE_CUT")) {
            i128 c = std::atoll(cut);
            if (c < best_) best_ = c;
        }
        if (std::getenv("BSR_SOLVE_STATS")) {
            i128 lb = st_.value() + tail_bound(0, static_cast<i128>(1) << 100);
            std::fprintf(stderr, "[stats] greedy %lld, root lb %lld\n",
                         (long long)(i64)best_, (long long)(i64)lb);
            build_chunk_gains(chunk_, chunku_, V_, cmax_[0]);
            build_unit_losses(lunit_, V_);
            i64 pool = 0;
            for (int s = 0; s < S_; ++s) {
                i64 a = st_.avail(s);
                i64 u = 0;
                while (u < a && st_.tab[s].pick_marginal(st_.r[s], u + 1) == 0) ++u;
                pool += u;
            }
            std::fprintf(stderr, "[stats] free pick pool %lld\n", (long long)pool);
            {
                std::vector<i64> freea;
                for (int s = 0; s < S_; ++s) {
                    i64 a = st_.avail(s);
                    i64 u = 0;
                    while (u < a && st_.tab[s].pick_marginal(st_.r[s], u + 1) == 0) ++u;
                    if (u > 0) freea.push_back(u);
                }
                std::sort(freea.rbegin(), freea.rend());
                std::string line = "[stats] free per station:";
                for (std::size_t i = 0; i < freea.size() && i < 14; ++i)
                    line += " " + std::to_string(freea[i]);
                std::fprintf(stderr, "%s\n", line.c_str());
                using Entry = std::tuple<i64, int, i64>;
                std::priority_queue<Entry> pq;
                for (int s = 0; s < S_; ++s) {
                    i64 u = std::min(cmax_[0], st_.absorb(s));
                    if (u < 1) continue;
                    i64 g = st_.gain(s, u);
                    if (g > 0) pq.emplace(g, s, u);
                }
                for (int t = 1; t <= 10 && !pq.empty(); ++t) {
                    auto [g, s, u] = pq.top();
                    pq.pop();
                    std::fprintf(stderr, "[stats] chunk %d: station %d units %lld gain %lld\n",
                                 t, s, (long long)u, (long long)g);
                    i64 nu = std::min(u + cmax_[0], st_.absorb(s));
                    if (nu > u) {
                        i64 ng = st_.gain(s, nu) - st_.gain(s, u);
                        if (ng > 0) pq.emplace(ng, s, nu);
                    }
                }
            }
            for (int t = 1; t <= V_; ++t)
                std::fprintf(stderr, "[stats] t=%d G=%lld L=%lld bound=%lld\n", t,
                             (long long)chunk_[t], (long long)lunit_[t],
                             (long long)(i64)(st_.trip_w * t -
                                              st_.lost_w * std::min<i64>(chunk_[t] + lunit_[t],
                                                                         -st_.phi)));
        }
        dfs_value(0);
        target_ = best_;
        if (std::getenv("BSR_SOLVE_STATS")) {
            std::fprintf(stderr, "[stats] value pass: %lld nodes, %lld leaf scans, %lld tails\n",
                         (long long)n_value_, (long long)n_leaf_, (long long)n_tail_);
        }
        reset_state();
        found_ = false;
        dfs_lex(0);
        if (std::getenv("BSR_SOLVE_STATS")) {
            std::fprintf(stderr, "[stats] lex pass: %lld nodes\n", (long long)n_lex_);
        }
        if (!found_) throw std::logic_error("lex pass failed to reach the optimal value");
        return cur_;
    }

    i128 optimal_value() const { return target_; }

private:
    void reset_state() {
        std::fill(st_.r.begin(), st_.r.end(), 0);
        std::fill(st_.picked.begin(), st_.picked.end(), 0);
        st_.phi = 0;
        for (int s = 0; s < S_; ++s) {
            st_.fcur[s] = st_.tab[s].f(0);
            st_.phi += st_.fcur[s];
        }
        st_.trips = 0;
        last_.clear();
    }

    const Triple& last_for(i64 cap) {
        auto it = last_.find(cap);
        if (it == last_.end())
            it = last_.emplace(cap, Triple{-1, -1, -1}).first;
        return it->second;
    }

    // Best single transfer for one vehicle against the current state, or an
    // idle move when nothing improves.
    Triple best_single(i64 cap) {
        Triple best{0, 0, 0};
        i128 best_delta = 0;
        for (int q = 0; q < S_; ++q) {
            i64 ab = st_.absorb(q);
            i64 mq = std::min(cap, ab);
            for (i64 m = 1; m <= mq; ++m) {
                i64 g = st_.gain(q, m);
                i128 gd = st_.trip_w - st_.lost_w * g;
                if (gd >= best_delta) continue;  // even a free pickup loses
                for (int p = 0; p < S_; ++p) {
                    if (p == q || st_.avail(p) < m) continue;
                    i64 l = st_.loss(p, m);
                    i128 delta = gd - st_.lost_w * l;
                    if (delta < best_delta) {
                        best_delta = delta;
                        best = Triple{p, q, m};
                    }
                    if (l == 0) break;  // pickups only get costlier
                }
            }
        }
        return best;
    }

    // Feasible-plan value seeding the incumbent: commit the best immediately
    // improving move per vehicle, then re-optimize one trip at a time against
    // the rest of the plan until no single reassignment helps.
    i128 greedy_value() {
        std::vector<Triple> done(V_, Triple{0, 0, 0});
        for (int v = 0; v < V_; ++v) {
            i64 cap = st_.inst.capacity[v];
            Triple best = best_single(cap);
            if (best.m > 0) {
                st_.apply(best);
                done[v] = best;
            }
        }
        for (int pass = 0; pass < 8; ++pass) {
            bool improved = false;
            for (int v = 0; v < V_; ++v) {
                Triple old = done[v];
                if (old.m > 0) st_.undo(old);
                Triple best = best_single(st_.inst.capacity[v]);
                if (best.m > 0) st_.apply(best);
                done[v] = best;
                if (!(best.p == old.p && best.q == old.q && best.m == old.m)) improved = true;
            }
            if (!improved) break;
        }
        i128 val = st_.value();
        for (int v = V_ - 1; v >= 0; --v)
            if (done[v].m > 0) st_.undo(done[v]);
        return val;
    }

    // Admissible lower bound on what the vehicles from `depth` on can add to
    // the current value. Always <= 0 since they may all stay idle. The terms
    // refine from cheap to costly, and the refinement stops as soon as the
    // running bound reaches `need`: dropping the remaining terms only loosens
    // an already admissible bound, and the caller prunes either way once the
    // returned value is at least `need`.
    i128 tail_bound(int depth, i128 need) {
        int rem = V_ - depth;
        if (rem == 0) return 0;
        i64 total_ub = -st_.phi;
        if (total_ub == 0) return 0;

        i64 umax = usum_[depth][rem];
        i64 cmax = cmax_[depth];

        // Total shortfall alone; one trip minimizes the trip cost.
        i128 tail = st_.trip_w - st_.lost_w * total_ub;
        if (tail >= 0) return 0;
        if (tail >= need) return tail;

        // Chunked dropoff gains paired with the least unit pickup costs.
        build_chunk_gains(chunk_, chunku_, rem, cmax);
        build_unit_losses(lunit_, rem);
        tail = 0;
        for (int t = 1; t <= rem; ++t) {
            i128 cand = st_.trip_w * t -
                        st_.lost_w * std::min(total_ub, chunk_[t] + lunit_[t]);
            if (cand < tail) tail = cand;
        }
        if (tail >= need) return tail;

        // Merged marginal curves pairing gains with pickup losses, capped so
        // degenerate instances with huge capacities or inventories cannot
        // stall the search.
        bool have_spread = false;
        if (umax <= kSpreadUnitLimit) {
            have_spread = true;
            gains_.clear();
            losses_.clear();
            using Entry = std::tuple<i64, int, i64>;  // (marginal, station, units taken)
            std::priority_queue<Entry> pq;
            for (int s = 0; s < S_; ++s) {
                i64 g = st_.tab[s].drop_marginal(st_.r[s], 1);
                if (g > 0) pq.emplace(g, s, 1);
            }
            while (!pq.empty() && static_cast<i64>(gains_.size()) < umax) {
                auto [g, s, j] = pq.top();
                pq.pop();
                gains_.push_back(g);
                i64 nx = st_.tab[s].drop_marginal(st_.r[s], j + 1);
                if (nx > 0) pq.emplace(nx, s, j + 1);
            }
            std::priority_queue<Entry> lq;
            for (int s = 0; s < S_; ++s) {
                if (st_.avail(s) >= 1)
                    lq.emplace(st_.tab[s].pick_marginal(st_.r[s], 1), s, 1);
            }
            i64 useful = std::min<i64>(umax, static_cast<i64>(gains_.size()));
            while (!lq.empty() && static_cast<i64>(losses_.size()) < useful) {
                auto [l, s, j] = lq.top();
                lq.pop();
                losses_.push_back(l);
                if (j + 1 <= st_.avail(s))
                    lq.emplace(st_.tab[s].pick_marginal(st_.r[s], j + 1), s, j + 1);
            }
            // spread_[u]: best recovery moving at most u units. The per-unit
            // increment gains_[u] + losses_[u] only decreases, so the running
            // sum's maximum is the prefix maximum.
            spread_.assign(umax + 1, 0);
            i64 acc = 0, bestacc = 0;
            for (i64 u = 1; u <= umax; ++u) {
                if (u > static_cast<i64>(losses_.size())) {
                    spread_[u] = bestacc;
                    continue;
                }
                i64 inc = losses_[u - 1];
                if (u <= static_cast<i64>(gains_.size())) inc += gains_[u - 1];
                acc += inc;
                bestacc = std::max(bestacc, acc);
                spread_[u] = bestacc;
            }
            // Zero-cost pickup budget. Each trip draws from one station, so a
            // t-trip completion collects free units from at most t stations,
            // capped by the t deepest free runs; every unit beyond that pays
            // at least the cheapest post-run marginals. Pairing the unit gain
            // prefix against that cost, maximized over the units moved, caps
            // the recovery more tightly than either curve alone.
            freevals_.clear();
            for (int s = 0; s < S_; ++s) {
                i64 fr = st_.tab[s].c.front() + st_.r[s];
                i64 a = st_.avail(s);
                if (fr > a) fr = a;
                if (fr > 0) freevals_.push_back(fr);
            }
            std::sort(freevals_.begin(), freevals_.end(), std::greater<i64>());
            ppre_.assign(1, 0);
            {
                using Entry = std::tuple<i64, int, i64>;
                std::priority_queue<Entry> fq;
                for (int s = 0; s < S_; ++s) {
                    i64 fr = std::max<i64>(st_.tab[s].c.front() + st_.r[s], 0);
                    if (fr + 1 <= st_.avail(s))
                        fq.emplace(st_.tab[s].pick_marginal(st_.r[s], fr + 1), s, fr + 1);
                }
                while (!fq.empty() && static_cast<i64>(ppre_.size()) <= umax) {
                    auto [l, s, j] = fq.top();
                    fq.pop();
                    ppre_.push_back(ppre_.back() + l);
                    if (j + 1 <= st_.avail(s))
                        fq.emplace(st_.tab[s].pick_marginal(st_.r[s], j + 1), s, j + 1);
                }
            }
            gpre_.assign(gains_.size() + 1, 0);
            for (std::size_t i = 0; i < gains_.size(); ++i)
                gpre_[i + 1] = gpre_[i] + gains_[i];
            // Every dropoff unit inside a station's absorbing range helps at
            // least one scenario, so a chunk's gain splits into one scenario
            // per unit plus an excess. A t-trip completion touches at most t
            // chunks, so its gains are capped by the units moved plus the t
            // largest chunk excesses.
            excpre_.assign(1, 0);
            {
                exc_.clear();
                for (int s = 0; s < S_; ++s) {
                    i64 a = st_.absorb(s);
                    for (i64 lo = 0; lo < a; lo += cmax) {
                        i64 hi = std::min(lo + cmax, a);
                        i64 g = st_.gain(s, hi) - st_.gain(s, lo);
                        if (g > hi - lo) exc_.push_back(g - (hi - lo));
                    }
                }
                std::sort(exc_.begin(), exc_.end(), std::greater<i64>());
                for (int j = 0; j < rem && j < static_cast<int>(exc_.size()); ++j)
                    excpre_.push_back(excpre_.back() + exc_[j]);
            }
            rec_.assign(rem + 1, 0);
            i64 fbudget = 0;
            for (int t = 1; t <= rem; ++t) {
                fbudget += t <= static_cast<i64>(freevals_.size()) ? freevals_[t - 1] : 0;
                i64 cap_u = std::min(usum_[depth][t], static_cast<i64>(gains_.size()));
                i64 exc_t = excpre_[std::min<std::size_t>(t, excpre_.size() - 1)];
                i64 bestrec = 0;
                for (i64 u = 1; u <= cap_u; ++u) {
                    i64 over = u - fbudget;
                    if (over >= static_cast<i64>(ppre_.size())) break;
                    i64 rec = std::min({gpre_[u], chunk_[t], u + exc_t});
                    if (over > 0) rec += ppre_[over];
                    if (rec > bestrec) bestrec = rec;
                }
                rec_[t] = bestrec;
            }
            tail = 0;
            for (int t = 1; t <= rem; ++t) {
                i64 ub = std::min(total_ub, chunk_[t] + lunit_[t]);
                ub = std::min(ub, spread_[usum_[depth][t]]);
                ub = std::min(ub, rec_[t]);
                i128 cand = st_.trip_w * t - st_.lost_w * ub;
                if (cand < tail) tail = cand;
            }
            if (tail >= need) return tail;
        }

        // Best single-transfer package from the current state. For outsized
        // capacities skip the scan; total_ub still bounds every package.
        i64 pkg = total_ub;
        if (cmax <= 1024) {
            pkg = 0;
            for (i64 m = 1; m <= cmax; ++m) {
                i64 g1 = 0, g2 = 0;
                int g1s = -1;
                i64 l1 = std::numeric_limits<i64>::min(), l2 = std::numeric_limits<i64>::min();
                int l1s = -1;
                for (int s = 0; s < S_; ++s) {
                    i64 g = st_.gain(s, m);
                    if (g > g1) {
                        g2 = g1;
                        g1 = g;
                        g1s = s;
                    } else if (g > g2) {
                        g2 = g;
                    }
                    if (st_.avail(s) >= m) {
                        i64 l = st_.loss(s, m);
                        if (l > l1) {
                            l2 = l1;
                            l1 = l;
                            l1s = s;
                        } else if (l > l2) {
                            l2 = l;
                        }
                    }
                }
                if (g1 == 0 || l1s < 0) continue;
                i64 cand;
                if (g1s != l1s) {
                    cand = g1 + l1;
                } else {
                    cand = std::numeric_limits<i64>::min();
                    if (l2 != std::numeric_limits<i64>::min()) cand = std::max(cand, g1 + l2);
                    if (g2 > 0) cand = std::max(cand, g2 + l1);
                }
                if (cand > pkg) pkg = cand;
            }
        }

        i128 best_tail = 0;
        for (int t = 1; t <= rem; ++t) {
            i64 ub = std::min(total_ub, chunk_[t] + lunit_[t]);
            i64 by_pkg = (pkg >= total_ub / t) ? total_ub : pkg * t;
            ub = std::min(ub, by_pkg);
            if (have_spread) {
                ub = std::min(ub, spread_[usum_[depth][t]]);
                ub = std::min(ub, rec_[t]);
            }
            i128 tail = st_.trip_w * t - st_.lost_w * ub;
            if (tail < best_tail) best_tail = tail;
        }
        return best_tail;
    }

    // G[t] = upper bound on the dropoff gains t trips can realize from the
    // current state, as the sum of the t largest entries of the merged
    // per-station chunk-marginal streams. Any t-trip completion nets out to
    // at most t transfers of at most cmax units each, a station receiving
    // U units needs at least ceil(U / cmax) of them, and concavity makes the
    // chunk prefix an overestimate of the station's actual gain, so charging
    // one stream entry per transfer dominates every completion.
    void build_chunk_gains(std::vector<i64>& G, std::vector<i64>& U, int rem, i64 cmax) const {
        G.assign(rem + 1, 0);
        U.assign(rem + 1, 0);
        if (rem == 0 || cmax < 1) return;
        using Entry = std::tuple<i64, int, i64>;  // (chunk gain, station, units so far)
        std::priority_queue<Entry> pq;
        for (int s = 0; s < S_; ++s) {
            i64 u = std::min(cmax, st_.absorb(s));
            if (u < 1) continue;
            i64 g = st_.gain(s, u);
            if (g > 0) pq.emplace(g, s, u);
        }
        for (int t = 1; t <= rem; ++t) {
            if (pq.empty()) {
                G[t] = G[t - 1];
                U[t] = U[t - 1];
                continue;
            }
            auto [g, s, u] = pq.top();
            pq.pop();
            G[t] = G[t - 1] + g;
            i64 prev = ((u - 1) / cmax) * cmax;  // units this station held before the chunk
            U[t] = U[t - 1] + (u - prev);
            i64 nu = std::min(u + cmax, st_.absorb(s));
            if (nu > u) {
                i64 ng = st_.gain(s, nu) - st_.gain(s, u);
                if (ng > 0) pq.emplace(ng, s, nu);
            }
        }
    }

    // Pickup candidates for moving m units, every station with stock, sorted
    // by how little the pickup hurts. The list is the same for every dropoff
    // slice at a node, so it is built once per (node, m) and cached until the
    // next node bumps the epoch. Unit counts past kHoistLimit fall back to an
    // uncached build; they only arise from degenerate capacities.
    const std::vector<std::pair<i64, int>>& pickups_for(i64 m) {
        if (m > kHoistLimit) {
            porder_.clear();
            for (int p = 0; p < S_; ++p)
                if (st_.avail(p) >= m) porder_.push_back({st_.loss(p, m), -p});
            std::sort(porder_.begin(), porder_.end(), std::greater<std::pair<i64, int>>());
            return porder_;
        }
        if (static_cast<std::size_t>(m) >= pl_.size()) {
            pl_.resize(m + 1);
            pl_epoch_.resize(m + 1, 0);
        }
        auto& lst = pl_[m];
        if (pl_epoch_[m] != epoch_) {
            pl_epoch_[m] = epoch_;
            lst.clear();
            for (int p = 0; p < S_; ++p)
                if (st_.avail(p) >= m) lst.push_back({st_.loss(p, m), -p});
            std::sort(lst.begin(), lst.end(), std::greater<std::pair<i64, int>>());
        }
        return lst;
    }

    // L[t] = least pickup cost t trips can get away with: every trip lifts at
    // least one unit, per-station pick marginals only worsen with depth, so
    // the t least costly units across the merged streams dominate every
    // choice of sources. Streams that run dry pad with zero, which only
    // loosens the bound.
    void build_unit_losses(std::vector<i64>& L, int rem) const {
        L.assign(rem + 1, 0);
        if (rem == 0) return;
        using Entry = std::tuple<i64, int, i64>;  // (marginal, station, units taken)
        std::priority_queue<Entry> lq;
        for (int s = 0; s < S_; ++s)
            if (st_.avail(s) >= 1) lq.emplace(st_.tab[s].pick_marginal(st_.r[s], 1), s, 1);
        for (int t = 1; t <= rem; ++t) {
            if (lq.empty()) {
                L[t] = L[t - 1];
                continue;
            }
            auto [l, s, j] = lq.top();
            lq.pop();
            L[t] = L[t - 1] + l;
            if (j + 1 <= st_.avail(s))
                lq.emplace(st_.tab[s].pick_marginal(st_.r[s], j + 1), s, j + 1);
        }
    }

    // Lower bound on the value reachable through any child of the current
    // node that drops m units on q for gain g, over completions that keep at
    // least one more vehicle moving. The child's pickup loss cancels: future
    // trips may reclaim those units, but the refill bonus is capped by the
    // loss the pickup just paid, so the bound is the same for every pickup
    // station and the whole (q, m) slice shares it. R is the shortfall left
    // after the drop; tt further trips recover at most what the chunk-gain
    // prefix G admits, pay at least the unit losses L (less one unit that the
    // refilled pickup may hand back for free), plus that cancelled refill.
    i128 slice_completion(const std::vector<i64>& G, const std::vector<i64>& L, int rem,
                          i128 val, i64 g, i64 R) const {
        i128 best = val + st_.trip_w * 2 - st_.lost_w * (g + std::min(G[1], R));
        for (int tt = 2; tt <= rem; ++tt) {
            i128 cand = val + st_.trip_w * (1 + tt) -
                        st_.lost_w * (g + std::min(G[tt] + L[tt - 1], R));
            if (cand < best) best = cand;
        }
        return best;
    }

    // Same completion bound under an idle current vehicle: no leading trip,
    // no refill credit, the full shortfall still open.
    i128 idle_completion(const std::vector<i64>& G, const std::vector<i64>& L, int rem,
                         i128 val) const {
        i128 best = val;
        i64 R = -st_.phi;
        for (int tt = 1; tt <= rem; ++tt) {
            i128 cand = val + st_.trip_w * tt - st_.lost_w * std::min(G[tt] + L[tt], R);
            if (cand < best) best = cand;
        }
        return best;
    }

    // Exact best completion by the final vehicle, replacing a full expansion.
    // The idle completion is the node's own value, recorded by the caller;
    // here only moves matter: maximize gain(q, m) + loss(p, m) over the
    // candidates the expansion would have generated.
    void leaf_best(i128 val) {
        i64 cap = st_.inst.capacity[V_ - 1];
        Triple last = last_for(cap);
        bool constrained = Triple{0, 0, 0} < last;
        i64 best_gl = std::numeric_limits<i64>::min();
        for (i64 m = 1; m <= cap; ++m) {
            i64 g1 = std::numeric_limits<i64>::min(), g2 = g1;
            int g1s = -1;
            for (int q = 0; q < S_; ++q) {
                if (st_.absorb(q) < m) continue;
                i64 g = st_.gain(q, m);
                if (g > g1) {
                    g2 = g1;
                    g1 = g;
                    g1s = q;
                } else if (g > g2) {
                    g2 = g;
                }
            }
            if (g1s < 0) break;  // nothing absorbs m units, nor any larger count
            bool any_p = false;
            for (int p = 0; p < S_; ++p) {
                if (st_.avail(p) < m) continue;
                any_p = true;
                if (constrained && p < last.p) continue;
                i64 l = st_.loss(p, m);
                if (constrained && p == last.p) {
                    // Only dropoff slices lexicographically at or after the
                    // class's previous move stay canonical from this pickup.
                    for (int q = 0; q < S_; ++q) {
                        if (q == p || st_.absorb(q) < m) continue;
                        if (q < last.q || (q == last.q && m < last.m)) continue;
                        i64 gl = st_.gain(q, m) + l;
                        if (gl > best_gl) best_gl = gl;
                    }
                } else {
                    i64 g = (p == g1s) ? g2 : g1;
                    if (g == std::numeric_limits<i64>::min()) continue;
                    if (g + l > best_gl) best_gl = g + l;
                }
            }
            if (!any_p) break;  // no station can supply m units, nor more
        }
        if (best_gl == std::numeric_limits<i64>::min()) return;
        i128 cand = val + st_.trip_w - st_.lost_w * best_gl;
        if (cand < best_) best_ = cand;
    }

    // Pass one: establish the optimal value in best_.
    void dfs_value(int depth) {
        ++n_value_;
        if ((n_value_ & (n_value_ - 1)) == 0 && std::getenv("BSR_SOLVE_STATS"))
            std::fprintf(stderr, "[stats] ... %lld nodes, %lld leaf, %lld tails, best %lld\n",
                         (long long)n_value_, (long long)n_leaf_, (long long)n_tail_,
                         (long long)(best_ == std::numeric_limits<i64>::max() ? -1
                                                                              : (i64)best_));
        i128 val = st_.value();
        if (val < best_) best_ = val;
        if (depth == V_) return;
        if (depth == V_ - 1) {
            ++n_leaf_;
            leaf_best(val);
            return;
        }
        if (val + tail_bound(depth, best_ - val) >= best_) return;
        ++n_tail_;
        ++epoch_;

        i64 cap = st_.inst.capacity[depth];
        Triple last = last_for(cap);
        int rem = V_ - depth - 1;
        auto& G = gtop_[depth];
        auto& L = ltop_[depth];
        build_chunk_gains(G, utop_[depth], rem, cmax_[depth + 1]);
        build_unit_losses(L, rem);

        struct Child {
            i128 delta;
            i128 scomp;
            Triple t;
        };
        std::vector<Child> kids;
        // Idle stays canonical only while the class has no active move yet.
        if (!(Triple{0, 0, 0} < last)) {
            i128 ib = idle_completion(G, L, rem, val);
            if (ib < best_) kids.push_back({0, ib, Triple{0, 0, 0}});
        }

        // Value pass prunes dominated moves: dropping units past the point
        // where any scenario still benefits never appears in some optimal
        // plan (rewrite the flows to ship them straight from their pickup
        // station or not at all), so only absorbing dropoffs are generated.
        // Each (q, m) slice shares one completion bound, and within a slice
        // the pickup loss only worsens down the list, so generation stops as
        // soon as a closed slice's candidates fall to the incumbent.
        for (int q = 0; q < S_; ++q) {
            i64 ab = st_.absorb(q);
            i64 mq = std::min(cap, ab);
            if (mq < 1) continue;
            for (i64 m = 1; m <= mq; ++m) {
                const auto& porder = pickups_for(m);
                if (porder.empty()) break;  // nothing supplies m units, nor any more
                i64 g = st_.gain(q, m);
                i128 scomp = slice_completion(G, L, rem, val, g, -st_.phi - g);
                bool open = scomp < best_;
                i128 base = val + st_.trip_w - st_.lost_w * g;
                for (const auto& [l, negp] : porder) {
                    i128 child_value = base - st_.lost_w * l;
                    if (!open && child_value >= best_) break;
                    int p = -negp;
                    if (p == q) continue;
                    Triple t{p, q, m};
                    if (t < last) continue;
                    kids.push_back({child_value - val, scomp, t});
                }
            }
        }

        std::sort(kids.begin(), kids.end(), [](const Child& a, const Child& b) {
            if (a.delta != b.delta) return a.delta < b.delta;
            return a.t < b.t;
        });

        // Re-test each child right before committing: the incumbent tightens
        // as earlier siblings complete.
        for (const Child& k : kids) {
            i128 cb = val + k.delta;
            if (k.scomp < cb) cb = k.scomp;
            if (cb >= best_) continue;
            st_.apply(k.t);
            Triple prev = last_for(cap);
            last_[cap] = k.t;
            dfs_value(depth + 1);
            last_[cap] = prev;
            st_.undo(k.t);
        }
    }

    // Pass two: first assignment in lexicographic order attaining target_.
    bool dfs_lex(int depth) {
        ++n_lex_;
        i128 val = st_.value();
        if (val == target_) {
            bool canonical = true;
            for (int v = depth; v < V_; ++v) {
                const Triple& l = last_for(st_.inst.capacity[v]);
                if (Triple{0, 0, 0} < l) {
                    canonical = false;
                    break;
                }
            }
            if (canonical) {
                for (int v = depth; v < V_; ++v) cur_[v] = Triple{0, 0, 0};
                found_ = true;
                return true;
            }
        }
        if (depth == V_) return false;
        if (val + tail_bound(depth, target_ - val + 1) > target_) return false;

        i64 cap = st_.inst.capacity[depth];
        Triple last = last_for(cap);
        int rem = V_ - depth - 1;
        auto& G = gtop_[depth];
        auto& L = ltop_[depth];
        build_chunk_gains(G, utop_[depth], rem, cmax_[depth + 1]);
        build_unit_losses(L, rem);

        if (!(Triple{0, 0, 0} < last) && idle_completion(G, L, rem, val) <= target_) {
            cur_[depth] = Triple{0, 0, 0};
            Triple prev = last_for(cap);
            last_[cap] = Triple{0, 0, 0};
            bool hit = dfs_lex(depth + 1);
            last_[cap] = prev;
            if (hit) return true;
        }

        for (int p = 0; p < S_; ++p) {
            if (st_.avail(p) < 1) continue;
            for (int q = 0; q < S_; ++q) {
                if (q == p) continue;
                i64 mmax = std::min(cap, st_.avail(p));
                for (i64 m = 1; m <= mmax; ++m) {
                    Triple t{p, q, m};
                    if (t < last) continue;
                    i64 g = st_.gain(q, m);
                    i64 l = st_.loss(p, m);
                    i128 cb = val + st_.trip_w - st_.lost_w * (g + l);
                    if (rem >= 1) {
                        i128 sc = slice_completion(G, L, rem, val, g, -st_.phi - g);
                        if (sc < cb) cb = sc;
                    }
                    if (cb > target_) continue;
                    st_.apply(t);
                    cur_[depth] = t;
                    Triple prev = last_for(cap);
                    last_[cap] = t;
                    bool hit = dfs_lex(depth + 1);
                    last_[cap] = prev;
                    st_.undo(t);
                    if (hit) return true;
                }
            }
        }
        return false;
    }

    SearchState st_;
    int S_ = 0;
    int V_ = 0;
    std::vector<std::vector<i64>> usum_;
    std::vector<i64> cmax_;
    std::map<i64, Triple> last_;
    std::vector<Triple> cur_;
    i128 best_ = std::numeric_limits<i64>::max();
    i128 target_ = 0;
    bool found_ = false;
    long long n_value_ = 0, n_leaf_ = 0, n_tail_ = 0, n_lex_ = 0;

    // scratch buffers for tail_bound
    std::vector<i64> gains_;
    std::vector<i64> losses_;
    std::vector<i64> spread_;
    std::vector<i64> chunk_;
    std::vector<i64> chunku_;
    std::vector<i64> lunit_;
    std::vector<i64> freevals_;
    std::vector<i64> ppre_;
    std::vector<i64> gpre_;
    std::vector<i64> rec_;
    std::vector<i64> exc_;
    std::vector<i64> excpre_;

    // per-depth chunk-gain and unit-loss curves, rebuilt at each node so the
    // levels above keep theirs across the recursion
    std::vector<std::vector<i64>> gtop_;
    std::vector<std::vector<i64>> utop_;
    std::vector<std::vector<i64>> ltop_;

    // per-node pickup list cache, keyed by unit count; see pickups_for
    std::vector<std::vector<std::pair<i64, int>>> pl_;
    std::vector<std::uint64_t> pl_epoch_;
    std::uint64_t epoch_ = 0;
    std::vector<std::pair<i64, int>> porder_;
};

RepositionPlan assemble_plan(const ProblemInstance& inst, const std::vector<Triple>& triples) {
    RepositionPlan plan;
    plan.stations = inst.stations;
    plan.vehicles = inst.vehicles;
    plan.moves.resize(inst.vehicles);
    std::vector<i64> net(inst.stations, 0);
    i64 trips = 0;
    for (int v = 0; v < inst.vehicles; ++v) {
        plan.moves[v] = VehicleMove{v, static_cast<std::int32_t>(triples[v].p),
                                    static_cast<std::int32_t>(triples[v].q), triples[v].m};
        if (triples[v].m > 0) {
            net[triples[v].p] -= triples[v].m;
            net[triples[v].q] += triples[v].m;
            ++trips;
        }
    }
    plan.lost = closed_form_lost(inst, net);
    i64 sum_lost = 0;
    for (const auto& row : plan.lost)
        for (i64 l : row) sum_lost += l;
    i128 trip_w = static_cast<i128>(inst.scenarios()) * inst.alpha.num * inst.beta.den;
    i128 lost_w = static_cast<i128>(inst.beta.num) * inst.alpha.den;
    i128 scaled = trip_w * trips - lost_w * sum_lost;
    reduce_objective(scaled, inst.alpha.den * inst.beta.den, &plan.objective_num, &plan.objective_den);
    return plan;
}

}  // namespace

Rational Rational::of(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::invalid_argument("rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    i64 g = gcd_i64(n, d);
    if (g == 0) g = 1;
    Rational r;
    r.num = n / g;
    r.den = d / g;
    return r;
}

Rational Rational::parse(const std::string& s) {
    std::string t;
    for (char ch : s)
        if (!std::isspace(static_cast<unsigned char>(ch))) t.push_back(ch);
    if (t.empty()) throw std::invalid_argument("empty rational");

    auto parse_int = [](const std::string& w) -> i64 {
        if (w.empty() || w.size() > 18) throw std::invalid_argument("bad rational component: '" + w + "'");
        std::size_t i = 0;
        bool neg = false;
        if (w[0] == '+' || w[0] == '-') {
            neg = w[0] == '-';
            i = 1;
        }
        if (i == w.size()) throw std::invalid_argument("bad rational component: '" + w + "'");
        i64 v = 0;
        for (; i < w.size(); ++i) {
            if (w[i] < '0' || w[i] > '9') throw std::invalid_argument("bad rational component: '" + w + "'");
            v = v * 10 + (w[i] - '0');
        }
        return neg ? -v : v;
    };

    std::size_t slash = t.find('/');
    if (slash != std::string::npos) {
        i64 n = parse_int(t.substr(0, slash));
        i64 d = parse_int(t.substr(slash + 1));
        return of(n, d);
    }
    std::size_t dot = t.find('.');
    if (dot != std::string::npos) {
        std::string whole = t.substr(0, dot);
        std::string frac = t.substr(dot + 1);
        if (frac.empty() || frac.size() > 12)
            throw std::invalid_argument("bad decimal rational: '" + s + "'");
        bool neg = !whole.empty() && whole[0] == '-';
        if (whole.empty() || whole == "-" || whole == "+") whole += "0";
        i64 w = parse_int(whole);
        i64 den = 1;
        i64 fr = 0;
        for (char ch : frac) {
            if (ch < '0' || ch > '9') throw std::invalid_argument("bad decimal rational: '" + s + "'");
            fr = fr * 10 + (ch - '0');
            den *= 10;
        }
        i64 n = w * den + (neg ? -fr : fr);
        return of(n, den);
    }
    return of(parse_int(t), 1);
}

std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

void ProblemInstance::validate() const {
    if (stations < 1) throw std::invalid_argument("instance needs at least one station");
    if (vehicles < 0 || vehicles > 100000) throw std::invalid_argument("vehicle count out of range");
    if (static_cast<int>(capacity.size()) != vehicles)
        throw std::invalid_argument("capacity list must have one entry per vehicle");
    for (i64 c : capacity)
        if (c < 0 || c > 1000000) throw std::invalid_argument("vehicle capacity out of range");
    if (static_cast<int>(bikes.size()) != stations)
        throw std::invalid_argument("bikes list must have one entry per station");
    for (i64 d : bikes)
        if (d < 0 || d > 1000000000000LL) throw std::invalid_argument("station inventory out of range");
    if (net_flow.empty() || net_flow.size() > 100000)
        throw std::invalid_argument("scenario count out of range");
    for (const auto& row : net_flow) {
        if (static_cast<int>(row.size()) != stations)
            throw std::invalid_argument("each scenario needs one net flow per station");
        for (i64 v : row)
            if (v < -1000000000000LL || v > 1000000000000LL)
                throw std::invalid_argument("scenario net flow out of range");
    }
    auto check_cost = [](const Rational& c, const char* name) {
        if (c.den < 1 || c.den > 1000000000 || c.num < 0 || c.num > 1000000000)
            throw std::invalid_argument(std::string(name) + " must be a non-negative rational within 1e9");
    };
    check_cost(alpha, "alpha");
    check_cost(beta, "beta");
    if (pickup_visits != 1 || dropoff_visits != 1)
        throw std::invalid_argument("only single pickup and dropoff visits are supported");
}

std::int64_t RepositionPlan::trips() const {
    i64 n = 0;
    for (const auto& mv : moves)
        if (mv.count > 0) ++n;
    return n;
}

std::vector<std::int64_t> RepositionPlan::net_transfer() const {
    std::vector<i64> net(stations, 0);
    for (const auto& mv : moves) {
        if (mv.count == 0) continue;
        net[mv.pickup] -= mv.count;
        net[mv.dropoff] += mv.count;
    }
    return net;
}

std::vector<std::vector<std::int64_t>> closed_form_lost(
    const ProblemInstance& inst, const std::vector<std::int64_t>& net_transfer) {
    if (static_cast<int>(net_transfer.size()) != inst.stations)
        throw std::invalid_argument("net transfer size does not match station count");
    std::vector<std::vector<i64>> lost(inst.net_flow.size(), std::vector<i64>(inst.stations, 0));
    for (std::size_t k = 0; k < inst.net_flow.size(); ++k)
        for (int s = 0; s < inst.stations; ++s)
            lost[k][s] = lost_demand(inst.bikes[s], inst.net_flow[k][s], net_transfer[s]);
    return lost;
}

RepositionPlan solve(const ProblemInstance& inst) {
    inst.validate();
    BranchAndBound bb(inst);
    std::vector<Triple> triples = bb.run();
    return assemble_plan(inst, triples);
}

RepositionPlan solve_exhaustive(const ProblemInstance& inst) {
    inst.validate();
    double space = 1.0;
    for (i64 c : inst.capacity) {
        space *= static_cast<double>(inst.stations) * inst.stations * (c + 1);
        if (space > 1e7)
            throw std::invalid_argument("assignment space too large for exhaustive enumeration");
    }

    SearchState st(inst);
    int S = st.S, V = st.V;
    std::vector<Triple> cur(V), best_assign;
    i128 best = std::numeric_limits<i128>::max();

    // Nested ascending enumeration; strict improvement keeps the
    // lexicographically first optimum.
    auto rec = [&](auto&& self, int v) -> void {
        if (v == V) {
            i128 val = st.value();
            if (val < best) {
                best = val;
                best_assign = cur;
            }
            return;
        }
        i64 cap = inst.capacity[v];
        for (int p = 0; p < S; ++p) {
            for (int q = 0; q < S; ++q) {
                i64 mmax = std::min(cap, st.avail(p));
                for (i64 m = 0; m <= mmax; ++m) {
                    Triple t{p, q, m};
                    st.apply(t);
                    cur[v] = t;
                    self(self, v + 1);
                    st.undo(t);
                }
            }
        }
    };
    rec(rec, 0);
    return assemble_plan(inst, best_assign);
}

Evaluation evaluate(const ProblemInstance& inst, const RepositionPlan& plan) {
    inst.validate();
    Evaluation ev;
    auto flag = [&](const std::string& c, const std::string& d) {
        ev.violations.push_back({c, d});
    };

    if (plan.stations != inst.stations || plan.vehicles != inst.vehicles)
        flag("shape", "plan dimensions do not match the instance");
    if (static_cast<int>(plan.moves.size()) != inst.vehicles)
        flag("shape", "plan needs exactly one move entry per vehicle");

    std::vector<i64> net(inst.stations, 0);
    std::vector<i64> picked(inst.stations, 0);
    i64 trips = 0;
    for (std::size_t i = 0; i < plan.moves.size(); ++i) {
        const VehicleMove& mv = plan.moves[i];
        if (mv.vehicle != static_cast<std::int32_t>(i))
            flag("shape", "move " + std::to_string(i) + " is not listed in vehicle order");
        if (mv.pickup < 0 || mv.pickup >= inst.stations || mv.dropoff < 0 ||
            mv.dropoff >= inst.stations) {
            flag("station-range", "vehicle " + std::to_string(i) + " visits an unknown station");
            continue;
        }
        if (mv.count < 0 ||
            (i < inst.capacity.size() && mv.count > inst.capacity[i]))
            flag("vehicle-capacity", "vehicle " + std::to_string(i) + " moves " +
                                         std::to_string(mv.count) + " bikes");
        if (mv.count > 0) {
            net[mv.pickup] -= mv.count;
            net[mv.dropoff] += mv.count;
            picked[mv.pickup] += mv.count;
            ++trips;
        }
    }
    for (int s = 0; s < inst.stations; ++s) {
        if (picked[s] > inst.bikes[s])
            flag("pickup-inventory", "station " + std::to_string(s) + " gives up " +
                                         std::to_string(picked[s]) + " of " +
                                         std::to_string(inst.bikes[s]) + " bikes");
    }

    i64 sum_lost = 0;
    if (static_cast<int>(plan.lost.size()) != inst.scenarios()) {
        flag("lost-shape", "lost table needs one row per scenario");
    } else {
        for (int k = 0; k < inst.scenarios(); ++k) {
            if (static_cast<int>(plan.lost[k].size()) != inst.stations) {
                flag("lost-shape", "lost row " + std::to_string(k) + " has the wrong width");
                continue;
            }
            for (int s = 0; s < inst.stations; ++s) {
                i64 l = plan.lost[k][s];
                i64 cf = lost_demand(inst.bikes[s], inst.net_flow[k][s], net[s]);
                if (l > 0)
                    flag("lost-nonpositive", "lost[" + std::to_string(k) + "][" + std::to_string(s) +
                                                 "] is positive");
                else if (l > cf)
                    flag("lost-upper", "lost[" + std::to_string(k) + "][" + std::to_string(s) +
                                           "] exceeds " + std::to_string(cf));
                sum_lost += l;
            }
        }
    }

    i128 trip_w = static_cast<i128>(inst.scenarios()) * inst.alpha.num * inst.beta.den;
    i128 lost_w = static_cast<i128>(inst.beta.num) * inst.alpha.den;
    reduce_objective(trip_w * trips - lost_w * sum_lost, inst.alpha.den * inst.beta.den,
                     &ev.objective_num, &ev.objective_den);
    ev.trips = trips;
    ev.feasible = ev.violations.empty();
    return ev;
}

namespace {

using nlohmann::json;

json rational_json(const Rational& r) { return r.str(); }

Rational rational_from_json(const json& j, const char* name) {
    try {
        if (j.is_string()) return Rational::parse(j.get<std::string>());
        if (j.is_number_integer()) return Rational::of(j.get<i64>());
        if (j.is_number_float()) {
            std::ostringstream os;
            os.precision(12);
            os << std::fixed << j.get<double>();
            return Rational::parse(os.str());
        }
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string(name) + ": " + e.what());
    }
    throw std::invalid_argument(std::string(name) + " must be a rational like \"3/10\"");
}

void check_format(const json& j, const char* expect) {
    if (!j.is_object() || !j.contains("format") || j["format"] != expect)
        throw std::invalid_argument(std::string("expected a ") + expect + " document");
}

}  // namespace

std::string instance_to_json(const ProblemInstance& inst) {
    json j;
    j["format"] = "bsr-instance";
    j["version"] = 1;
    j["stations"] = inst.stations;
    j["vehicles"] = inst.vehicles;
    j["capacity"] = inst.capacity;
    j["bikes"] = inst.bikes;
    j["net_flow"] = inst.net_flow;
    j["alpha"] = rational_json(inst.alpha);
    j["beta"] = rational_json(inst.beta);
    j["pickup_visits"] = inst.pickup_visits;
    j["dropoff_visits"] = inst.dropoff_visits;
    return j.dump(2) + "\n";
}

ProblemInstance instance_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("instance is not valid JSON: ") + e.what());
    }
    check_format(j, "bsr-instance");
    ProblemInstance inst;
    try {
        inst.stations = j.at("stations").get<int>();
        inst.vehicles = j.at("vehicles").get<int>();
        inst.capacity = j.at("capacity").get<std::vector<i64>>();
        inst.bikes = j.at("bikes").get<std::vector<i64>>();
        inst.net_flow = j.at("net_flow").get<std::vector<std::vector<i64>>>();
        inst.alpha = rational_from_json(j.at("alpha"), "alpha");
        inst.beta = rational_from_json(j.at("beta"), "beta");
        if (j.contains("pickup_visits")) inst.pickup_visits = j["pickup_visits"].get<int>();
        if (j.contains("dropoff_visits")) inst.dropoff_visits = j["dropoff_visits"].get<int>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed instance: ") + e.what());
    }
    inst.validate();
    return inst;
}

std::string plan_to_json(const RepositionPlan& plan) {
    json j;
    j["format"] = "bsr-plan";
    j["version"] = 1;
    j["stations"] = plan.stations;
    j["vehicles"] = plan.vehicles;
    json moves = json::array();
    for (const auto& mv : plan.moves) {
        moves.push_back({{"vehicle", mv.vehicle},
                         {"pickup", mv.pickup},
                         {"dropoff", mv.dropoff},
                         {"count", mv.count}});
    }
    j["moves"] = moves;
    j["lost"] = plan.lost;
    j["objective_num"] = plan.objective_num;
    j["objective_den"] = plan.objective_den;
    j["objective"] = plan.objective();
    j["trips"] = plan.trips();
    return j.dump(2) + "\n";
}

RepositionPlan plan_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("plan is not valid JSON: ") + e.what());
    }
    check_format(j, "bsr-plan");
    RepositionPlan plan;
    try {
        plan.stations = j.at("stations").get<int>();
        plan.vehicles = j.at("vehicles").get<int>();
        for (const auto& mj : j.at("moves")) {
            VehicleMove mv;
            mv.vehicle = mj.at("vehicle").get<std::int32_t>();
            mv.pickup = mj.at("pickup").get<std::int32_t>();
            mv.dropoff = mj.at("dropoff").get<std::int32_t>();
            mv.count = mj.at("count").get<i64>();
            plan.moves.push_back(mv);
        }
        plan.lost = j.at("lost").get<std::vector<std::vector<i64>>>();
        plan.objective_num = j.at("objective_num").get<i64>();
        plan.objective_den = j.at("objective_den").get<i64>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed plan: ") + e.what());
    }
    return plan;
}

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out) throw std::runtime_error("short write to " + path);
}

}  // namespace

void write_instance_file(const std::string& path, const ProblemInstance& inst) {
    spit(path, instance_to_json(inst));
}

ProblemInstance read_instance_file(const std::string& path) {
    return instance_from_json(slurp(path));
}

void write_plan_file(const std::string& path, const RepositionPlan& plan) {
    spit(path, plan_to_json(plan));
}

RepositionPlan read_plan_file(const std::string& path) {
    return plan_from_json(slurp(path));
}

}  // namespace mip
}  // namespace bsr
