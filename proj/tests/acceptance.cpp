// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "support.hpp"

using namespace sg2;
namespace t = sg2::testing;

namespace {

struct outcome {
    bool ok = true;
    std::string detail;
    double limit_s = 0; // 0 means untimed

    void check(bool cond, const std::string& what) {
        if (!cond && ok) detail = what;
        ok = ok && cond;
    }
};

std::string str(long x) { return std::to_string(x); }

std::vector<std::pair<long, long>> coprime_pairs(long lo, long hi) {
    std::vector<std::pair<long, long>> out;
    for (long a = lo; a <= hi; ++a)
        for (long b = a + 1; b <= hi; ++b)
            if (std::gcd(a, b) == 1) out.push_back({a, b});
    return out;
}

std::vector<std::pair<long, long>> distinct_pairs(t::rng& r, std::size_t count, long lo, long hi) {
    std::set<std::pair<long, long>> seen;
    std::vector<std::pair<long, long>> out;
    while (out.size() < count) {
        auto p = t::coprime_pair(r, lo, hi);
        if (seen.insert(p).second) out.push_back(p);
    }
    return out;
}

outcome formula_oracle() {
    outcome o{true, "", 5};
    for (auto [a, b] : coprime_pairs(2, 40)) {
        semigroup64 s(a, b);
        auto sc = t::scan(a, b);
        o.check(s.frobenius() == sc.frobenius && s.conductor() == sc.conductor && s.genus() == sc.genus,
                "(" + str(a) + "," + str(b) + ")");
    }
    return o;
}

outcome unique_decomposition() {
    outcome o{true, "", 10};
    for (auto [a, b] : coprime_pairs(2, 15)) {
        semigroup64 s(a, b);
        for (long x = 0; x <= 3 * a * b; ++x) {
            if (!t::member_by_search(a, b, x)) continue;
            auto all = t::all_decompositions(a, b, x);
            auto d = s.decompose(x);
            o.check(all.size() == 1 && std::make_tuple(d.m, d.m_a, d.m_b) == all[0],
                    "(" + str(a) + "," + str(b) + ") x=" + str(x));
        }
    }
    t::rng r(2);
    for (auto [a, b] : distinct_pairs(r, 25, 2, 500)) {
        semigroup64 s(a, b);
        for (int i = 0; i < 2000; ++i) {
            long x = r.uniform(0, 3 * a * b);
            if (!s.contains(x)) {
                o.check(!t::member_by_search(a, b, x), "missed member " + str(x));
                continue;
            }
            auto d = s.decompose(x);
            o.check(d.m >= 0 && d.m_a >= 0 && d.m_a < b && d.m_b >= 0 && d.m_b < a &&
                        d.m * a * b + d.m_a * a + d.m_b * b == x,
                    "(" + str(a) + "," + str(b) + ") x=" + str(x));
        }
    }
    return o;
}

outcome fo_concordance() {
    outcome o;
    using model64 = finite_model<std::int64_t>;
    const auto ma = t::fo_ma(), mb = t::fo_mb(), cp = t::fo_conductor_property();
    std::vector<std::vector<formula_ptr>> res(13);
    for (long n = 1; n <= 12; ++n)
        for (long r = 0; r < n; ++r) res[n].push_back(t::fo_residue(n, r));
    t::rng rg(3);
    for (auto [a, b] : distinct_pairs(rg, 20, 2, 12)) {
        semigroup64 s(a, b);
        model64 m(s);
        const std::string tag = "(" + str(a) + "," + str(b) + ")";
        std::int64_t least = -1;
        for (std::int64_t x = 0; x <= 3 * s.ab(); ++x) {
            if (!s.contains(x)) continue;
            std::vector<std::pair<std::string, std::int64_t>> env{{"x", x}};
            o.check(eval_formula(m, *ma, env).value == s.is_ma(x), tag + " Ma x=" + str(x));
            o.check(eval_formula(m, *mb, env).value == s.is_mb(x), tag + " Mb x=" + str(x));
            bool p = eval_formula(m, *cp, {{"x", x}, {"V", 2 * s.ab()}}).value;
            o.check(p == (x >= s.conductor()), tag + " conductor property x=" + str(x));
            if (p && least < 0) least = x;
            for (long n = 1; n <= 12; ++n)
                for (long r = 0; r < n; ++r)
                    o.check(eval_formula(m, *res[n][r], env).value == (x % n == r),
                            tag + " R " + str(n) + " " + str(r) + " x=" + str(x));
        }
        o.check(least == s.conductor(), tag + " least element with the property is not c");
    }
    return o;
}

outcome axiom_suite() {
    outcome o{true, "", 60};
    axiom_config cfg;
    cfg.caps = {8, 8, 8};
    t::rng r(4);
    for (auto [a, b] : distinct_pairs(r, 50, 2, 200)) {
        auto rep = check_axioms(finite_model<std::int64_t>(semigroup64(a, b)), cfg);
        std::string first;
        for (const auto* f : rep.failures(theory::ons)) first = f->name;
        o.check(rep.all_passed(theory::ons), "(" + str(a) + "," + str(b) + ") fails " + first);
    }
    semigroup64 s(5, 12);
    const std::pair<constant_kind, std::int64_t> mutations[] = {
        {constant_kind::a, 1},  {constant_kind::b, -1},     {constant_kind::ab, 1},
        {constant_kind::c, -1}, {constant_kind::alpha1, 1}, {constant_kind::beta1, -1}};
    for (auto [k, delta] : mutations) {
        auto table = constant_table<std::int64_t>::canonical(s);
        table[k] += delta;
        auto rep = check_axioms(finite_model<std::int64_t>(s, table), cfg);
        o.check(!rep.all_passed(theory::ons), "mutation of constant " + str(static_cast<long>(k)) + " passed");
    }
    return o;
}

outcome axiom12() {
    outcome o{true, "", 30};
    for (auto [a, b] : coprime_pairs(2, 30)) {
        semigroup64 s(a, b);
        for (long n = 1; n <= 6; ++n)
            for (long beta = 0; beta <= a * b; beta += b)
                for (long alpha = 0; alpha <= beta; alpha += a) {
                    if ((beta - alpha) % n) continue;
                    auto w = s.axiom12_witness(beta, alpha, n);
                    const std::string tag = "(" + str(a) + "," + str(b) + ") n=" + str(n) + " beta=" + str(beta) +
                                            " alpha=" + str(alpha);
                    if (!w) {
                        o.check(false, tag + " no witness");
                        continue;
                    }
                    auto [bp, ap] = *w;
                    bool valid = bp >= 0 && bp <= a * b && bp % b == 0 && ap >= 0 && ap <= a * b && ap % a == 0 &&
                                 beta - alpha == n * (bp - ap);
                    o.check(valid, tag);
                    // greatest multiple of a not above bp
                    if (beta - alpha < n * a) o.check(ap == (bp == a * b ? bp : bp / a * a), tag + " alpha' != alpha(beta')");
                }
    }
    return o;
}

outcome beta_k_identity() {
    outcome o;
    t::rng r(6);
    for (auto [a, b] : distinct_pairs(r, 30, 2, 60)) {
        semigroup64 s(a, b);
        for (long k = 1; k < b; ++k) {
            // least multiple of b sitting k above a multiple of a
            long want = -1;
            for (long j = 0; j <= a && want < 0; ++j)
                if (j * b >= k && (j * b - k) % a == 0) want = j * b;
            auto bk = s.beta_k(k);
            const std::string tag = "(" + str(a) + "," + str(b) + ") k=" + str(k);
            o.check(bk.beta_k == want && bk.alpha_k == want - k, tag + " beta_k");
            o.check(bk.beta_k == k * s.beta1() - bk.n_k * s.ab() && bk.n_k >= 0 && bk.n_k < k, tag + " identity");
        }
    }
    return o;
}

outcome solver_equivalence() {
    outcome o;
    t::rng r(7);
    for (int i = 0; i < 1000; ++i) {
        auto [a, b] = t::coprime_pair(r, 2, 300);
        semigroup64 s(a, b);
        auto q = t::finite_system(r, a, b);
        o.check(solve_direct(s, q) == solve_via_lambda(s, q),
                "(" + str(a) + "," + str(b) + ") " + to_json(q).dump());
    }
    return o;
}

outcome residue_algebra() {
    outcome o;
    t::rng rg(8);
    for (auto [a, b] : distinct_pairs(rg, 10, 2, 14)) {
        semigroup64 s(a, b);
        const long ab = a * b, top = 6 * ab;
        const std::string tag = "(" + str(a) + "," + str(b) + ")";
        // residues through the defining sentence, r[n][x] or -1 for gaps
        std::vector<std::vector<long>> def(9, std::vector<long>(top + 1, -1));
        for (long x = 0; x <= top; ++x) {
            if (!t::member_by_search(a, b, x)) continue;
            for (long n = 1; n <= 8; ++n) {
                int hits = 0;
                for (long r = 0; r < n; ++r)
                    if (s.residue_by_definition(x, n, r)) {
                        def[n][x] = r;
                        ++hits;
                    }
                o.check(hits == 1 && s.residue(x, n, def[n][x]), tag + " x=" + str(x) + " n=" + str(n));
            }
        }
        std::vector<long> members;
        for (long x = 0; x <= 3 * ab; ++x)
            if (def[1][x] >= 0) members.push_back(x);
        for (long x : members)
            for (long y : members)
                for (long n = 1; n <= 8; ++n)
                    o.check(def[n][x + y] == (def[n][x] + def[n][y]) % n, tag + " additivity");
        for (long x : members)
            for (long n = 1; n <= 8; ++n)
                for (long m = 1; m <= 8; ++m) {
                    long l = std::lcm(n, m);
                    // the lcm residue is the unique CRT solution of the pair
                    long crt = -1;
                    for (long r = 0; r < l; ++r)
                        if (r % n == def[n][x] && r % m == def[m][x]) crt = r;
                    o.check(s.residue(x, l, crt), tag + " CRT");
                }
        // index residues on M_a and M_b; the index is found by counting steps
        for (auto [gen, count] : {std::pair<long, long>{a, b}, std::pair<long, long>{b, a}}) {
            for (long i = 0; i <= count; ++i)
                for (long j = 0; i + j <= count; ++j)
                    for (long n = 1; n <= 8; ++n) {
                        long x = i * gen, y = j * gen;
                        auto pred = [&](long v, long nn, long r) {
                            return gen == a ? s.residue_a(v, nn, r) : s.residue_b(v, nn, r);
                        };
                        o.check(pred(x, n, i % n) && pred(y, n, j % n) && pred(x + y, n, (i + j) % n),
                                tag + " index additivity");
                        for (long m = 1; m <= 8; ++m) {
                            long l = std::lcm(n, m);
                            o.check(pred(x, l, i % l) == (pred(x, n, i % n) && pred(x, m, i % m)), tag + " index CRT");
                        }
                    }
        }
    }
    return o;
}

std::uint64_t fnv(std::uint64_t h, const std::string& s) {
    for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
    return h;
}

struct sweep_summary {
    coverage_stats stats;
    std::uint64_t hash = 1469598103934665603ULL;
    double seconds = 0;
};

sweep_summary run_sweep(std::int64_t n, unsigned threads, std::int64_t mod = 0, std::int64_t ra = 0, std::int64_t rb = 0) {
    sweep_config cfg;
    cfg.max_n = n;
    cfg.threads = threads;
    if (mod) {
        cfg.modulus = mod;
        cfg.res_a = ra;
        cfg.res_b = rb;
    }
    sweep_summary out;
    coverage_accumulator acc(20);
    auto t0 = std::chrono::steady_clock::now();
    sweep(cfg, true, [&](const sweep_block& blk) {
        acc.add(blk);
        out.hash = fnv(out.hash, blk.csv);
    });
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.stats = acc.result();
    return out;
}

// coprime pairs 2 <= a < b <= n, by Euler's totient
std::uint64_t pair_count(std::int64_t n) {
    std::vector<std::int64_t> phi(n + 1);
    for (std::int64_t i = 0; i <= n; ++i) phi[i] = i;
    for (std::int64_t p = 2; p <= n; ++p)
        if (phi[p] == p)
            for (std::int64_t k = p; k <= n; k += p) phi[k] -= phi[k] / p;
    std::uint64_t total = 0;
    for (std::int64_t b = 3; b <= n; ++b) total += phi[b] - 1;
    return total;
}

outcome figure_reproduction() {
    outcome o;
    auto s200 = run_sweep(200, 1), s1000 = run_sweep(1000, 1);
    auto s5000 = run_sweep(5000, 1);
    auto s5000x8 = run_sweep(5000, 8);
    for (auto [n, s] : {std::pair<long, const sweep_summary*>{200, &s200}, {1000, &s1000}, {5000, &s5000}})
        o.check(s->stats.records == pair_count(n), "record count at N=" + str(n));
    o.check(s200.stats.coverage <= s1000.stats.coverage && s1000.stats.coverage <= s5000.stats.coverage,
            "coverage decreases with N");
    // goldens
    o.check(s200.stats.coverage == rational(369, 400), "N=200 coverage golden");
    o.check(s1000.stats.coverage == 1 && s5000.stats.coverage == 1, "coverage golden at N=1000/5000");
    o.check(s5000.stats.q1_below_half_fraction == rational(2330337, 3797729), "N=5000 q1 fraction golden");
    o.check(s5000.stats.q2_below_half_fraction == rational(1, 2), "N=5000 q2 fraction golden");
    auto f = run_sweep(5000, 1, 15, 4, 7);
    o.check(f.stats.records == 39663, "filtered record count golden");
    o.check(f.stats.coverage == 1, "filtered coverage golden");
    o.check(f.stats.q1_below_half_fraction == rational(24259, 39663), "filtered q1 fraction golden");
    o.check(s5000.hash == s5000x8.hash, "output differs between 1 and 8 workers");
    o.check(s5000.seconds < 120, "single-threaded N=5000 took " + std::to_string(s5000.seconds) + " s");
    o.check(s5000x8.seconds < 30, "8-worker N=5000 took " + std::to_string(s5000x8.seconds) + " s");
    std::ostringstream d;
    d << "N=5000: " << s5000.seconds << " s (1 worker), " << s5000x8.seconds << " s (8 workers)";
    if (o.ok) o.detail = d.str();
    return o;
}

outcome limit_soundness() {
    outcome o{true, "", 120};
    auto catalog = load_catalog(t::catalog_path());
    o.check(catalog.size() == 30, "catalog size");
    std::set<long> ms;
    std::set<q0_kind> kinds;
    for (const auto& name : t::preset_names()) {
        family_spec spec;
        spec.inv = load_invariants(t::preset_path(name));
        ms.insert(spec.inv.m);
        kinds.insert(spec.inv.kind);
        auto fam = generate_family(spec);
        bool big = fam.size() == 10;
        for (const auto& s : fam) big = big && s.a() >= 10000;
        o.check(big, name + " family");
        auto rep = check_agreement(spec.inv, fam, catalog);
        o.check(rep.skipped() == 0 && rep.checked() == 300 && rep.all_agree(),
                name + ": " + str(rep.mismatches()) + " mismatches, " + str(rep.skipped()) + " skipped");
    }
    o.check(ms == std::set<long>{1, 2, 3} && kinds.size() == 2, "presets do not cover both branches and m=1..3");
    t::rng r(2024);
    const auto& names = t::preset_names();
    for (int i = 0; i < 200; ++i) {
        auto inv = load_invariants(t::preset_path(names[i % names.size()]));
        auto sys = t::symbolic_system(r, inv);
        auto d = decide_reduced_system(inv, sys, {std::nullopt, 2});
        o.check(d.witnesses_agree && (d.decided_without_witness || d.witnesses.size() == 2),
                "system " + str(i) + " " + to_json(sys).dump());
    }
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<outcome()>>> criteria{
        {"1 formula oracle", formula_oracle},
        {"2 unique decomposition", unique_decomposition},
        {"3 first-order concordance", fo_concordance},
        {"4 axiom suite", axiom_suite},
        {"5 axiom-12 constructivity", axiom12},
        {"6 beta_k identity", beta_k_identity},
        {"7 solver equivalence", solver_equivalence},
        {"8 residue algebra", residue_algebra},
        {"9 sweep figures", figure_reproduction},
        {"10 limit-model soundness", limit_soundness},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (o.limit_s > 0 && secs >= o.limit_s) {
            o.ok = false;
            o.detail = "took " + std::to_string(secs) + " s, limit " + std::to_string(o.limit_s) + " s";
        }
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.2f s", secs);
        std::cout << (o.ok ? "PASS " : "FAIL ") << name << " (" << buf << ")";
        if (!o.detail.empty()) std::cout << ": " << o.detail;
        std::cout << std::endl;
        failed += !o.ok;
    }
    std::cout << (failed ? "FAILED " + std::to_string(failed) + " of 10" : std::string("all 10 criteria passed")) << std::endl;
    return failed ? 1 : 0;
}
