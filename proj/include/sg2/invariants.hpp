#pragma once

// Ratio invariants of a finite semigroup and the coprime-pair sweep behind
// the (q1, q2) scatter plots.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "sg2/error.hpp"
#include "sg2/integer.hpp"
#include "sg2/semigroup.hpp"

namespace sg2 {

/// (x_hi - x_lo) / (y_hi - y_lo). For elements of one finite semigroup this is
/// the supremum of the p/q with p*y_hi + q*x_lo <= q*x_hi + p*y_lo.
template <integer_like Int>
rational ratio(const Int& x_hi, const Int& x_lo, const Int& y_hi, const Int& y_lo) {
    if (!(y_lo < y_hi)) fail(error_kind::degenerate_denominator, "ratio needs y_hi > y_lo");
    if (x_hi < x_lo) fail(error_kind::out_of_domain, "ratio needs x_hi >= x_lo");
    return rational(widen(Int(x_hi - x_lo)), widen(Int(y_hi - y_lo)));
}

struct ratio_triple {
    rational q0, q1, q2;
    big_int l, k;
};

template <integer_like Int>
ratio_triple triple(const basic_semigroup<Int>& s) {
    return {ratio(s.a(), Int(0), s.b(), Int(0)), ratio(s.b(), s.alpha(s.b()), s.a(), Int(0)),
            ratio(s.beta1(), Int(0), s.ab(), Int(0)), widen(s.l()), widen(s.k_inv())};
}

// ---------------------------------------------------------------------------
// sweep

struct sweep_config {
    std::int64_t max_n = 0;
    std::optional<std::int64_t> modulus, res_a, res_b;
    unsigned threads = 1;
};

/// One coprime pair a < b; q1 = l/a and q2 = k/a are already in lowest terms
/// because l and k are units mod a.
struct sweep_record {
    std::int64_t a, b, l, k;
};

inline void validate(const sweep_config& cfg) {
    if (cfg.max_n < 3) fail(error_kind::config_rejected, "max must be at least 3");
    if (cfg.max_n > 3'000'000'000LL) fail(error_kind::config_rejected, "max too large");
    if (cfg.res_a.has_value() != cfg.modulus.has_value() || cfg.res_b.has_value() != cfg.modulus.has_value())
        fail(error_kind::config_rejected, "modulus, res_a and res_b go together");
    if (cfg.modulus) {
        const auto m = *cfg.modulus;
        if (m < 1) fail(error_kind::config_rejected, "modulus must be positive");
        if (*cfg.res_a < 0 || *cfg.res_a >= m || *cfg.res_b < 0 || *cfg.res_b >= m)
            fail(error_kind::config_rejected, "residues must lie in [0, modulus)");
        // a common prime of both residues and the modulus divides every a and b
        if (std::gcd(std::gcd(*cfg.res_a, *cfg.res_b), m) != 1)
            fail(error_kind::config_rejected, "residues share a factor with the modulus, so no coprime pair exists");
    }
}

namespace detail {

inline void append_int(std::string& out, std::int64_t v) {
    char buf[24];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, r.ptr);
}

inline void append_float12(std::string& out, double v) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
    out.append(buf, r.ptr);
}

/// Inverses of every unit mod a (0 for non-units).
inline void unit_inverses(std::int64_t a, std::vector<std::int64_t>& inv) {
    inv.assign(static_cast<std::size_t>(a), 0);
    if (a == 1) return;
    for (std::int64_t l = 1; l < a; ++l) {
        if (inv[l] != 0) continue;
        std::int64_t r0 = a, r1 = l, t0 = 0, t1 = 1;
        while (r1 != 0) {
            std::int64_t q = r0 / r1;
            std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
            std::tie(t0, t1) = std::make_pair(t1, t0 - q * t1);
        }
        if (r0 != 1) continue;
        std::int64_t k = t0 < 0 ? t0 + a : t0;
        inv[l] = k;
        inv[k] = l;
    }
}

} // namespace detail

inline constexpr int sweep_format_version = 1;
inline constexpr const char* sweep_csv_header = "a,b,l,k,q1_num,q1_den,q2_num,q2_den,q1,q2";

inline void append_csv_row(std::string& out, const sweep_record& r) {
    using detail::append_int;
    append_int(out, r.a);
    out += ',';
    append_int(out, r.b);
    out += ',';
    append_int(out, r.l);
    out += ',';
    append_int(out, r.k);
    out += ',';
    append_int(out, r.l);
    out += ',';
    append_int(out, r.a);
    out += ',';
    append_int(out, r.k);
    out += ',';
    append_int(out, r.a);
    out += ',';
    detail::append_float12(out, static_cast<double>(r.l) / static_cast<double>(r.a));
    out += ',';
    detail::append_float12(out, static_cast<double>(r.k) / static_cast<double>(r.a));
    out += '\n';
}

/// All records for one value of a, in increasing b.
struct sweep_block {
    std::int64_t a = 0;
    std::vector<sweep_record> records;
    std::string csv; // filled when the sweep was asked to format rows
};

/// Records for a single a. The coprimality test is a lookup in the table of
/// units mod a, so each b costs one reduction.
inline void sweep_one(const sweep_config& cfg, std::int64_t a, std::vector<std::int64_t>& inv, sweep_block& out) {
    out.a = a;
    out.records.clear();
    out.csv.clear();
    if (cfg.modulus && a % *cfg.modulus != *cfg.res_a) return;
    detail::unit_inverses(a, inv);
    std::int64_t first = a + 1, step = 1;
    if (cfg.modulus) {
        const auto m = *cfg.modulus;
        first += ((*cfg.res_b - first) % m + m) % m;
        step = m;
    }
    for (std::int64_t b = first; b <= cfg.max_n; b += step) {
        std::int64_t l = b % a;
        if (a == 1) continue;
        std::int64_t k = inv[l];
        if (k == 0) continue;
        out.records.push_back({a, b, l, k});
    }
}

/// Runs the sweep and hands each block to `sink` on the calling thread in
/// increasing a, whatever the number of workers. Blocks are reused, so the
/// sink must copy anything it keeps.
inline void sweep(const sweep_config& cfg, bool format_csv, const std::function<void(const sweep_block&)>& sink) {
    validate(cfg);
    const std::int64_t first_a = 2, last_a = cfg.max_n - 1;
    const std::int64_t count = last_a - first_a + 1;
    const unsigned workers = std::max(1u, cfg.threads);

    auto fill = [&](std::int64_t a, std::vector<std::int64_t>& inv, sweep_block& blk) {
        sweep_one(cfg, a, inv, blk);
        if (format_csv) {
            blk.csv.reserve(blk.records.size() * 48);
            for (const auto& r : blk.records) append_csv_row(blk.csv, r);
        }
    };

    if (workers == 1) {
        std::vector<std::int64_t> inv;
        sweep_block blk;
        for (std::int64_t a = first_a; a <= last_a; ++a) {
            fill(a, inv, blk);
            sink(blk);
        }
        return;
    }

    // A ring of slots; workers claim indices in order and may run at most
    // `window` blocks ahead of the consumer.
    const std::int64_t window = 4 * static_cast<std::int64_t>(workers);
    std::vector<sweep_block> slots(static_cast<std::size_t>(window));
    std::vector<char> ready(static_cast<std::size_t>(window), 0);
    std::mutex mu;
    std::condition_variable cv;
    std::int64_t next = 0, consumed = 0;
    bool aborted = false;

    auto work = [&] {
        std::vector<std::int64_t> inv;
        sweep_block local;
        for (;;) {
            std::int64_t i;
            {
                std::unique_lock lock(mu);
                cv.wait(lock, [&] { return aborted || next >= count || next < consumed + window; });
                if (aborted || next >= count) return;
                i = next++;
            }
            fill(first_a + i, inv, local);
            {
                std::lock_guard lock(mu);
                auto slot = static_cast<std::size_t>(i % window);
                std::swap(slots[slot], local);
                ready[slot] = 1;
            }
            cv.notify_all();
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);

    try {
        for (std::int64_t i = 0; i < count; ++i) {
            auto slot = static_cast<std::size_t>(i % window);
            {
                std::unique_lock lock(mu);
                cv.wait(lock, [&] { return ready[slot] != 0; });
            }
            sink(slots[slot]);
            {
                std::lock_guard lock(mu);
                ready[slot] = 0;
                ++consumed;
            }
            cv.notify_all();
        }
    } catch (...) {
        {
            std::lock_guard lock(mu);
            aborted = true;
        }
        cv.notify_all();
        for (auto& t : pool) t.join();
        throw;
    }
    for (auto& t : pool) t.join();
}

/// Collects every record; fine for small sweeps.
inline std::vector<sweep_record> sweep_records(const sweep_config& cfg) {
    std::vector<sweep_record> out;
    sweep(cfg, false, [&](const sweep_block& blk) { out.insert(out.end(), blk.records.begin(), blk.records.end()); });
    return out;
}

inline void write_csv_header(std::ostream& os) {
    os << "# sg2 sweep format_version=" << sweep_format_version << '\n' << sweep_csv_header << '\n';
    if (!os) fail(error_kind::sink_failure, "could not write CSV header");
}

inline void write_csv_block(std::ostream& os, const sweep_block& blk) {
    os.write(blk.csv.data(), static_cast<std::streamsize>(blk.csv.size()));
    if (!os) fail(error_kind::sink_failure, "could not write CSV rows");
}

/// Plain SVG scatter of (q1, q2), one 1px square per record, q2 growing upward.
class svg_writer {
public:
    explicit svg_writer(std::ostream& os) : os_(os) {
        os_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
            << "<!-- sg2 scatter format_version=" << sweep_format_version << " -->\n"
            << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"1000\" viewBox=\"0 0 1000 1000\">\n"
            << "<rect x=\"0\" y=\"0\" width=\"1000\" height=\"1000\" fill=\"white\"/>\n"
            << "<g fill=\"black\">\n";
        check();
    }

    void add(const sweep_record& r) {
        std::int64_t x = r.l * 1000 / r.a;
        std::int64_t y = 999 - r.k * 1000 / r.a;
        buf_.clear();
        buf_ += "<rect x=\"";
        detail::append_int(buf_, x);
        buf_ += "\" y=\"";
        detail::append_int(buf_, y);
        buf_ += "\" width=\"1\" height=\"1\"/>\n";
        os_ << buf_;
    }

    void add(const sweep_block& blk) {
        for (const auto& r : blk.records) add(r);
        check();
    }

    void finish() {
        os_ << "</g>\n</svg>\n";
        os_.flush();
        check();
    }

private:
    void check() {
        if (!os_) fail(error_kind::sink_failure, "could not write SVG");
    }

    std::ostream& os_;
    std::string buf_;
};

// ---------------------------------------------------------------------------
// statistics

struct coverage_stats {
    std::uint64_t records = 0;
    long grid = 0;
    std::uint64_t occupied = 0;
    rational coverage;
    std::uint64_t q1_below_half = 0, q2_below_half = 0;
    rational q1_below_half_fraction, q2_below_half_fraction;
    std::vector<std::uint64_t> q1_marginal, q2_marginal; // counts per column / row
};

/// Streaming k x k occupancy over [0,1)^2. Cells are half-open from above:
/// a point exactly on a boundary goes to the lower-indexed cell.
class coverage_accumulator {
public:
    explicit coverage_accumulator(long k) : k_(k) {
        if (k < 1) fail(error_kind::config_rejected, "grid size must be positive");
        cells_.assign(static_cast<std::size_t>(k * k), 0);
        q1_.assign(static_cast<std::size_t>(k), 0);
        q2_.assign(static_cast<std::size_t>(k), 0);
    }

    void add(std::int64_t num1, std::int64_t num2, std::int64_t den) {
        long i = cell(num1, den), j = cell(num2, den);
        cells_[static_cast<std::size_t>(i * k_ + j)] = 1;
        ++q1_[static_cast<std::size_t>(i)];
        ++q2_[static_cast<std::size_t>(j)];
        if (2 * num1 < den) ++q1_half_;
        if (2 * num2 < den) ++q2_half_;
        ++n_;
    }

    void add(const sweep_record& r) { add(r.l, r.k, r.a); }

    void add(const sweep_block& blk) {
        for (const auto& r : blk.records) add(r);
    }

    coverage_stats result() const {
        if (n_ == 0) fail(error_kind::empty_input, "no records");
        coverage_stats s;
        s.records = n_;
        s.grid = k_;
        s.occupied = static_cast<std::uint64_t>(std::count(cells_.begin(), cells_.end(), 1));
        s.coverage = rational(big_int(s.occupied), big_int(k_) * k_);
        s.q1_below_half = q1_half_;
        s.q2_below_half = q2_half_;
        s.q1_below_half_fraction = rational(big_int(q1_half_), big_int(n_));
        s.q2_below_half_fraction = rational(big_int(q2_half_), big_int(n_));
        s.q1_marginal = q1_;
        s.q2_marginal = q2_;
        return s;
    }

private:
    // ceil(num*k/den) - 1, clamped to the grid for q = 0
    long cell(std::int64_t num, std::int64_t den) const {
        if (num <= 0) return 0;
        __int128 p = static_cast<__int128>(num) * k_;
        long c = static_cast<long>((p + den - 1) / den) - 1;
        return std::min(c, k_ - 1);
    }

    long k_;
    std::vector<char> cells_;
    std::vector<std::uint64_t> q1_, q2_;
    std::uint64_t q1_half_ = 0, q2_half_ = 0, n_ = 0;
};

/// Grid statistics for explicit (q1, q2) points in [0,1)^2.
inline coverage_stats grid_coverage(const std::vector<std::pair<rational, rational>>& points, long k) {
    if (points.empty()) fail(error_kind::empty_input, "no records");
    coverage_accumulator acc(k);
    for (const auto& [q1, q2] : points) {
        // bring both to a common denominator that fits the accumulator
        big_int den = sg2::lcm<big_int>(denominator(q1), denominator(q2));
        big_int n1 = numerator(q1) * (den / denominator(q1));
        big_int n2 = numerator(q2) * (den / denominator(q2));
        if (q1 < 0 || q1 >= 1 || q2 < 0 || q2 >= 1) fail(error_kind::out_of_domain, "points must lie in [0,1)^2");
        acc.add(static_cast<std::int64_t>(n1), static_cast<std::int64_t>(n2), static_cast<std::int64_t>(den));
    }
    return acc.result();
}

inline coverage_stats grid_coverage(const std::vector<sweep_record>& records, long k) {
    if (records.empty()) fail(error_kind::empty_input, "no records");
    coverage_accumulator acc(k);
    for (const auto& r : records) acc.add(r);
    return acc.result();
}

} // namespace sg2
