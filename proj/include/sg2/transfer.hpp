#pragma once

// Finite families that share a set of limit invariants, and sentence-level
// agreement between the symbolic prime model and those finite members.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "sg2/error.hpp"
#include "sg2/eval.hpp"
#include "sg2/finite_model.hpp"
#include "sg2/limit_model.hpp"
#include "sg2/semigroup.hpp"
#include "sg2/syntax.hpp"

namespace sg2 {

struct family_spec {
    limit_invariants inv;
    int count = 10;
    big_int a_floor = 10000;
    big_int q_floor = 10; // zero branch: every b_i exceeds q_floor * a_i
    std::uint64_t seed = 1;
};

/// Members with a_i strictly increasing from a_floor upward, each matching the
/// residue profiles; the seed decides how many admissible values are skipped
/// between consecutive members.
inline std::vector<semigroup> generate_family(const family_spec& spec) {
    if (spec.count < 1) fail(error_kind::unsatisfiable_spec, "count must be positive");
    limit_invariants inv;
    try {
        inv = validate(spec.inv);
    } catch (const error& e) {
        fail(error_kind::unsatisfiable_spec, e.what());
    }
    const big_int La = profile_lcm(inv.a_residues);
    const big_int Lq = profile_lcm(inv.alpha_b_residues);
    std::mt19937_64 rng(spec.seed);
    std::uniform_int_distribution<int> skip(0, 3);

    std::vector<semigroup> out;
    big_int a = least_matching(inv.a_residues, std::max(spec.a_floor, big_int(2)));
    int misses = 0;
    while (static_cast<int>(out.size()) < spec.count) {
        big_int q = 0;
        if (inv.kind == q0_kind::zero) q = least_matching(inv.alpha_b_residues, spec.q_floor) + skip(rng) * Lq;
        if (auto ab = partner(inv, a, q)) {
            out.emplace_back(ab->first, ab->second);
            misses = 0;
            a += (1 + skip(rng)) * La;
        } else {
            if (++misses > 10000) fail(error_kind::unsatisfiable_spec, "no coprime pair fits the invariants");
            a += La;
        }
    }
    return out;
}

/// Members below this size may legitimately disagree with the limit.
inline big_int agreement_threshold(const std::vector<named_formula>& catalog) {
    big_int m = 0;
    for (const auto& s : catalog) m = std::max(m, max_coefficient(*s.body));
    return 4 * m;
}

struct agreement_entry {
    std::size_t sentence = 0;
    big_int a, b;
    bool finite_value = false, finite_defined = true;
    bool agree = false;
};

struct sentence_agreement {
    std::string name;
    std::string text;
    std::optional<bool> symbolic_value; // absent when skipped
    bool symbolic_defined = true;
    std::string note; // reason for skipping
    std::size_t members = 0, agreeing = 0;
    std::optional<big_int> smallest_failing_a;
};

struct agreement_report {
    big_int threshold;
    std::vector<sentence_agreement> sentences;
    std::vector<agreement_entry> entries; // ordered by (sentence, a)

    std::size_t checked() const { return entries.size(); }
    std::size_t mismatches() const {
        return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const auto& e) { return !e.agree; }));
    }
    std::size_t skipped() const {
        return static_cast<std::size_t>(
            std::count_if(sentences.begin(), sentences.end(), [](const auto& s) { return !s.symbolic_value; }));
    }
    bool all_agree() const { return mismatches() == 0; }
};

/// Compares the prime model with every member on every sentence. Value and
/// definedness must both match for an entry to agree.
inline agreement_report check_agreement(const limit_invariants& inv, const std::vector<semigroup>& family,
                                        const std::vector<named_formula>& catalog, unsigned threads = 1) {
    const limit_model model(inv);
    agreement_report rep;
    rep.threshold = agreement_threshold(catalog);

    std::vector<semigroup> members = family;
    std::sort(members.begin(), members.end(), [](const auto& x, const auto& y) { return x.a() < y.a(); });

    for (const auto& s : catalog) {
        sentence_agreement sa;
        sa.name = s.name;
        sa.text = to_sexpr(s.body);
        try {
            if (!is_quantifier_free(*s.body)) fail(error_kind::unsupported, "sentence has quantifiers");
            if (!free_variables(*s.body).empty()) fail(error_kind::unbound_variable, "sentence has free variables");
            auto r = eval_qf_sentence(model, *s.body);
            sa.symbolic_value = r.value;
            sa.symbolic_defined = r.fully_defined();
        } catch (const error& e) {
            sa.note = e.what();
        }
        rep.sentences.push_back(std::move(sa));
    }

    // finite side, one slot per (sentence, member)
    const std::size_t ns = catalog.size(), nm = members.size();
    std::vector<agreement_entry> grid(ns * nm);
    std::vector<char> used(ns * nm, 0);
    auto work = [&](std::size_t first, std::size_t step) {
        for (std::size_t j = first; j < nm; j += step) {
            finite_model<big_int> fm(members[j]);
            for (std::size_t i = 0; i < ns; ++i) {
                if (!rep.sentences[i].symbolic_value) continue;
                auto r = eval_formula(fm, *catalog[i].body);
                auto& e = grid[i * nm + j];
                e.sentence = i;
                e.a = members[j].a();
                e.b = members[j].b();
                e.finite_value = r.value;
                e.finite_defined = r.fully_defined();
                e.agree = r.value == *rep.sentences[i].symbolic_value &&
                          r.fully_defined() == rep.sentences[i].symbolic_defined;
                used[i * nm + j] = 1;
            }
        }
    };
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, nm));
    if (workers == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
        for (auto& t : pool) t.join();
    }

    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!used[k]) continue;
        auto& e = grid[k];
        auto& sa = rep.sentences[e.sentence];
        ++sa.members;
        if (e.agree) ++sa.agreeing;
        else if (!sa.smallest_failing_a || e.a < *sa.smallest_failing_a) sa.smallest_failing_a = e.a;
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

inline nlohmann::json to_json(const agreement_report& rep) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["threshold"] = rep.threshold.str();
    j["checked"] = rep.checked();
    j["mismatches"] = rep.mismatches();
    j["skipped"] = rep.skipped();
    j["sentences"] = nlohmann::json::array();
    for (const auto& s : rep.sentences) {
        nlohmann::json o{{"name", s.name}, {"sentence", s.text}};
        if (s.symbolic_value) {
            o["symbolic"] = *s.symbolic_value;
            o["symbolic_defined"] = s.symbolic_defined;
        } else {
            o["symbolic"] = nullptr;
            o["note"] = s.note;
        }
        o["members"] = s.members;
        o["agreeing"] = s.agreeing;
        o["smallest_failing_a"] = s.smallest_failing_a ? nlohmann::json(s.smallest_failing_a->str()) : nlohmann::json(nullptr);
        j["sentences"].push_back(std::move(o));
    }
    j["entries"] = nlohmann::json::array();
    for (const auto& e : rep.entries)
        j["entries"].push_back({{"sentence", rep.sentences[e.sentence].name},
                                {"a", e.a.str()},
                                {"b", e.b.str()},
                                {"finite", e.finite_value},
                                {"finite_defined", e.finite_defined},
                                {"agree", e.agree}});
    return j;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(error_kind::parse_error, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<named_formula> load_catalog(const std::string& path) { return parse_catalog(read_text_file(path)); }

inline limit_invariants load_invariants(const std::string& path) { return invariants_from_text(read_text_file(path)); }

} // namespace sg2
