// Command-line front end. Exit codes: 0 success, 1 domain error (one JSON
// object on stderr), 2 usage error.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sg2/sg2.hpp"

using nlohmann::json;
using namespace sg2;

namespace {

struct options {
    bool as_json = false;
    unsigned threads = 1;
};

big_int parse_int(const std::string& s, const char* what) {
    if (!detail::is_integer(s)) fail(error_kind::parse_error, std::string(what) + " must be an integer, got '" + s + "'");
    return big_int(s);
}

json num(const big_int& v) {
    if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
        return static_cast<std::int64_t>(v);
    return v.str();
}

void emit(const options& o, const json& j, const std::string& text) {
    if (o.as_json) std::cout << j.dump() << "\n";
    else std::cout << text;
}

bool fits64(const big_int& a, const big_int& b) {
    return b <= big_int(std::numeric_limits<std::int64_t>::max() / 64) / a;
}

/// Runs fn with a fixed-width semigroup when the generators allow it.
template <class Fn>
auto with_semigroup(const big_int& a, const big_int& b, Fn&& fn) {
    semigroup exact(a, b); // validates order and coprimality
    if (fits64(a, b)) return fn(semigroup64(static_cast<std::int64_t>(a), static_cast<std::int64_t>(b)));
    return fn(exact);
}

std::string read_json_arg(const std::string& v) {
    if (!v.empty() && v.front() == '{') return v;
    return read_text_file(v);
}

limit_invariants load_inv(const std::string& preset, const std::string& file) {
    if (!file.empty()) return load_invariants(file);
    if (preset.empty()) fail(error_kind::parse_error, "give --preset or --invariants");
    return load_invariants(std::string(SG2_DATA_DIR) + "/presets/" + preset + ".json");
}

reduced_system load_system(const std::string& v) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_json_arg(v));
    } catch (const nlohmann::json::exception& e) {
        fail(error_kind::invalid_system, std::string("invalid JSON: ") + e.what());
    }
    return system_from_json(j);
}

// ---------------------------------------------------------------------------

void cmd_info(const options& o, const std::string& as, const std::string& bs) {
    semigroup s(parse_int(as, "a"), parse_int(bs, "b"));
    auto t = triple(s);
    json j{{"a", num(s.a())},           {"b", num(s.b())},
           {"ab", num(s.ab())},         {"frobenius", num(s.frobenius())},
           {"conductor", num(s.conductor())}, {"genus", num(s.genus())},
           {"alpha1", num(s.alpha1())}, {"beta1", num(s.beta1())},
           {"q1", to_string(t.q1)},     {"q2", to_string(t.q2)}};
    std::ostringstream out;
    out << "a=" << s.a() << " b=" << s.b() << " ab=" << s.ab() << " frobenius=" << s.frobenius()
        << " conductor=" << s.conductor() << " genus=" << s.genus() << " alpha1=" << s.alpha1()
        << " beta1=" << s.beta1() << " q1=" << to_string(t.q1) << " q2=" << to_string(t.q2) << "\n";
    emit(o, j, out.str());
}

void cmd_member(const options& o, const std::string& as, const std::string& bs, const std::vector<std::string>& xs) {
    semigroup s(parse_int(as, "a"), parse_int(bs, "b"));
    json arr = json::array();
    std::ostringstream out;
    for (const auto& xstr : xs) {
        big_int x = parse_int(xstr, "x");
        bool in = x >= 0 && s.contains(x);
        bool ma = in && s.is_ma(x), mb = in && s.is_mb(x);
        arr.push_back({{"x", num(x)}, {"member", in}, {"Ma", ma}, {"Mb", mb}});
        out << x << (in ? " member" : " gap") << (ma ? " Ma" : "") << (mb ? " Mb" : "") << "\n";
    }
    emit(o, arr, out.str());
}

void cmd_decomp(const options& o, const std::string& as, const std::string& bs, const std::vector<std::string>& xs) {
    semigroup s(parse_int(as, "a"), parse_int(bs, "b"));
    json arr = json::array();
    std::ostringstream out;
    for (const auto& xstr : xs) {
        big_int x = parse_int(xstr, "x");
        auto d = s.decompose(x);
        arr.push_back({{"x", num(x)}, {"m", num(d.m)}, {"m_a", num(d.m_a)}, {"m_b", num(d.m_b)}});
        out << x << " = " << d.m << "*ab + " << d.m_a << "*a + " << d.m_b << "*b\n";
    }
    emit(o, arr, out.str());
}

void cmd_axioms(const options& o, const std::string& as, const std::string& bs, const std::string& bound, long cap) {
    const big_int a = parse_int(as, "a"), b = parse_int(bs, "b");
    axiom_config cfg;
    if (bound != "auto") cfg.universe_bound = parse_int(bound, "bound");
    cfg.caps = {cap, cap, cap};
    auto rep = with_semigroup(a, b, [&](const auto& s) { return check_axioms(s, cfg); });

    json j;
    j["format_version"] = 1;
    j["universe_bound"] = num(rep.universe_bound);
    j["witness_bound"] = num(rep.witness_bound);
    j["ons_passed"] = rep.all_passed(theory::ons);
    j["lons_passed"] = rep.all_passed(theory::lons);
    auto least = rep.least_failing_lons();
    j["least_failing_lons_k"] = least ? json(*least) : json(nullptr);
    j["axioms"] = json::array();
    std::ostringstream out;
    for (const auto& a : rep.outcomes) {
        std::string params;
        for (std::size_t i = 0; i < a.params.size(); ++i) params += (i ? "," : "") + std::to_string(a.params[i]);
        json oj{{"name", a.name}, {"theory", a.family == theory::ons ? "ons" : "lons"}, {"params", a.params},
                {"passed", a.passed()}};
        out << (a.passed() ? "pass " : "FAIL ") << a.name;
        if (!params.empty()) out << "[" << params << "]";
        if (!a.counterexample.empty()) {
            json cx = json::object();
            out << " counterexample";
            for (const auto& [v, val] : a.counterexample) {
                cx[v] = val;
                out << " " << v << "=" << val;
            }
            oj["counterexample"] = cx;
        }
        if (!a.undefined.empty()) {
            json un = json::array();
            out << " undefined";
            for (const auto& u : a.undefined) {
                un.push_back({{"term", u.term}, {"count", u.count}});
                out << " " << u.term << "x" << u.count;
            }
            oj["undefined"] = un;
        }
        out << "\n";
        j["axioms"].push_back(std::move(oj));
    }
    out << "T_ons " << (rep.all_passed(theory::ons) ? "passed" : "failed") << ", T_lons ";
    if (least) out << "first fails at k=" << *least << "\n";
    else out << "passed up to k=" << cap << "\n";
    emit(o, j, out.str());
}

void cmd_solve(const options& o, const std::string& as, const std::string& bs, const std::string& sys_arg,
               const std::string& method) {
    const big_int a = parse_int(as, "a"), b = parse_int(bs, "b");
    const reduced_system sys = load_system(sys_arg);
    auto solved = with_semigroup(a, b, [&](const auto& s) {
        using Int = typename std::decay_t<decltype(s)>::int_type;
        std::optional<big_int> direct, lambda;
        if (auto x = solve_direct(s, sys)) direct = widen(*x);
        if (method != "direct") {
            std::optional<Int> best;
            for (const auto& r : full_to_reduced(s, sys))
                if (auto x = solve_via_lambda(s, r); x && (!best || *x < *best)) best = x;
            if (best) lambda = widen(*best);
        }
        return std::pair{direct, lambda};
    });
    auto show = [](const std::optional<big_int>& x) { return x ? x->str() : std::string("none"); };
    json j{{"system", to_json(sys)}, {"direct", solved.first ? num(*solved.first) : json(nullptr)}};
    std::string text = "direct " + show(solved.first) + "\n";
    if (method != "direct") {
        j["lambda"] = solved.second ? num(*solved.second) : json(nullptr);
        j["agree"] = solved.first == solved.second;
        text += "lambda " + show(solved.second) + "\n";
    }
    emit(o, j, text);
}

void cmd_ratios(const options& o, const std::string& as, const std::string& bs) {
    semigroup s(parse_int(as, "a"), parse_int(bs, "b"));
    auto t = triple(s);
    json j{{"q0", to_string(t.q0)}, {"q1", to_string(t.q1)}, {"q2", to_string(t.q2)}, {"l", num(t.l)}, {"k", num(t.k)}};
    emit(o, j,
         "q0=" + to_string(t.q0) + " q1=" + to_string(t.q1) + " q2=" + to_string(t.q2) + " l=" + t.l.str() +
             " k=" + t.k.str() + "\n");
}

struct sweep_args {
    std::int64_t max_n = 0;
    std::optional<std::int64_t> modulus, res_a, res_b;
    std::string out, svg;
    long grid = 20;
};

void cmd_sweep(const options& o, const sweep_args& args) {
    sweep_config cfg;
    cfg.max_n = args.max_n;
    cfg.modulus = args.modulus;
    cfg.res_a = args.res_a;
    cfg.res_b = args.res_b;
    cfg.threads = o.threads;
    validate(cfg);

    std::ofstream file, svg_file;
    std::ostream* csv = &std::cout;
    if (!args.out.empty()) {
        file.open(args.out, std::ios::binary);
        if (!file) fail(error_kind::sink_failure, "cannot open " + args.out);
        csv = &file;
    }
    std::optional<svg_writer> svg;
    if (!args.svg.empty()) {
        svg_file.open(args.svg, std::ios::binary);
        if (!svg_file) fail(error_kind::sink_failure, "cannot open " + args.svg);
        svg.emplace(svg_file);
    }
    coverage_accumulator acc(args.grid);
    write_csv_header(*csv);
    sweep(cfg, true, [&](const sweep_block& blk) {
        write_csv_block(*csv, blk);
        if (svg) svg->add(blk);
        acc.add(blk);
    });
    if (svg) svg->finish();
    csv->flush();
    if (!*csv) fail(error_kind::sink_failure, "write failed");
    if (args.out.empty()) return; // stdout carries the CSV

    json j{{"records", 0}};
    std::string text;
    try {
        auto st = acc.result();
        j = {{"format_version", 1},
             {"records", st.records},
             {"grid", st.grid},
             {"occupied", st.occupied},
             {"coverage", to_string(st.coverage)},
             {"q1_below_half", to_string(st.q1_below_half_fraction)},
             {"q2_below_half", to_string(st.q2_below_half_fraction)}};
        text = "records=" + std::to_string(st.records) + " coverage=" + to_string(st.coverage) +
               " q1<1/2=" + to_string(st.q1_below_half_fraction) + " q2<1/2=" + to_string(st.q2_below_half_fraction) +
               "\n";
    } catch (const error& e) {
        if (e.kind() != error_kind::empty_input) throw;
        text = "records=0\n";
    }
    emit(o, j, text);
}

void cmd_limit_eval(const options& o, const limit_invariants& inv, const std::vector<std::string>& sentences,
                    const std::vector<std::string>& terms) {
    const limit_model model(inv);
    json j;
    j["invariants"] = to_json(model.invariants());
    j["sentences"] = json::array();
    j["terms"] = json::array();
    std::ostringstream out;
    for (const auto& text : sentences) {
        auto f = parse_formula(text);
        if (!is_quantifier_free(*f)) fail(error_kind::unsupported, "the limit model evaluates quantifier-free sentences only");
        auto r = eval_qf_sentence(model, *f);
        json sj{{"sentence", to_sexpr(f)}, {"value", r.value}, {"defined", r.fully_defined()}};
        out << (r.value ? "true " : "false") << "  " << to_sexpr(f);
        if (!r.fully_defined()) {
            json un = json::array();
            out << "  [undefined:";
            for (const auto& u : r.undefined) {
                un.push_back(u.term);
                out << " " << u.term;
            }
            out << "]";
            sj["undefined"] = un;
        }
        out << "\n";
        j["sentences"].push_back(std::move(sj));
    }
    for (const auto& text : terms) {
        auto t = parse_term(text);
        auto v = eval_term(model, {}, *t);
        j["terms"].push_back({{"term", to_sexpr(t)}, {"value", v ? json(to_string(*v)) : json(nullptr)}});
        out << to_sexpr(t) << " = " << (v ? to_string(*v) : std::string("undefined")) << "\n";
    }
    if (sentences.empty() && terms.empty()) {
        const auto& d = model.invariants();
        out << "t=" << d.t << " l=" << d.l << " q0=" << to_string(d.q0) << " q1=" << to_string(d.q1)
            << " q2=" << to_string(d.q2) << "\n"
            << "b = " << to_string(model.b_elem()) << "\n"
            << "alpha(b) = " << to_string(model.alpha_b()) << "\n"
            << "beta1 = " << to_string(model.beta1()) << "\n"
            << "alpha1 = " << to_string(model.alpha1()) << "\n"
            << "c = " << to_string(model.conductor()) << "\n";
    }
    emit(o, j, out.str());
}

void cmd_limit_solve(const options& o, const limit_invariants& inv, const std::string& sys_arg,
                     std::optional<std::string> floor_arg, int witnesses) {
    const reduced_system sys = load_system(sys_arg);
    decide_options opt;
    if (floor_arg) opt.a_floor = parse_int(*floor_arg, "a-floor");
    opt.witness_count = witnesses;
    auto d = decide_reduced_system(inv, sys, opt);
    json j{{"realizable", d.realizable},
           {"decided_without_witness", d.decided_without_witness},
           {"witnesses_agree", d.witnesses_agree},
           {"witnesses", json::array()}};
    std::ostringstream out;
    out << (d.realizable ? "realized" : "omitted");
    if (d.decided_without_witness) out << " (congruences inconsistent)";
    else if (!d.witnesses_agree) out << " (WITNESSES DISAGREE)";
    out << "\n";
    for (const auto& w : d.witnesses) {
        j["witnesses"].push_back({{"a", num(w.a)}, {"b", num(w.b)}, {"x", w.x ? num(*w.x) : json(nullptr)}});
        out << "  witness a=" << w.a << " b=" << w.b << " x=" << (w.x ? w.x->str() : "none") << "\n";
    }
    emit(o, j, out.str());
}

void cmd_transfer(const options& o, const limit_invariants& inv, const std::string& catalog_path, int count,
                  const std::string& a_floor, std::uint64_t seed) {
    auto catalog = load_catalog(catalog_path);
    family_spec spec;
    spec.inv = inv;
    spec.count = count;
    spec.a_floor = parse_int(a_floor, "a-floor");
    spec.q_floor = std::max(big_int(10), agreement_threshold(catalog));
    spec.seed = seed;
    auto family = generate_family(spec);
    auto rep = check_agreement(inv, family, catalog, o.threads);
    if (o.as_json) {
        std::cout << to_json(rep).dump() << "\n";
        return;
    }
    std::ostringstream out;
    out << "family:";
    for (const auto& s : family) out << " (" << s.a() << "," << s.b() << ")";
    out << "\n";
    for (const auto& s : rep.sentences) {
        std::string sym = s.symbolic_value ? (*s.symbolic_value ? "true" : "false") : "skipped";
        out << s.agreeing << "/" << s.members << "  " << sym;
        out << std::string(8 - std::min<std::size_t>(sym.size(), 7), ' ') << s.name;
        if (s.smallest_failing_a) out << "  smallest failing a=" << *s.smallest_failing_a;
        if (!s.note.empty()) out << "  (" << s.note << ")";
        out << "\n";
    }
    out << "checked=" << rep.checked() << " mismatches=" << rep.mismatches() << " skipped=" << rep.skipped()
        << " threshold=" << rep.threshold << "\n";
    std::cout << out.str();
}

unsigned default_threads() {
    if (const char* env = std::getenv("SG2_THREADS")) {
        try {
            long v = std::stol(env);
            if (v >= 1) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact arithmetic for two-generator numerical semigroups"};
    app.require_subcommand(1);
    options opt;
    opt.threads = default_threads();
    app.add_flag("--json", opt.as_json, "machine-readable output");
    app.add_option("--threads", opt.threads, "worker threads for sweep and transfer (default $SG2_THREADS or 1)")
        ->check(CLI::PositiveNumber);

    std::string a, b;
    std::vector<std::string> xs;
    auto* info = app.add_subcommand("info", "derived constants and ratios");
    auto* member = app.add_subcommand("member", "membership and M_a / M_b");
    auto* decomp = app.add_subcommand("decomp", "x = m*ab + m_a*a + m_b*b");
    auto* axioms = app.add_subcommand("axioms", "check the axiom catalog");
    auto* solve = app.add_subcommand("solve", "solve a system in one semigroup");
    auto* ratios = app.add_subcommand("ratios", "q0, q1, q2");
    for (auto* c : {info, member, decomp, axioms, solve, ratios}) {
        c->add_option("a", a, "first generator")->required();
        c->add_option("b", b, "second generator")->required();
    }
    member->add_option("x", xs, "elements")->required();
    decomp->add_option("x", xs, "elements")->required();

    std::string bound = "auto";
    long cap = 8;
    axioms->add_option("--bound", bound, "universe bound, or auto for 3ab");
    axioms->add_option("--cap", cap, "cap on n, r and k in the schemes")->check(CLI::Range(2L, 64L));

    std::string system_arg, method = "both";
    solve->add_option("--system", system_arg, "system JSON file or inline JSON")->required();
    solve->add_option("--method", method, "direct or both")->check(CLI::IsMember({"direct", "both"}));

    sweep_args sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "coprime pair sweep to CSV");
    sweep_cmd->add_option("--max", sw.max_n, "largest generator")->required()->check(CLI::Range(std::int64_t(2), std::int64_t(3000000)));
    sweep_cmd->add_option("--mod", sw.modulus, "congruence filter modulus");
    sweep_cmd->add_option("--res-a", sw.res_a, "residue of a");
    sweep_cmd->add_option("--res-b", sw.res_b, "residue of b");
    sweep_cmd->add_option("--out", sw.out, "CSV path (stdout when absent)");
    sweep_cmd->add_option("--svg", sw.svg, "SVG scatter path");
    sweep_cmd->add_option("--grid", sw.grid, "grid size for the coverage summary")->check(CLI::Range(1L, 10000L));

    std::string preset, inv_file;
    auto add_inv = [&](CLI::App* c) {
        auto* p = c->add_option("--preset", preset, "shipped preset name");
        auto* f = c->add_option("--invariants", inv_file, "invariants JSON file");
        p->excludes(f);
    };
    std::vector<std::string> sentences, terms;
    auto* leval = app.add_subcommand("limit-eval", "evaluate in the symbolic limit model");
    add_inv(leval);
    leval->add_option("sentence", sentences, "quantifier-free sentences");
    leval->add_option("--term", terms, "terms to evaluate");

    std::optional<std::string> lfloor;
    int witnesses = 2;
    auto* lsolve = app.add_subcommand("limit-solve", "decide a system in the limit");
    add_inv(lsolve);
    lsolve->add_option("--system", system_arg, "system JSON file or inline JSON")->required();
    lsolve->add_option("--a-floor", lfloor, "smallest witness a");
    lsolve->add_option("--witnesses", witnesses, "number of witnesses")->check(CLI::Range(1, 16));

    std::string catalog = std::string(SG2_DATA_DIR) + "/sentences.sexp", tfloor = "10000";
    int count = 10;
    std::uint64_t seed = 1;
    auto* transfer = app.add_subcommand("transfer", "limit model against a finite family");
    add_inv(transfer);
    transfer->add_option("--catalog", catalog, "sentence catalog");
    transfer->add_option("--count", count, "family size")->check(CLI::Range(1, 1000));
    transfer->add_option("--a-floor", tfloor, "smallest a");
    transfer->add_option("--seed", seed, "family seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*info) cmd_info(opt, a, b);
        else if (*member) cmd_member(opt, a, b, xs);
        else if (*decomp) cmd_decomp(opt, a, b, xs);
        else if (*axioms) cmd_axioms(opt, a, b, bound, cap);
        else if (*solve) cmd_solve(opt, a, b, system_arg, method);
        else if (*ratios) cmd_ratios(opt, a, b);
        else if (*sweep_cmd) cmd_sweep(opt, sw);
        else if (*leval) cmd_limit_eval(opt, load_inv(preset, inv_file), sentences, terms);
        else if (*lsolve) cmd_limit_solve(opt, load_inv(preset, inv_file), system_arg, lfloor, witnesses);
        else if (*transfer) cmd_transfer(opt, load_inv(preset, inv_file), catalog, count, tfloor, seed);
    } catch (const error& e) {
        std::string kind(to_string(e.kind())), msg = e.what();
        if (msg.rfind(kind + ": ", 0) == 0) msg.erase(0, kind.size() + 2);
        std::cerr << json{{"error", kind}, {"message", msg}}.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }
    return 0;
}
