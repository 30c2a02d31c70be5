#pragma once

// Evaluation of terms and formulas of the augmented language over any
// structure exposing the model interface (see finite_model.hpp for the
// reference implementation).
//
// Partial functions make some terms undefined. An atom whose terms are not
// all defined is false; every such encounter is counted per offending subterm
// so callers can tell genuine falsity from partiality.
//
// Quantifiers range over members x <= bound. Before enumerating, the body is
// scanned for atoms that pin the variable down (x + b = y, Ma(x), x < t, ...)
// and only members of the resulting candidate set are visited.

#include <boost/container/small_vector.hpp>

#include <algorithm>
#include <deque>
#include <map>
#include <string_view>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sg2/error.hpp"
#include "sg2/integer.hpp"
#include "sg2/syntax.hpp"

namespace sg2 {

/// Finite union of closed integer intervals, kept sorted and disjoint.
template <class Int>
class interval_set {
public:
    struct interval {
        Int lo, hi;
    };

    interval_set() = default;

    static interval_set range(Int lo, Int hi) {
        interval_set s;
        if (!(hi < lo)) s.parts_.push_back({std::move(lo), std::move(hi)});
        return s;
    }

    static interval_set point(Int x) { return range(x, x); }

    static interval_set points(const std::vector<Int>& xs) {
        interval_set s;
        for (const auto& x : xs) s.push(x, x);
        return s;
    }

    using storage = boost::container::small_vector<interval, 2>;

    const storage& parts() const noexcept { return parts_; }
    bool empty() const noexcept { return parts_.empty(); }
    bool is_point() const { return parts_.size() == 1 && parts_[0].lo == parts_[0].hi; }

    interval_set unite(const interval_set& o) const {
        storage all = parts_;
        all.insert(all.end(), o.parts_.begin(), o.parts_.end());
        std::sort(all.begin(), all.end(), [](const interval& x, const interval& y) { return x.lo < y.lo; });
        interval_set s;
        for (const auto& iv : all) s.push(iv.lo, iv.hi);
        return s;
    }

    interval_set intersect(const interval_set& o) const {
        if (o.parts_.size() == 1 && parts_.size() > 8) return clip(o.parts_[0]);
        if (parts_.size() == 1 && o.parts_.size() > 8) return o.clip(parts_[0]);
        interval_set s;
        std::size_t i = 0, j = 0;
        while (i < parts_.size() && j < o.parts_.size()) {
            const auto& x = parts_[i];
            const auto& y = o.parts_[j];
            Int lo = x.lo < y.lo ? y.lo : x.lo;
            Int hi = x.hi < y.hi ? x.hi : y.hi;
            if (!(hi < lo)) s.parts_.push_back({lo, hi});
            if (x.hi < y.hi) ++i;
            else ++j;
        }
        return s;
    }

private:
    interval_set clip(const interval& r) const {
        interval_set s;
        auto it = std::lower_bound(parts_.begin(), parts_.end(), r.lo,
                                   [](const interval& iv, const Int& x) { return iv.hi < x; });
        for (; it != parts_.end() && !(r.hi < it->lo); ++it) {
            Int lo = it->lo < r.lo ? r.lo : it->lo;
            Int hi = r.hi < it->hi ? r.hi : it->hi;
            s.parts_.push_back({lo, hi});
        }
        return s;
    }

    // appends assuming lo is not below the last interval's lo
    void push(const Int& lo, const Int& hi) {
        if (!parts_.empty() && !(parts_.back().hi + 1 < lo)) {
            if (parts_.back().hi < hi) parts_.back().hi = hi;
            return;
        }
        parts_.push_back({lo, hi});
    }

    storage parts_;
};

struct undefined_event {
    std::string term;
    std::size_t count = 0;
};

struct eval_result {
    bool value = false;
    std::vector<undefined_event> undefined;

    bool fully_defined() const noexcept { return undefined.empty(); }
};

template <class Model>
class evaluator {
public:
    using value_type = typename Model::value_type;

    explicit evaluator(const Model& model) : model_(model) {}

    /// Binds a name owned by the caller; `name` must outlive the binding.
    void bind(std::string_view name, value_type v) { env_.emplace_back(name, std::move(v)); }
    /// Binds a name the evaluator keeps a copy of.
    void bind_owned(std::string name, value_type v) {
        names_.push_back(std::move(name));
        env_.emplace_back(names_.back(), std::move(v));
    }
    void unbind() { env_.pop_back(); }
    void clear_env() { env_.clear(); }

    std::optional<value_type> term(const sg2::term& t) { return eval(t, true); }

    bool holds(const formula& f) {
        switch (f.kind) {
        case formula_kind::truth: return true;
        case formula_kind::falsity: return false;
        case formula_kind::eq:
        case formula_kind::lt:
        case formula_kind::le: {
            auto x = eval(*f.terms[0], true);
            if (!x) return false;
            auto y = eval(*f.terms[1], true);
            if (!y) return false;
            if (f.kind == formula_kind::eq) return model_.equal(*x, *y);
            if (f.kind == formula_kind::lt) return model_.less(*x, *y);
            return !model_.less(*y, *x);
        }
        case formula_kind::ma:
        case formula_kind::mb:
        case formula_kind::res:
        case formula_kind::res_a:
        case formula_kind::res_b: {
            auto x = eval(*f.terms[0], true);
            if (!x) return false;
            switch (f.kind) {
            case formula_kind::ma: return model_.is_ma(*x);
            case formula_kind::mb: return model_.is_mb(*x);
            case formula_kind::res: return model_.residue(f.n, f.r, *x);
            case formula_kind::res_a: return model_.residue_a(f.n, f.r, *x);
            default: return model_.residue_b(f.n, f.r, *x);
            }
        }
        case formula_kind::negation: return !holds(*f.subs[0]);
        case formula_kind::conjunction:
            for (const auto& g : f.subs)
                if (!holds(*g)) return false;
            return true;
        case formula_kind::disjunction:
            for (const auto& g : f.subs)
                if (holds(*g)) return true;
            return false;
        case formula_kind::implies: return !holds(*f.subs[0]) || holds(*f.subs[1]);
        case formula_kind::iff: return holds(*f.subs[0]) == holds(*f.subs[1]);
        case formula_kind::forall:
        case formula_kind::exists: return quantify(f);
        }
        return false;
    }

    /// For a formula of the shape forall x1 ... forall xk body, the first
    /// assignment (in ascending member order) that falsifies the body, or
    /// nullopt when the formula holds.
    std::optional<std::vector<std::pair<std::string, value_type>>> counterexample(const formula& f) {
        std::vector<std::pair<std::string, value_type>> tuple;
        if (find_counterexample(f, tuple)) return tuple;
        return std::nullopt;
    }

    std::vector<undefined_event> undefined_report() const {
        std::map<std::string, std::size_t> grouped;
        for (const auto& [t, n] : undefined_) grouped[to_sexpr(*t)] += n;
        std::vector<undefined_event> out;
        for (auto& [s, n] : grouped) out.push_back({s, n});
        return out;
    }

    void reset_undefined() { undefined_.clear(); }

private:
    using set_type = interval_set<value_type>;

    const value_type* lookup(std::string_view name) const {
        for (auto it = env_.rbegin(); it != env_.rend(); ++it)
            if (same_name(it->first, name)) return &it->second;
        return nullptr;
    }

    // Evaluates t; when `log` is set the innermost undefined subterm is recorded.
    std::optional<value_type> eval(const sg2::term& t, bool log) {
        std::optional<value_type> out;
        switch (t.kind) {
        case term_kind::variable: {
            const value_type* v = lookup(t.name);
            if (!v) fail(error_kind::unbound_variable, "variable '" + t.name + "' is not bound");
            return *v;
        }
        case term_kind::constant: out = model_.constant(t.constant); break;
        case term_kind::literal: out = model_.literal(t.number); break;
        case term_kind::sum:
        case term_kind::difference: {
            auto x = eval(*t.args[0], log);
            if (!x) return std::nullopt;
            auto y = eval(*t.args[1], log);
            if (!y) return std::nullopt;
            out = t.kind == term_kind::sum ? model_.add(*x, *y) : model_.sub(*x, *y);
            break;
        }
        default: {
            auto x = eval(*t.args[0], log);
            if (!x) return std::nullopt;
            switch (t.kind) {
            case term_kind::scale: out = model_.scale(t.param, *x); break;
            case term_kind::div: out = model_.div(t.param, *x); break;
            case term_kind::alpha: out = model_.alpha(*x); break;
            case term_kind::beta: out = model_.beta(*x); break;
            case term_kind::pi_a: out = model_.pi_a(t.param, *x); break;
            case term_kind::pi_b: out = model_.pi_b(t.param, *x); break;
            case term_kind::succ: out = model_.succ(t.param, *x); break;
            default: break;
            }
        }
        }
        if (!out && log && !quiet_) ++undefined_[&t];
        return out;
    }

    bool quantify(const formula& f) {
        if constexpr (!Model::supports_quantifiers) {
            fail(error_kind::unsupported, "this structure does not evaluate quantifiers");
        } else {
            const bool universal = f.kind == formula_kind::forall;
            auto candidates = domain(f);
            if (!candidates) return universal;
            const formula& body = *f.subs[0];
            bool found = false;
            for_each_member(*candidates, [&](const value_type& x) {
                bind(f.var, x);
                bool v = holds(body);
                unbind();
                if (v != universal) {
                    found = true;
                    return false;
                }
                return true;
            });
            return universal ? !found : found;
        }
    }

    bool find_counterexample(const formula& f, std::vector<std::pair<std::string, value_type>>& tuple) {
        if (f.kind != formula_kind::forall) return !holds(f);
        if constexpr (Model::supports_quantifiers) {
            auto candidates = domain(f);
            if (!candidates) return false;
            bool found = false;
            for_each_member(*candidates, [&](const value_type& x) {
                bind(f.var, x);
                tuple.emplace_back(f.var, x);
                found = find_counterexample(*f.subs[0], tuple);
                unbind();
                if (found) return false;
                tuple.pop_back();
                return true;
            });
            return found;
        } else {
            return !holds(f);
        }
    }

    // Candidate values of the quantified variable, already clipped to the bound.
    std::optional<set_type> domain(const formula& f) {
        auto bound = eval(*f.bound, true);
        if (!bound) return std::nullopt;
        if (*bound < 0) return set_type{};
        bound_ = *bound;
        const bool universal = f.kind == formula_kind::forall;
        auto s = restrict(f.var, *f.subs[0], !universal);
        if (s.is_point()) {
            const auto& x = s.parts()[0].lo;
            return x < 0 || *bound < x ? set_type{} : s;
        }
        return s.intersect(set_type::range(value_type(0), *bound));
    }

    template <class Fn>
    void for_each_member(const set_type& s, Fn&& fn) {
        for (const auto& iv : s.parts()) {
            value_type x = iv.lo;
            if (!model_.contains(x)) x = model_.next_member(x);
            while (!(iv.hi < x)) {
                if (!fn(x)) return;
                x = model_.next_member(x);
            }
        }
    }

    set_type everything() const { return set_type::range(value_type(0), bound_); }

    // Superset of the values of `v` making `f` true (positive) or false
    // (negative), with the rest of the environment fixed.
    set_type restrict(const std::string& v, const formula& f, bool positive) {
        switch (f.kind) {
        case formula_kind::truth: return positive ? everything() : set_type{};
        case formula_kind::falsity: return positive ? set_type{} : everything();
        case formula_kind::negation: return restrict(v, *f.subs[0], !positive);
        case formula_kind::conjunction:
        case formula_kind::disjunction: {
            // and: true needs all parts true, false needs some part false
            const bool meet = (f.kind == formula_kind::conjunction) == positive;
            if (!meet) {
                set_type acc;
                for (const auto& g : f.subs) acc = acc.unite(restrict(v, *g, positive));
                return acc;
            }
            // equations usually pin v to a point, so they go first
            std::optional<set_type> acc;
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& g : f.subs) {
                    if ((g->kind == formula_kind::eq) != (pass == 0)) continue;
                    auto s = restrict(v, *g, positive);
                    acc = acc ? acc->intersect(s) : std::move(s);
                    // a single candidate is as tight as it gets
                    if (acc->empty() || acc->is_point()) return *acc;
                }
            return acc ? *acc : everything();
        }
        case formula_kind::implies: {
            if (positive) return restrict(v, *f.subs[0], false).unite(restrict(v, *f.subs[1], true));
            auto s = restrict(v, *f.subs[0], true);
            if (s.empty()) return s;
            return s.intersect(restrict(v, *f.subs[1], false));
        }
        case formula_kind::iff: {
            auto pt = restrict(v, *f.subs[0], true), pf = restrict(v, *f.subs[0], false);
            auto qt = restrict(v, *f.subs[1], true), qf = restrict(v, *f.subs[1], false);
            if (positive) return pt.intersect(qt).unite(pf.intersect(qf));
            return pt.intersect(qf).unite(pf.intersect(qt));
        }
        case formula_kind::forall:
        case formula_kind::exists: {
            // exists y. psi true (or forall y. psi false) needs psi (resp. not
            // psi) at some y; atoms mentioning y give no information
            const bool some = (f.kind == formula_kind::exists) == positive;
            if (!some || same_name(f.var, v)) return everything();
            masked_.push_back(f.var);
            auto s = restrict(v, *f.subs[0], positive);
            masked_.pop_back();
            if (positive && !s.empty() && !s.is_point())
                if (auto p = project(v, f.var, *f.subs[0])) s = s.intersect(*p);
            return s;
        }
        default: break;
        }
        return restrict_atom(v, f, positive);
    }

    bool mentions_any(const formula& f, const std::string& v) const {
        for (const auto& t : f.terms)
            if (mentions(*t, v)) return true;
        return false;
    }

    set_type restrict_atom(const std::string& v, const formula& f, bool positive) {
        for (const auto& t : f.terms)
            if (!bound_except(*t, v)) return everything();
        if (!mentions_any(f, v)) {
            // constant in v; deciding it here prunes the whole quantifier
            bool value = holds_quietly(f);
            return value == positive ? everything() : set_type{};
        }
        const sg2::term& x = *f.terms[0];
        switch (f.kind) {
        case formula_kind::ma:
        case formula_kind::mb:
        case formula_kind::res_a:
        case formula_kind::res_b: {
            if (!positive || x.kind != term_kind::variable) return everything();
            bool of_a = f.kind == formula_kind::ma || f.kind == formula_kind::res_a;
            auto& cache = of_a ? ma_points_ : mb_points_;
            if (!cache) {
                auto pts = model_.multiples(of_a);
                if (!pts) return everything();
                cache = set_type::points(*pts);
            }
            return *cache;
        }
        case formula_kind::eq: {
            if (!positive) return everything();
            const sg2::term& y = *f.terms[1];
            const bool in_x = mentions(x, v), in_y = mentions(y, v);
            if (in_x && in_y) return everything();
            auto target = eval(in_x ? y : x, false);
            if (!target) return set_type{};
            return invert(v, in_x ? x : y, *target);
        }
        case formula_kind::lt:
        case formula_kind::le: {
            const sg2::term& y = *f.terms[1];
            const bool in_x = mentions(x, v), in_y = mentions(y, v);
            if (in_x && in_y) return everything();
            auto other = eval(in_x ? y : x, false);
            // an undefined side makes the atom false
            if (!other) return positive ? set_type{} : everything();
            // normalize to: lhs(v) < rhs, lhs(v) <= rhs, lhs(v) > rhs or lhs(v) >= rhs
            bool strict = f.kind == formula_kind::lt;
            bool upper = in_x; // v-side is on the small side
            if (!positive) {
                upper = !upper;
                strict = !strict;
            }
            value_type limit = *other;
            if (upper) {
                if (strict) limit -= 1;
                if (limit < 0) return set_type{};
                return upper_bound(v, in_x ? x : y, limit);
            }
            if (strict) limit += 1;
            return lower_bound(v, in_x ? x : y, limit);
        }
        default: return everything();
        }
    }

    // every variable of t other than v has a value
    bool bound_except(const sg2::term& t, const std::string& v) const {
        if (t.kind == term_kind::variable) {
            if (same_name(t.name, v)) return true;
            for (const auto& m : masked_)
                if (same_name(m, t.name)) return false;
            return lookup(t.name) != nullptr;
        }
        for (const auto& x : t.args)
            if (!bound_except(*x, v)) return false;
        return true;
    }

    bool holds_quietly(const formula& f) {
        quiet_ = true;
        bool value = holds(f);
        quiet_ = false;
        return value;
    }

    // Terms built from v, sums, scalings and v-free parts are monotone in v
    // and total, so order atoms translate to bounds on v.
    std::optional<std::pair<value_type, value_type>> affine(const std::string& v, const sg2::term& t) {
        // returns (slope, offset) with t = slope*v + offset
        switch (t.kind) {
        case term_kind::variable:
            if (same_name(t.name, v)) return std::pair<value_type, value_type>{value_type(1), value_type(0)};
            break;
        case term_kind::sum: {
            auto l = mentions(*t.args[0], v) ? affine(v, *t.args[0]) : closed_part(*t.args[0]);
            if (!l) return std::nullopt;
            auto r = mentions(*t.args[1], v) ? affine(v, *t.args[1]) : closed_part(*t.args[1]);
            if (!r) return std::nullopt;
            return std::pair<value_type, value_type>{l->first + r->first, l->second + r->second};
        }
        case term_kind::scale: {
            if (!mentions(*t.args[0], v)) return closed_part(t);
            auto x = affine(v, *t.args[0]);
            if (!x) return std::nullopt;
            value_type k(t.param);
            return std::pair<value_type, value_type>{k * x->first, k * x->second};
        }
        default: break;
        }
        if (!mentions(t, v)) return closed_part(t);
        return std::nullopt;
    }

    // Body of exists y holding Ma(y) (or Mb(y)) and an equation c_y*y + c_v*v + k = 0
    // with unit c_y, c_v: v ranges over the images of the multiples.
    std::optional<set_type> project(const std::string& v, const std::string& y, const formula& body) {
        if (body.kind != formula_kind::conjunction) return std::nullopt;
        for (const auto& p : body.subs) {
            if (p->kind != formula_kind::ma && p->kind != formula_kind::mb) continue;
            const auto& arg = *p->terms[0];
            if (arg.kind != term_kind::variable || !same_name(arg.name, y)) continue;
            for (const auto& e : body.subs) {
                if (e->kind != formula_kind::eq) continue;
                auto l = linear2(v, y, *e->terms[0]), r = linear2(v, y, *e->terms[1]);
                if (!l || !r) continue;
                value_type cy = l->cy - r->cy, cv = l->cv - r->cv, k = l->k - r->k;
                if (!(cy == 1 || cy == -1) || !(cv == 1 || cv == -1)) continue;
                auto pts = model_.multiples(p->kind == formula_kind::ma);
                if (!pts) return std::nullopt;
                std::vector<value_type> xs;
                for (const auto& m : *pts) {
                    // v = -(cy*m + k)/cv
                    value_type x = -(cy * m + k) * cv;
                    if (!(x < 0) && !(bound_ < x)) xs.push_back(std::move(x));
                }
                std::sort(xs.begin(), xs.end());
                return set_type::points(xs);
            }
        }
        return std::nullopt;
    }

    struct lin2 {
        value_type cy, cv, k;
    };

    // t = cy*y + cv*v + k when t is built from y, v, sums, differences,
    // scalings and closed parts
    std::optional<lin2> linear2(const std::string& v, const std::string& y, const sg2::term& t) {
        const bool has_v = mentions(t, v), has_y = mentions(t, y);
        if (!has_v && !has_y) {
            if (!bound_except(t, v)) return std::nullopt;
            auto x = eval(t, false);
            if (!x) return std::nullopt;
            return lin2{value_type(0), value_type(0), *x};
        }
        switch (t.kind) {
        case term_kind::variable:
            if (same_name(t.name, y)) return lin2{value_type(1), value_type(0), value_type(0)};
            return lin2{value_type(0), value_type(1), value_type(0)};
        case term_kind::sum:
        case term_kind::difference: {
            auto l = linear2(v, y, *t.args[0]), r = linear2(v, y, *t.args[1]);
            if (!l || !r) return std::nullopt;
            if (t.kind == term_kind::sum) return lin2{l->cy + r->cy, l->cv + r->cv, l->k + r->k};
            return lin2{l->cy - r->cy, l->cv - r->cv, l->k - r->k};
        }
        case term_kind::scale: {
            auto x = linear2(v, y, *t.args[0]);
            if (!x) return std::nullopt;
            value_type c(t.param);
            return lin2{c * x->cy, c * x->cv, c * x->k};
        }
        default: return std::nullopt;
        }
    }

    std::optional<std::pair<value_type, value_type>> closed_part(const sg2::term& t) {
        auto x = eval(t, false);
        if (!x) return std::nullopt;
        return std::pair<value_type, value_type>{value_type(0), *x};
    }

    // v-values with t(v) <= limit
    set_type upper_bound(const std::string& v, const sg2::term& t, const value_type& limit) {
        auto lin = affine(v, t);
        if (!lin || lin->first == 0) return everything();
        if (limit < lin->second) return set_type{};
        value_type hi = (limit - lin->second) / lin->first;
        if (bound_ < hi) hi = bound_;
        return set_type::range(value_type(0), hi);
    }

    // v-values with t(v) >= limit
    set_type lower_bound(const std::string& v, const sg2::term& t, const value_type& limit) {
        auto lin = affine(v, t);
        if (!lin || lin->first == 0) return everything();
        value_type lo(0);
        if (lin->second < limit) lo = ceil_div(value_type(limit - lin->second), lin->first);
        return set_type::range(lo, bound_);
    }

    // Superset of the v-values with t(v) = target.
    set_type invert(const std::string& v, const sg2::term& t, const value_type& target) {
        if (target < 0) return set_type{};
        switch (t.kind) {
        case term_kind::variable: return set_type::point(target);
        case term_kind::sum:
        case term_kind::difference: {
            const bool in_l = mentions(*t.args[0], v), in_r = mentions(*t.args[1], v);
            if (in_l && in_r) return everything();
            auto w = eval(in_l ? *t.args[1] : *t.args[0], false);
            if (!w) return set_type{};
            if (t.kind == term_kind::sum) return invert(v, in_l ? *t.args[0] : *t.args[1], target - *w);
            // l - r = target
            if (in_l) return invert(v, *t.args[0], target + *w);
            return invert(v, *t.args[1], *w - target);
        }
        case term_kind::scale: {
            if (t.param == 0) return target == 0 ? everything() : set_type{};
            if (target % t.param != 0) return set_type{};
            return invert(v, *t.args[0], target / t.param);
        }
        case term_kind::div: return invert(v, *t.args[0], target * t.param);
        case term_kind::succ: {
            auto pre = model_.succ(-t.param, target);
            if (!pre) return set_type{};
            return invert(v, *t.args[0], *pre);
        }
        default: return everything();
        }
    }

    const Model& model_;
    std::vector<std::pair<std::string_view, value_type>> env_;
    std::deque<std::string> names_;
    std::vector<std::string_view> masked_;
    std::optional<set_type> ma_points_, mb_points_;
    bool quiet_ = false;
    std::map<const sg2::term*, std::size_t> undefined_;
    value_type bound_{};
};

/// Value of a term under the given environment, or nullopt when undefined.
template <class Model>
std::optional<typename Model::value_type> eval_term(
    const Model& model, const std::vector<std::pair<std::string, typename Model::value_type>>& env,
    const term& t) {
    evaluator<Model> ev(model);
    for (const auto& [name, v] : env) ev.bind(name, v);
    return ev.term(t);
}

template <class Model>
eval_result eval_formula(const Model& model, const formula& f,
                         const std::vector<std::pair<std::string, typename Model::value_type>>& env = {}) {
    evaluator<Model> ev(model);
    for (const auto& [name, v] : env) ev.bind(name, v);
    eval_result out;
    out.value = ev.holds(f);
    out.undefined = ev.undefined_report();
    return out;
}

} // namespace sg2
