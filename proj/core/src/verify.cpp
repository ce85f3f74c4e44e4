#include "blowkit/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace bk {

namespace {

using DVec = std::vector<double>;
using DMat = std::vector<DVec>;

template <class M>
DMat to_double(const M& m) {
    DMat out(m.r, DVec(m.c));
    for (std::size_t i = 0; i < m.r; ++i)
        for (std::size_t j = 0; j < m.c; ++j) out[i][j] = m(i, j).get_d();
    return out;
}

DVec times(const DVec& v, const DMat& m) {
    DVec out(m.empty() ? 0 : m[0].size(), 0.0);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += v[i] * m[i][j];
    return out;
}

// max_j |exp(a_j − b_j) − 1|: the relative error of exp(a) against exp(b)
double rel_error(const DVec& a, const DVec& b) {
    double e = 0;
    for (std::size_t j = 0; j < a.size(); ++j) e = std::max(e, std::abs(std::expm1(a[j] - b[j])));
    return e;
}

struct Sampler {
    std::mt19937_64 rng;
    std::uniform_real_distribution<double> u;
    Sampler(const SamplePlan& p) : rng(p.seed), u(std::log(p.lo), std::log(p.hi)) {}
    DVec log_point(std::size_t n) {
        DVec v(n);
        for (auto& x : v) x = u(rng);
        return v;
    }
};

std::string show(const DVec& logs) {
    std::ostringstream s;
    s << "(";
    for (std::size_t i = 0; i < logs.size(); ++i) s << (i ? "," : "") << std::exp(logs[i]);
    s << ")";
    return s.str();
}

void record(SampleReport& r, double err, const SamplePlan& plan, const std::string& where) {
    ++r.samples;
    if (err > r.max_error) {
        r.max_error = err;
        r.worst = where;
    }
    if (!(err <= plan.tolerance)) {
        r.ok = false;
        if (r.failures.size() < 10) {
            std::ostringstream s;
            s << where << ": relative error " << err;
            r.failures.push_back(s.str());
        }
    }
}

}  // namespace

void validate_plan(const SamplePlan& plan) {
    if (plan.points == 0) throw Error("InvalidPlan", "no sample points");
    if (!(plan.lo > 0) || !(plan.hi >= plan.lo)) throw Error("InvalidPlan", "range must be positive and ordered");
    if (!(plan.tolerance > 0)) throw Error("InvalidPlan", "tolerance must be positive");
}

SampleReport verify_transitions(const ChartAtlas& A, const SamplePlan& plan) {
    validate_plan(plan);
    SampleReport r;
    Sampler S(plan);
    auto find = [&](std::size_t from, std::size_t to) -> const Transition* {
        for (auto& t : A.transitions)
            if (t.from == from && t.to == to) return &t;
        return nullptr;
    };
    for (auto& t : A.transitions) {
        const auto* back = find(t.to, t.from);
        std::string name = "transition " + std::to_string(t.from) + "->" + std::to_string(t.to);
        if (!back) {
            r.ok = false;
            r.failures.push_back(name + ": no inverse transition");
            continue;
        }
        auto chi = to_double(t.chi), ihc = to_double(back->chi);
        auto nu1 = to_double(A.charts[t.from].nu), nu2 = to_double(A.charts[t.to].nu);
        for (std::size_t k = 0; k < plan.points; ++k) {
            DVec l = S.log_point(A.n);
            DVec l2 = times(l, chi);
            record(r, rel_error(times(l2, ihc), l), plan, name + " round trip at " + show(l));
            record(r, rel_error(times(l2, nu2), times(l, nu1)), plan, name + " blow-down at " + show(l));
        }
    }
    return r;
}

SampleReport verify_lift(const IntMat& delta, const IntMat& nu, const IntMat& mu, const SamplePlan& plan,
                         const std::vector<double>& a) {
    validate_plan(plan);
    if (nu.r != nu.c || delta.c != nu.c || mu.r != delta.r || mu.c != nu.r)
        throw Error("PreconditionFailed", "shapes of δ, ν, μ do not fit");
    if (!(mu * nu == delta)) throw Error("PreconditionFailed", "δ is not μν");
    auto inv = inverse(to_rat(nu));
    if (!inv) throw Error("PreconditionFailed", "ν is singular");
    DVec loga(delta.c, 0.0);
    if (!a.empty()) {
        if (a.size() != delta.c) throw Error("PreconditionFailed", "one coefficient per target coordinate");
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (!(a[j] > 0)) throw Error("PreconditionFailed", "coefficients must be positive");
            loga[j] = std::log(a[j]);
        }
    }
    auto d = to_double(delta), n = to_double(nu), m = to_double(mu), ni = to_double(*inv);
    SampleReport r;
    Sampler S(plan);
    DVec shift = times(loga, ni);
    for (std::size_t k = 0; k < plan.points; ++k) {
        DVec l = S.log_point(delta.r);
        DVec lt = times(l, m);
        for (std::size_t i = 0; i < lt.size(); ++i) lt[i] += shift[i];
        DVec f = times(l, d);
        for (std::size_t j = 0; j < f.size(); ++j) f[j] += loga[j];
        record(r, rel_error(times(lt, n), f), plan, "x = " + show(l));
    }
    return r;
}

}  // namespace bk
