#include "blowkit/exact.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace bk {

IntVec add(const IntVec& x, const IntVec& y) {
    if (x.size() != y.size()) throw Error("DimensionMismatch", "add");
    IntVec z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + y[i];
    return z;
}

IntVec sub(const IntVec& x, const IntVec& y) {
    if (x.size() != y.size()) throw Error("DimensionMismatch", "sub");
    IntVec z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] - y[i];
    return z;
}

IntVec scale(const IntVec& x, const Int& k) {
    IntVec z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] * k;
    return z;
}

bool is_zero(const IntVec& v) {
    return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

RatVec to_rat(const IntVec& v) {
    RatVec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i];
    return r;
}

RatMat to_rat(const IntMat& m) {
    RatMat r(m.r, m.c);
    for (std::size_t i = 0; i < m.a.size(); ++i) r.a[i] = m.a[i];
    return r;
}

IntMat stack(const std::vector<IntVec>& rows, std::size_t cols) {
    return IntMat::from_rows(rows, cols);
}

IntVec integral_multiple(const RatVec& v) {
    Int l = 1;
    for (const auto& x : v) l = lcm(l, Int(x.get_den()));
    IntVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = Int(v[i] * l);
    if (is_zero(out)) return out;
    return primitive(out);
}

std::string to_string(const IntVec& v) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i].get_str();
    os << ")";
    return os.str();
}

IntVec primitive(const IntVec& v) {
    Int g = 0;
    for (const auto& x : v) g = gcd(g, x);
    if (g == 0) throw Error("ZeroVector", "primitive of the zero vector");
    IntVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / g;
    return out;
}

namespace {

Int fdiv(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

void row_axpy(IntMat& m, std::size_t dst, std::size_t src, const Int& k) {
    // row_dst -= k * row_src
    for (std::size_t j = 0; j < m.c; ++j) m(dst, j) -= k * m(src, j);
}

}  // namespace

HNF hermite_normal_form(const IntMat& m) {
    HNF out;
    out.H = m;
    out.U = IntMat::identity(m.r);
    IntMat& H = out.H;
    IntMat& U = out.U;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.c && row < m.r; ++col) {
        while (true) {
            std::size_t best = m.r;
            for (std::size_t i = row; i < m.r; ++i)
                if (H(i, col) != 0 && (best == m.r || abs(H(i, col)) < abs(H(best, col)))) best = i;
            if (best == m.r) break;
            H.swap_rows(row, best);
            U.swap_rows(row, best);
            bool clean = true;
            for (std::size_t i = row + 1; i < m.r; ++i) {
                if (H(i, col) == 0) continue;
                Int q = fdiv(H(i, col), H(row, col));
                row_axpy(H, i, row, q);
                row_axpy(U, i, row, q);
                if (H(i, col) != 0) clean = false;
            }
            if (clean) break;
        }
        if (H(row, col) == 0) continue;
        if (H(row, col) < 0) {
            for (std::size_t j = 0; j < m.c; ++j) H(row, j) = -H(row, j);
            for (std::size_t j = 0; j < m.r; ++j) U(row, j) = -U(row, j);
        }
        for (std::size_t i = 0; i < row; ++i) {
            Int q = fdiv(H(i, col), H(row, col));
            if (q == 0) continue;
            row_axpy(H, i, row, q);
            row_axpy(U, i, row, q);
        }
        out.pivots.push_back(col);
        ++row;
    }
    out.rank = row;
    return out;
}

namespace {

bool is_diagonal(const IntMat& d) {
    for (std::size_t i = 0; i < d.r; ++i)
        for (std::size_t j = 0; j < d.c; ++j)
            if (i != j && d(i, j) != 0) return false;
    return true;
}

}  // namespace

// Alternating row/column Hermite reduction keeps intermediate entries small;
// a naive pivot-and-eliminate loop explodes already on 8×8 inputs.
SNF smith_normal_form(const IntMat& m) {
    SNF out;
    out.D = m;
    out.U = IntMat::identity(m.r);
    out.V = IntMat::identity(m.c);
    const std::size_t n = std::min(m.r, m.c);
    while (true) {
        while (!is_diagonal(out.D)) {
            HNF rows = hermite_normal_form(out.D);
            out.U = rows.U * out.U;
            HNF cols = hermite_normal_form(rows.H.transpose());
            out.D = cols.H.transpose();
            out.V = out.V * cols.U.transpose();
        }
        // diagonal now; move zeros last and repair divisibility
        bool fixed = false;
        for (std::size_t i = 0; i < n && !fixed; ++i)
            for (std::size_t j = i + 1; j < n && !fixed; ++j) {
                const Int &a = out.D(i, i), &b = out.D(j, j);
                if (a == 0 && b != 0) {
                    out.D.swap_rows(i, j);
                    out.U.swap_rows(i, j);
                    out.D.swap_cols(i, j);
                    out.V.swap_cols(i, j);
                    fixed = true;
                    continue;
                }
                if (a == 0 || b % a == 0) continue;
                // diag(a, b) → diag(g, ab/g) with g = sa + tb
                Int g, sc, tc;
                mpz_gcdext(g.get_mpz_t(), sc.get_mpz_t(), tc.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
                Int ag = a / g, bg = b / g;
                IntMat L = IntMat::identity(m.r), R = IntMat::identity(m.c);
                L(i, i) = sc, L(i, j) = tc, L(j, i) = -bg, L(j, j) = ag;
                R(i, i) = 1, R(i, j) = -tc * bg, R(j, i) = 1, R(j, j) = sc * ag;
                out.D = L * out.D * R;
                out.U = L * out.U;
                out.V = out.V * R;
                fixed = true;
            }
        if (!fixed) break;
    }
    for (std::size_t i = 0; i < n; ++i)
        if (out.D(i, i) < 0) {
            for (std::size_t j = 0; j < m.c; ++j) out.D(i, j) = -out.D(i, j);
            for (std::size_t j = 0; j < m.r; ++j) out.U(i, j) = -out.U(i, j);
        }
    return out;
}

std::vector<IntVec> saturated_kernel(const IntMat& m) {
    HNF h = hermite_normal_form(m);
    std::vector<IntVec> rows;
    for (std::size_t i = h.rank; i < m.r; ++i) rows.push_back(h.U.row(i));
    if (rows.empty()) return rows;
    HNF k = hermite_normal_form(stack(rows, m.r));
    std::vector<IntVec> out;
    for (std::size_t i = 0; i < k.rank; ++i) out.push_back(k.H.row(i));
    return out;
}

namespace {

// Reduced row echelon form over ℚ; returns pivot columns.
std::vector<std::size_t> rref(RatMat& a) {
    std::vector<std::size_t> piv;
    std::size_t row = 0;
    for (std::size_t col = 0; col < a.c && row < a.r; ++col) {
        std::size_t p = a.r;
        for (std::size_t i = row; i < a.r; ++i)
            if (a(i, col) != 0) { p = i; break; }
        if (p == a.r) continue;
        a.swap_rows(row, p);
        Rat inv = 1 / a(row, col);
        for (std::size_t j = 0; j < a.c; ++j) a(row, j) *= inv;
        for (std::size_t i = 0; i < a.r; ++i) {
            if (i == row || a(i, col) == 0) continue;
            Rat f = a(i, col);
            for (std::size_t j = 0; j < a.c; ++j) a(i, j) -= f * a(row, j);
        }
        piv.push_back(col);
        ++row;
    }
    return piv;
}

}  // namespace

std::size_t rank(const IntMat& m) {
    RatMat a = to_rat(m);
    return rref(a).size();
}

std::size_t rank(const std::vector<IntVec>& rows, std::size_t cols) {
    if (rows.empty()) return 0;
    return rank(stack(rows, cols));
}

Int determinant(const IntMat& m) {
    if (m.r != m.c) throw Error("DimensionMismatch", "determinant of non-square matrix");
    RatMat a = to_rat(m);
    Rat det = 1;
    for (std::size_t col = 0; col < a.c; ++col) {
        std::size_t p = a.r;
        for (std::size_t i = col; i < a.r; ++i)
            if (a(i, col) != 0) { p = i; break; }
        if (p == a.r) return 0;
        if (p != col) { a.swap_rows(p, col); det = -det; }
        det *= a(col, col);
        for (std::size_t i = col + 1; i < a.r; ++i) {
            if (a(i, col) == 0) continue;
            Rat f = a(i, col) / a(col, col);
            for (std::size_t j = col; j < a.c; ++j) a(i, j) -= f * a(col, j);
        }
    }
    return Int(det);
}

std::optional<RatMat> inverse(const RatMat& m) {
    if (m.r != m.c) return std::nullopt;
    const std::size_t n = m.r;
    RatMat a(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a(i, j) = m(i, j);
        a(i, n + i) = 1;
    }
    auto piv = rref(a);
    if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
    RatMat inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = a(i, n + j);
    return inv;
}

std::optional<RatVec> solve_left(const RatMat& m, const RatVec& b) {
    // x·m = b  ⇔  mᵀ xᵀ = bᵀ
    if (b.size() != m.c) throw Error("DimensionMismatch", "solve_left");
    RatMat a(m.c, m.r + 1);
    for (std::size_t i = 0; i < m.c; ++i) {
        for (std::size_t j = 0; j < m.r; ++j) a(i, j) = m(j, i);
        a(i, m.r) = b[i];
    }
    auto piv = rref(a);
    RatVec x(m.r);
    for (std::size_t k = 0; k < piv.size(); ++k) {
        if (piv[k] == m.r) return std::nullopt;
        x[piv[k]] = a(k, m.r);
    }
    return x;
}

// ---------------------------------------------------------------- LP

namespace {

struct Reduced {
    bool trivially_infeasible = false;
    std::vector<RatVec> basis;  // x = y·basis
    std::vector<RatVec> ge1;    // a·y ≥ 1 (from strict)
    std::vector<RatVec> ge0;    // a·y ≥ 0
    std::size_t m = 0;
};

Reduced reduce(const std::vector<RatVec>& strict, const std::vector<RatVec>& zero,
               const std::vector<RatVec>& nonneg, std::size_t dim) {
    for (const auto* group : {&strict, &zero, &nonneg})
        for (const auto& v : *group)
            if (v.size() != dim) throw Error("DimensionMismatch", "lp constraint length");
    Reduced r;
    if (zero.empty()) {
        for (std::size_t i = 0; i < dim; ++i) {
            RatVec e(dim);
            e[i] = 1;
            r.basis.push_back(e);
        }
    } else {
        // Basis of {x : z·x = 0}: rational kernel via RREF of the zero block.
        RatMat a(zero.size(), dim);
        for (std::size_t i = 0; i < zero.size(); ++i)
            for (std::size_t j = 0; j < dim; ++j) a(i, j) = zero[i][j];
        auto piv = rref(a);
        std::vector<bool> is_piv(dim, false);
        for (auto p : piv) is_piv[p] = true;
        for (std::size_t f = 0; f < dim; ++f) {
            if (is_piv[f]) continue;
            RatVec e(dim);
            e[f] = 1;
            for (std::size_t k = 0; k < piv.size(); ++k) e[piv[k]] = -a(k, f);
            r.basis.push_back(e);
        }
    }
    r.m = r.basis.size();
    auto project = [&](const RatVec& v) {
        RatVec p(r.m);
        for (std::size_t j = 0; j < r.m; ++j) p[j] = dot(r.basis[j], v);
        return p;
    };
    for (const auto& s : strict) {
        RatVec p = project(s);
        if (std::all_of(p.begin(), p.end(), [](const Rat& x) { return x == 0; })) {
            r.trivially_infeasible = true;
        }
        r.ge1.push_back(p);
    }
    for (const auto& s : nonneg) {
        RatVec p = project(s);
        if (std::any_of(p.begin(), p.end(), [](const Rat& x) { return x != 0; })) r.ge0.push_back(p);
    }
    return r;
}

RatVec lift(const Reduced& r, const RatVec& y, std::size_t dim) {
    RatVec x(dim);
    for (std::size_t j = 0; j < r.m; ++j)
        for (std::size_t i = 0; i < dim; ++i) x[i] += y[j] * r.basis[j][i];
    return x;
}

// coef·y ≥ rhs
struct Ineq {
    RatVec coef;
    Rat rhs;
};

struct FMOverflow {};

constexpr std::size_t kFMLimit = 4000;

std::vector<Ineq> normalize_dedupe(std::vector<Ineq> in) {
    std::map<RatVec, Rat> best;
    std::vector<Ineq> constants;
    for (auto& q : in) {
        std::size_t k = 0;
        while (k < q.coef.size() && q.coef[k] == 0) ++k;
        if (k == q.coef.size()) {
            constants.push_back(q);
            continue;
        }
        Rat s = abs(q.coef[k]);
        for (auto& x : q.coef) x /= s;
        q.rhs /= s;
        auto it = best.find(q.coef);
        if (it == best.end()) best.emplace(q.coef, q.rhs);
        else if (q.rhs > it->second) it->second = q.rhs;
    }
    std::vector<Ineq> out;
    for (auto& kv : best) out.push_back({kv.first, kv.second});
    for (auto& c : constants) out.push_back(c);
    return out;
}

std::optional<RatVec> fm_solve(std::vector<Ineq> sys, std::size_t m) {
    std::vector<std::vector<Ineq>> stages;
    for (std::size_t var = m; var-- > 0;) {
        sys = normalize_dedupe(std::move(sys));
        stages.push_back(sys);
        std::vector<Ineq> lo, hi, rest;
        for (auto& q : sys) {
            if (q.coef[var] > 0) lo.push_back(q);
            else if (q.coef[var] < 0) hi.push_back(q);
            else rest.push_back(q);
        }
        if (rest.size() + lo.size() * hi.size() > kFMLimit) throw FMOverflow{};
        for (auto& l : lo)
            for (auto& h : hi) {
                // l: a y + p x ≥ b (p>0), h: c y − q x ≥ d (q>0)
                Rat p = l.coef[var], q = -h.coef[var];
                Ineq n;
                n.coef.resize(m);
                for (std::size_t j = 0; j < m; ++j) n.coef[j] = q * l.coef[j] + p * h.coef[j];
                n.coef[var] = 0;
                n.rhs = q * l.rhs + p * h.rhs;
                rest.push_back(std::move(n));
            }
        sys = std::move(rest);
    }
    for (auto& q : sys)
        if (q.rhs > 0) return std::nullopt;
    // Back substitution, smallest variable first.
    RatVec y(m);
    for (std::size_t var = 0; var < m; ++var) {
        const auto& st = stages[m - 1 - var];
        std::optional<Rat> lo, hi;
        for (auto& q : st) {
            if (q.coef[var] == 0) continue;
            Rat acc = q.rhs;
            for (std::size_t j = 0; j < var; ++j) acc -= q.coef[j] * y[j];
            Rat bound = acc / q.coef[var];
            if (q.coef[var] > 0) {
                if (!lo || bound > *lo) lo = bound;
            } else {
                if (!hi || bound < *hi) hi = bound;
            }
        }
        if (lo) y[var] = *lo;
        else if (hi) y[var] = *hi;
        else y[var] = 0;
    }
    return y;
}

// Feasibility of {a_i·y ≥ b_i}, y free, by two-phase simplex (phase I only)
// with Bland's rule.
std::optional<RatVec> simplex_solve(const std::vector<Ineq>& sys, std::size_t m) {
    const std::size_t r = sys.size();
    if (r == 0) return RatVec(m);
    // columns: p (m), q (m), slack (r), artificial (r), rhs
    const std::size_t np = 2 * m + r, ncol = np + r;
    RatMat T(r + 1, ncol + 1);
    std::vector<std::size_t> basis(r);
    for (std::size_t i = 0; i < r; ++i) {
        Rat sign = sys[i].rhs < 0 ? -1 : 1;
        for (std::size_t j = 0; j < m; ++j) {
            T(i, j) = sign * sys[i].coef[j];
            T(i, m + j) = -sign * sys[i].coef[j];
        }
        T(i, 2 * m + i) = -sign;
        T(i, np + i) = 1;
        T(i, ncol) = sign * sys[i].rhs;
        basis[i] = np + i;
    }
    // objective row: minimize Σ artificial → reduced costs
    for (std::size_t j = 0; j <= ncol; ++j) {
        Rat s = 0;
        for (std::size_t i = 0; i < r; ++i) s += T(i, j);
        T(r, j) = (j >= np && j < ncol) ? Rat(0) : -s;
    }
    while (true) {
        std::size_t enter = ncol;
        for (std::size_t j = 0; j < ncol; ++j)
            if (T(r, j) < 0) { enter = j; break; }
        if (enter == ncol) break;
        std::size_t leave = r;
        Rat best;
        for (std::size_t i = 0; i < r; ++i) {
            if (T(i, enter) <= 0) continue;
            Rat ratio = T(i, ncol) / T(i, enter);
            if (leave == r || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == r) break;  // unbounded direction cannot occur in phase I
        Rat pv = T(leave, enter);
        for (std::size_t j = 0; j <= ncol; ++j) T(leave, j) /= pv;
        for (std::size_t i = 0; i <= r; ++i) {
            if (i == leave || T(i, enter) == 0) continue;
            Rat f = T(i, enter);
            for (std::size_t j = 0; j <= ncol; ++j) T(i, j) -= f * T(leave, j);
        }
        basis[leave] = enter;
    }
    if (T(r, ncol) != 0) return std::nullopt;
    RatVec y(m);
    for (std::size_t i = 0; i < r; ++i) {
        if (basis[i] < m) y[basis[i]] += T(i, ncol);
        else if (basis[i] < 2 * m) y[basis[i] - m] -= T(i, ncol);
    }
    return y;
}

std::vector<Ineq> build(const Reduced& r) {
    std::vector<Ineq> sys;
    for (auto& a : r.ge1) sys.push_back({a, Rat(1)});
    for (auto& a : r.ge0) sys.push_back({a, Rat(0)});
    return sys;
}

LPResult finish(const Reduced& r, const std::optional<RatVec>& y, std::size_t dim) {
    LPResult out;
    if (!y) return out;
    out.feasible = true;
    out.witness = lift(r, *y, dim);
    return out;
}

}  // namespace

LPResult lp_feasible_fm(const std::vector<RatVec>& strict, const std::vector<RatVec>& zero,
                        const std::vector<RatVec>& nonneg, std::size_t dim) {
    Reduced r = reduce(strict, zero, nonneg, dim);
    if (r.trivially_infeasible) return {};
    if (strict.empty()) return {true, RatVec(dim)};
    return finish(r, fm_solve(build(r), r.m), dim);
}

LPResult lp_feasible_simplex(const std::vector<RatVec>& strict, const std::vector<RatVec>& zero,
                             const std::vector<RatVec>& nonneg, std::size_t dim) {
    Reduced r = reduce(strict, zero, nonneg, dim);
    if (r.trivially_infeasible) return {};
    if (strict.empty()) return {true, RatVec(dim)};
    return finish(r, simplex_solve(build(r), r.m), dim);
}

LPResult lp_feasible(const std::vector<RatVec>& strict, const std::vector<RatVec>& zero,
                     const std::vector<RatVec>& nonneg, std::size_t dim) {
    Reduced r = reduce(strict, zero, nonneg, dim);
    if (r.trivially_infeasible) return {};
    if (strict.empty()) return {true, RatVec(dim)};
    auto sys = build(r);
    if (r.m <= 8) {
        try {
            return finish(r, fm_solve(sys, r.m), dim);
        } catch (const FMOverflow&) {
            // elimination blew up; the simplex path below is exact too
        }
    }
    return finish(r, simplex_solve(sys, r.m), dim);
}

}  // namespace bk
