#include "blowkit/cone.hpp"

#include <algorithm>

namespace bk {

namespace {

using Bits = std::vector<bool>;

struct Ray {
    IntVec v;
    Bits tight;
};

bool subset(const Bits& a, const Bits& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] && !b[i]) return false;
    return true;
}

}  // namespace

std::vector<IntVec> extreme_rays(const std::vector<IntVec>& A, std::size_t n) {
    const std::size_t q = A.size();
    if (n == 0) return {};
    // greedy row basis, lowest index first
    std::vector<std::size_t> basis;
    std::vector<IntVec> chosen;
    for (std::size_t i = 0; i < q && basis.size() < n; ++i) {
        if (is_zero(A[i])) continue;
        chosen.push_back(A[i]);
        if (rank(chosen, n) == chosen.size()) basis.push_back(i);
        else chosen.pop_back();
    }
    if (basis.size() < n) throw Error("NotPointed", "constraint matrix has rank < dimension");
    auto inv = inverse(to_rat(stack(chosen, n)));
    std::vector<Ray> rays;
    for (std::size_t j = 0; j < n; ++j) {
        RatVec col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = (*inv)(i, j);
        Ray r{integral_multiple(col), Bits(q, false)};
        for (std::size_t k = 0; k < n; ++k)
            if (k != j) r.tight[basis[k]] = true;
        rays.push_back(std::move(r));
    }
    std::vector<bool> done(q, false);
    for (auto b : basis) done[b] = true;
    for (std::size_t i = 0; i < q; ++i) {
        if (done[i]) continue;
        done[i] = true;
        const IntVec& a = A[i];
        std::vector<Int> s(rays.size());
        std::vector<std::size_t> pos, neg;
        std::vector<Ray> next;
        for (std::size_t j = 0; j < rays.size(); ++j) {
            s[j] = dot(a, rays[j].v);
            if (s[j] > 0) pos.push_back(j);
            else if (s[j] < 0) neg.push_back(j);
        }
        if (neg.empty()) {
            for (std::size_t j = 0; j < rays.size(); ++j)
                if (s[j] == 0) rays[j].tight[i] = true;
            continue;
        }
        for (std::size_t j = 0; j < rays.size(); ++j) {
            if (s[j] < 0) continue;
            Ray r = rays[j];
            if (s[j] == 0) r.tight[i] = true;
            next.push_back(std::move(r));
        }
        for (auto p : pos)
            for (auto m : neg) {
                Bits common(q, false);
                std::size_t cnt = 0;
                for (std::size_t k = 0; k < q; ++k)
                    if (rays[p].tight[k] && rays[m].tight[k]) common[k] = true, ++cnt;
                if (cnt + 2 < n) continue;
                bool adjacent = true;
                for (std::size_t k = 0; k < rays.size() && adjacent; ++k)
                    if (k != p && k != m && subset(common, rays[k].tight)) adjacent = false;
                if (!adjacent) continue;
                IntVec v(n);
                for (std::size_t k = 0; k < n; ++k) v[k] = s[p] * rays[m].v[k] - s[m] * rays[p].v[k];
                common[i] = true;
                next.push_back({primitive(v), std::move(common)});
            }
        rays = std::move(next);
        if (rays.empty()) break;
    }
    std::vector<IntVec> out;
    for (auto& r : rays) out.push_back(r.v);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<IntVec> saturate(const std::vector<IntVec>& rows, std::size_t n) {
    std::vector<IntVec> nz;
    for (auto& r : rows)
        if (!is_zero(r)) nz.push_back(r);
    if (nz.empty()) return {};
    // annihilator K of span(rows), then the integral vectors killed by K
    auto K = saturated_kernel(stack(nz, n).transpose());
    if (K.empty()) {
        std::vector<IntVec> id;
        for (std::size_t i = 0; i < n; ++i) {
            IntVec e(n);
            e[i] = 1;
            id.push_back(e);
        }
        return id;
    }
    return saturated_kernel(stack(K, n).transpose());
}

}  // namespace bk
