#include "heegner/padic_oracle.hpp"

#include <algorithm>
#include <cassert>

#include "heegner/localdata.hpp"

namespace heegner {
namespace oracle {

namespace {

std::uint64_t pow_u64(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < e; ++i) r *= b;
    return r;
}

std::uint64_t mod_reduce(std::int64_t x, std::uint64_t mod) {
    std::int64_t m = (std::int64_t)mod;
    std::int64_t r = x % m;
    if (r < 0) r += m;
    return (std::uint64_t)r;
}

// valuation of a residue; 0 has valuation cap
unsigned val_of(std::uint64_t x, std::int64_t p, unsigned cap) {
    if (x == 0) return cap;
    unsigned v = 0;
    while (x % (std::uint64_t)p == 0 && v < cap) {
        x /= (std::uint64_t)p;
        ++v;
    }
    return v;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t mod) {
    // extended gcd; a must be a unit
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = (std::int64_t)mod, new_r = (std::int64_t)(a % mod);
    while (new_r != 0) {
        std::int64_t q = r / new_r;
        std::int64_t tmp = t - q * new_t;
        t = new_t;
        new_t = tmp;
        tmp = r - q * new_r;
        r = new_r;
        new_r = tmp;
    }
    if (r != 1) throw std::logic_error("inv_mod: not a unit");
    if (t < 0) t += (std::int64_t)mod;
    return (std::uint64_t)t;
}

Vec4 scale(const Vec4& a, std::uint64_t c, std::uint64_t mod) {
    Vec4 r;
    for (int i = 0; i < 4; ++i) r[i] = (a[i] * c) % mod;
    return r;
}

Vec4 sub(const Vec4& a, const Vec4& b, std::uint64_t mod) {
    Vec4 r;
    for (int i = 0; i < 4; ++i) r[i] = (a[i] + mod - b[i] % mod) % mod;
    return r;
}

Vec4 add(const Vec4& a, const Vec4& b, std::uint64_t mod) {
    Vec4 r;
    for (int i = 0; i < 4; ++i) r[i] = (a[i] + b[i]) % mod;
    return r;
}

std::int64_t smallest_nonresidue(std::int64_t p) {
    for (std::int64_t u = 2; u < p; ++u)
        if (kronecker_symbol(u, p) == -1) return u;
    throw std::logic_error("smallest_nonresidue: no non-residue found");
}

std::vector<FiniteRingModel::BasisRow> howell_form(std::vector<Vec4> gens, std::int64_t p, unsigned k,
                                                   std::uint64_t pk) {
    std::vector<FiniteRingModel::BasisRow> rows;
    std::vector<Vec4> remaining;
    for (auto& g : gens) {
        Vec4 r;
        bool nonzero = false;
        for (int i = 0; i < 4; ++i) {
            r[i] = g[i] % pk;
            nonzero |= r[i] != 0;
        }
        if (nonzero) remaining.push_back(r);
    }
    for (int col = 0; col < 4; ++col) {
        unsigned best_val = k;
        std::size_t best = remaining.size();
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            unsigned v = val_of(remaining[i][col], p, k);
            if (v < best_val) {
                best_val = v;
                best = i;
            }
        }
        if (best == remaining.size()) continue;
        Vec4 pivot = remaining[best];
        remaining.erase(remaining.begin() + best);
        std::uint64_t pv = pow_u64((std::uint64_t)p, best_val);
        std::uint64_t unit = pivot[col] / pv;
        pivot = scale(pivot, inv_mod(unit, pk), pk);
        for (auto& r : remaining) {
            if (r[col] == 0) continue;
            std::uint64_t q = r[col] / pv;
            r = sub(r, scale(pivot, q, pk), pk);
        }
        if (best_val > 0) {
            // p^(k-v) * pivot generates relations in later columns
            Vec4 closure = scale(pivot, pow_u64((std::uint64_t)p, k - best_val), pk);
            bool nonzero = closure[0] || closure[1] || closure[2] || closure[3];
            if (nonzero) remaining.push_back(closure);
        }
        rows.push_back({col, best_val, pivot});
    }
    return rows;
}

}  // namespace

Vec4 FiniteRingModel::mul(const Vec4& a, const Vec4& b) const {
    Vec4 r;
    if (kind == ModelKind::Division) {
        auto cmul = [this](std::uint64_t a0, std::uint64_t a1, std::uint64_t b0, std::uint64_t b1) {
            std::uint64_t lo = (a0 * b0 + delta * ((a1 * b1) % pk)) % pk;
            std::uint64_t hi = (a0 * b1 + a1 * b0 + eps * ((a1 * b1) % pk)) % pk;
            return std::pair<std::uint64_t, std::uint64_t>(lo, hi);
        };
        auto cconj = [this](std::uint64_t a0, std::uint64_t a1) {
            return std::pair<std::uint64_t, std::uint64_t>((a0 + eps * a1) % pk, (pk - a1 % pk) % pk);
        };
        auto [x2c0, x2c1] = cconj(b[0], b[1]);
        auto [y2c0, y2c1] = cconj(b[2], b[3]);
        auto [m1lo, m1hi] = cmul(a[0], a[1], b[0], b[1]);       // x1 x2
        auto [m2lo, m2hi] = cmul(a[2], a[3], y2c0, y2c1);       // y1 conj(y2)
        auto [m3lo, m3hi] = cmul(a[0], a[1], b[2], b[3]);       // x1 y2
        auto [m4lo, m4hi] = cmul(a[2], a[3], x2c0, x2c1);       // y1 conj(x2)
        std::uint64_t pp = (std::uint64_t)p;
        r[0] = (m1lo + pp * m2lo) % pk;
        r[1] = (m1hi + pp * m2hi) % pk;
        r[2] = (m3lo + m4lo) % pk;
        r[3] = (m3hi + m4hi) % pk;
        return r;
    }
    r[0] = (a[0] * b[0] + a[1] * b[2]) % pk;
    r[1] = (a[0] * b[1] + a[1] * b[3]) % pk;
    r[2] = (a[2] * b[0] + a[3] * b[2]) % pk;
    r[3] = (a[2] * b[1] + a[3] * b[3]) % pk;
    return r;
}

std::uint64_t FiniteRingModel::trd(const Vec4& a) const {
    if (kind == ModelKind::Division) return (2 * a[0] + eps * a[1]) % pk;
    return (a[0] + a[3]) % pk;
}

std::uint64_t FiniteRingModel::nrd(const Vec4& a) const {
    if (kind == ModelKind::Division) {
        auto nr = [this](std::uint64_t a0, std::uint64_t a1) {
            std::uint64_t s = (a0 * a0 + eps * ((a0 * a1) % pk)) % pk;
            std::uint64_t d = (delta * ((a1 * a1) % pk)) % pk;
            return (s + pk - d) % pk;
        };
        std::uint64_t nx = nr(a[0], a[1]);
        std::uint64_t ny = nr(a[2], a[3]);
        return (nx + pk - ((std::uint64_t)p * ny) % pk) % pk;
    }
    std::uint64_t adp = (a[0] * a[3]) % pk;
    std::uint64_t bcp = (a[1] * a[2]) % pk;
    return (adp + pk - bcp) % pk;
}

Vec4 FiniteRingModel::conj(const Vec4& a) const {
    std::uint64_t t = trd(a);
    Vec4 r;
    for (int i = 0; i < 4; ++i) r[i] = ((t * one[i]) % pk + pk - a[i]) % pk;
    return r;
}

bool FiniteRingModel::in_order(Vec4 z, unsigned precision) const {
    if (precision > k) precision = k;
    if (precision == 0) return true;
    std::uint64_t pj = pow_u64((std::uint64_t)p, precision);
    for (int i = 0; i < 4; ++i) z[i] %= pj;
    for (auto& row : basis_at[precision]) {
        std::uint64_t pv = pow_u64((std::uint64_t)p, row.pivot_val);
        std::uint64_t a = z[row.pivot_col];
        if (a % pv != 0) return false;
        std::uint64_t c = a / pv;
        for (int i = 0; i < 4; ++i) z[i] = (z[i] + pj - ((c * row.row[i]) % pj)) % pj;
    }
    return z[0] == 0 && z[1] == 0 && z[2] == 0 && z[3] == 0;
}

LocalOrderDescriptor local_descriptor(std::int64_t p, std::optional<LocalQuadExt> k_class, std::int64_t m) {
    std::int64_t pm = 1;
    for (std::int64_t i = 0; i < m; ++i) pm *= p;
    if (!k_class) return {pm, 0};
    std::int64_t p2m = pm * pm;
    switch (*k_class) {
        case LocalQuadExt::Unramified:
            if (p == 2) return {pm, -p2m};
            return {0, -p2m * smallest_nonresidue(p)};
        case LocalQuadExt::RamifiedPrime: return {0, -p2m * p};
        case LocalQuadExt::RamifiedUnit: return {0, -p2m * p * smallest_nonresidue(p)};
        case LocalQuadExt::Sqrt3: return {0, -3 * p2m};
        case LocalQuadExt::Sqrt7: return {0, -7 * p2m};
        case LocalQuadExt::Sqrt2: return {0, -2 * p2m};
        case LocalQuadExt::Sqrt6: return {0, -6 * p2m};
        case LocalQuadExt::Sqrt10: return {0, -10 * p2m};
        case LocalQuadExt::Sqrt14: return {0, -14 * p2m};
    }
    throw std::logic_error("local_descriptor: unreachable");
}

unsigned precision_policy(unsigned n, std::int64_t m) { return n + 2 * (unsigned)m + 2; }

namespace {

// Find b = b0 + b1 w with Nr(b) = u mod p^k, via a mod-p point with unit
// derivative in b0 followed by a Newton lift.
std::pair<std::uint64_t, std::uint64_t> solve_norm(std::int64_t p, unsigned k, std::uint64_t pk,
                                                   std::uint64_t eps, std::uint64_t delta, std::uint64_t u) {
    std::uint64_t pp = (std::uint64_t)p;
    auto nr = [&](std::uint64_t a0, std::uint64_t a1) {
        return (a0 * a0 + eps * ((a0 * a1) % pk) + pk * pk % pk + pk - (delta * ((a1 * a1) % pk)) % pk) % pk;
    };
    for (std::uint64_t b1 = 0; b1 < pp; ++b1) {
        for (std::uint64_t b0 = 0; b0 < pp; ++b0) {
            if ((nr(b0, b1) + pk - u % pk) % pp != 0) continue;
            std::uint64_t deriv = (2 * b0 + eps * b1) % pp;
            if (deriv == 0) continue;
            // Newton lift in b0
            std::uint64_t x = b0;
            for (int it = 0; it < 200; ++it) {
                std::uint64_t f = (nr(x, b1) + pk - u % pk) % pk;
                if (f == 0) return {x, b1};
                std::uint64_t d = (2 * x + eps * b1) % pk;
                x = (x + pk - (f * inv_mod(d, pk)) % pk) % pk;
            }
            throw std::runtime_error("solve_norm: Newton lift failed to converge; raise precision");
        }
    }
    throw std::runtime_error("solve_norm: no norm representative found at this precision");
}

Vec4 division_embedding(std::int64_t p, unsigned k, std::uint64_t pk, std::uint64_t eps, std::uint64_t delta,
                        LocalQuadExt l) {
    switch (t_symbol(l)) {
        case -1:
            return {0, 1, 0, 0};
        case 0: {
            std::uint64_t u = (l == LocalQuadExt::RamifiedPrime)
                                  ? 1
                                  : (std::uint64_t)smallest_nonresidue(p) % pk;
            auto [b0, b1] = solve_norm(p, k, pk, eps, delta, u);
            return {0, 0, b0, b1};
        }
        case 1: {
            // g = (2w - 1) + b j with g^2 = 5 + 2 Nr(b); Nr(w) = -1, Nr(1) = 1
            Vec4 g{pk - 1, 2 % pk, 0, 0};
            if (l == LocalQuadExt::Sqrt3) {
                g[2] = 0;
                g[3] = 1;
            } else {  // Sqrt7
                g[2] = 1;
                g[3] = 0;
            }
            return g;
        }
        default: {
            std::uint64_t u = 0;
            switch (l) {
                case LocalQuadExt::Sqrt2: u = 1; break;
                case LocalQuadExt::Sqrt6: u = 3; break;
                case LocalQuadExt::Sqrt10: u = 5; break;
                default: u = 7; break;
            }
            auto [b0, b1] = solve_norm(p, k, pk, eps, delta, u % pk);
            return {0, 0, b0, b1};
        }
    }
}

}  // namespace

FiniteRingModel build_model(ModelKind kind, std::int64_t p, unsigned n, unsigned k,
                            std::optional<LocalQuadExt> l) {
    if (p < 2) throw std::invalid_argument("build_model: p must be prime");
    if (k < n + 2) throw std::invalid_argument("build_model: precision must be at least n + 2");
    std::uint64_t pk = pow_u64((std::uint64_t)p, k);
    if (pk >= (1ull << 26)) throw std::invalid_argument("build_model: p^k too large for the coordinate type");

    FiniteRingModel m;
    m.kind = kind;
    m.p = p;
    m.k = k;
    m.n = n;
    m.pk = pk;
    if (p == 2) {
        m.eps = 1;
        m.delta = 1;
    } else {
        m.eps = 0;
        m.delta = mod_reduce(smallest_nonresidue(p), pk);
    }

    std::vector<Vec4> gens;
    std::uint64_t pn = pow_u64((std::uint64_t)p, n);
    switch (kind) {
        case ModelKind::Eichler: {
            m.one = {1, 0, 0, 1};
            gens = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, pn % pk, 0}, {0, 0, 0, 1}};
            break;
        }
        case ModelKind::Cartan: {
            if (n < 1) throw std::invalid_argument("build_model: Cartan level exponent must be >= 1");
            m.one = {1, 0, 0, 1};
            Vec4 w{0, m.delta, 1, m.eps};
            gens = {m.one, w};
            for (int i = 0; i < 4; ++i) {
                Vec4 e{};
                e[i] = pn % pk;
                gens.push_back(e);
            }
            break;
        }
        case ModelKind::Division: {
            if (n < 1) throw std::invalid_argument("build_model: division level exponent must be >= 1");
            if (!l) throw std::invalid_argument("build_model: division model needs an L class");
            if (p == 2 && (*l == LocalQuadExt::RamifiedUnit || *l == LocalQuadExt::RamifiedPrime))
                throw std::invalid_argument("build_model: odd-p ramified class used at p = 2");
            if (p != 2 && t_symbol(*l) > 0)
                throw std::invalid_argument("build_model: p = 2 class used at odd p");
            m.one = {1, 0, 0, 0};
            m.l_class = *l;
            m.embed_gen = division_embedding(p, k, pk, m.eps, m.delta, *l);
            unsigned a = n / 2;        // ceil((n-1)/2)
            unsigned b = (n - 1) / 2;  // floor((n-1)/2)
            std::uint64_t pa = pow_u64((std::uint64_t)p, a) % pk;
            std::uint64_t pb = pow_u64((std::uint64_t)p, b) % pk;
            gens = {m.one, m.embed_gen, {pa, 0, 0, 0}, {0, pa, 0, 0}, {0, 0, pb, 0}, {0, 0, 0, pb}};
            break;
        }
    }
    m.basis = howell_form(gens, p, k, pk);
    m.basis_at.resize(k + 1);
    for (unsigned j = 1; j <= k; ++j) {
        std::vector<Vec4> reduced = gens;
        std::uint64_t pj = pow_u64((std::uint64_t)p, j);
        for (auto& g : reduced)
            for (auto& c : g) c %= pj;
        m.basis_at[j] = howell_form(reduced, p, j, pj);
    }

    if (kind == ModelKind::Division) {
        // the embedded generator must satisfy its characteristic polynomial exactly
        auto d0 = local_descriptor(p, m.l_class, 0);
        Vec4 g2 = m.mul(m.embed_gen, m.embed_gen);
        std::uint64_t t = mod_reduce(d0.trace, pk), nm = mod_reduce(d0.norm, pk);
        for (int i = 0; i < 4; ++i) {
            std::uint64_t lhs = (g2[i] + pk - (t * m.embed_gen[i]) % pk + (nm * m.one[i]) % pk) % pk;
            if (lhs != 0) throw std::logic_error("build_model: embedded generator fails its minimal polynomial");
        }
    }
    return m;
}

namespace {

struct AffineSolutions {
    bool consistent = false;
    std::array<std::uint64_t, 4> particular{};
    std::vector<std::array<std::uint64_t, 4>> kernel;
};

// Solve A x = b over F_p (A given column-major as columns[j][i]).
AffineSolutions solve_mod_p(std::array<Vec4, 4> columns, Vec4 b, std::uint64_t p) {
    // build row-major augmented matrix
    std::array<std::array<std::uint64_t, 5>, 4> m{};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) m[i][j] = columns[j][i] % p;
        m[i][4] = b[i] % p;
    }
    std::array<int, 4> pivot_col{-1, -1, -1, -1};
    int rank = 0;
    for (int col = 0; col < 4 && rank < 4; ++col) {
        int sel = -1;
        for (int i = rank; i < 4; ++i)
            if (m[i][col] != 0) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        std::swap(m[sel], m[rank]);
        std::uint64_t inv = inv_mod(m[rank][col], p);
        for (int j = col; j <= 4; ++j) m[rank][j] = (m[rank][j] * inv) % p;
        for (int i = 0; i < 4; ++i) {
            if (i == rank || m[i][col] == 0) continue;
            std::uint64_t f = m[i][col];
            for (int j = col; j <= 4; ++j) m[i][j] = (m[i][j] + p - (f * m[rank][j]) % p) % p;
        }
        pivot_col[rank] = col;
        ++rank;
    }
    AffineSolutions sol;
    for (int i = rank; i < 4; ++i)
        if (m[i][4] != 0) return sol;  // inconsistent
    sol.consistent = true;
    std::array<bool, 4> is_pivot{};
    for (int r = 0; r < rank; ++r) {
        sol.particular[pivot_col[r]] = m[r][4];
        is_pivot[pivot_col[r]] = true;
    }
    for (int col = 0; col < 4; ++col) {
        if (is_pivot[col]) continue;
        std::array<std::uint64_t, 4> kv{};
        kv[col] = 1;
        for (int r = 0; r < rank; ++r) kv[pivot_col[r]] = (p - m[r][col] % p) % p;
        sol.kernel.push_back(kv);
    }
    return sol;
}

// Enumerates witnesses stratified by their exact p-divisibility. A witness
// y (image of the conductor p^m generator) factors as y = p^e v with
// 0 <= e <= m and v outside p * Lambda; on each stratum v satisfies the
// divided characteristic polynomial with full strength mod p^(k-2e), the
// membership condition is p^e v in the order, and optimality means p^(e-1) v
// stays outside it (automatic for e = 0). Keeping v away from 0 mod p makes
// every stratum tree non-degenerate, so the level-by-level lift stays narrow.
struct Enumerator {
    const FiniteRingModel& model;
    std::int64_t trace0, norm0;  // descriptor of p^m omega
    std::int64_t m;
    bool existence_only;
    unsigned trunc;  // canonical witness precision (count mode)
    bool found = false;
    std::uint64_t nodes = 0;
    std::vector<Vec4> witnesses;  // canonical truncations, count mode only

    // per-stratum state
    std::int64_t e = 0;
    unsigned depth = 0;      // v is lifted to this level: k - 2e
    std::uint64_t pe = 1;    // p^e
    std::uint64_t t = 0, nm = 0;

    Enumerator(const FiniteRingModel& mo, const LocalOrderDescriptor& d, std::int64_t mm, bool exist_only,
               unsigned trunc_precision)
        : model(mo),
          trace0(d.trace),
          norm0(d.norm),
          m(mm),
          existence_only(exist_only),
          trunc(trunc_precision) {}

    Vec4 charpoly_value(const Vec4& v) const {
        Vec4 v2 = model.mul(v, v);
        Vec4 r;
        for (int i = 0; i < 4; ++i)
            r[i] = (v2[i] + model.pk - (t * v[i]) % model.pk + (nm * model.one[i]) % model.pk) % model.pk;
        return r;
    }

    bool charpoly_ok(const Vec4& v, unsigned j) const {
        Vec4 r = charpoly_value(v);
        std::uint64_t pj = pow_u64((std::uint64_t)model.p, j);
        return r[0] % pj == 0 && r[1] % pj == 0 && r[2] % pj == 0 && r[3] % pj == 0;
    }

    bool member_ok(const Vec4& v, unsigned j) const {
        unsigned prec = std::min(model.k, j + (unsigned)e);
        return model.in_order(scale(v, pe, model.pk), prec);
    }

    bool optimal(const Vec4& v) const {
        if (m == 0 || e == 0) return true;
        std::uint64_t pe1 = pe / (std::uint64_t)model.p;
        return !model.in_order(scale(v, pe1, model.pk), model.k - (unsigned)e);
    }

    void take(const Vec4& v) {
        if (existence_only) {
            found = true;
            return;
        }
        std::uint64_t pj = pow_u64((std::uint64_t)model.p, trunc);
        Vec4 y = scale(v, pe, model.pk);
        for (auto& c : y) c %= pj;
        witnesses.push_back(y);
    }

    void dfs(const Vec4& v, unsigned j) {
        if (found) return;
        if (++nodes > node_cap)
            throw OracleBudgetExceeded("oracle enumeration exceeded the node cap");
        if (j == depth) {
            if (optimal(v)) take(v);
            return;
        }
        std::uint64_t pp = (std::uint64_t)model.p;
        std::uint64_t pj = pow_u64(pp, j);
        Vec4 fv = charpoly_value(v);
        Vec4 rhs;  // -f(v)/p^j mod p
        for (int i = 0; i < 4; ++i) rhs[i] = (pp - (fv[i] / pj) % pp) % pp;
        std::array<Vec4, 4> cols;
        for (int i = 0; i < 4; ++i) {
            Vec4 ei{};
            ei[i] = 1;
            Vec4 le = add(model.mul(v, ei), model.mul(ei, v), model.pk);
            for (int c = 0; c < 4; ++c) le[c] = (le[c] + model.pk - (t * ei[c]) % model.pk) % model.pk;
            for (int c = 0; c < 4; ++c) cols[i][c] = le[c] % pp;
        }
        AffineSolutions sol = solve_mod_p(cols, rhs, pp);
        if (!sol.consistent) return;
        std::size_t kdim = sol.kernel.size();
        std::uint64_t combos = pow_u64(pp, (unsigned)kdim);
        for (std::uint64_t idx = 0; idx < combos; ++idx) {
            std::array<std::uint64_t, 4> delta = sol.particular;
            std::uint64_t rem = idx;
            for (std::size_t kv = 0; kv < kdim; ++kv) {
                std::uint64_t c = rem % pp;
                rem /= pp;
                if (c)
                    for (int i = 0; i < 4; ++i) delta[i] = (delta[i] + c * sol.kernel[kv][i]) % pp;
            }
            Vec4 child;
            for (int i = 0; i < 4; ++i) child[i] = (v[i] + pj * delta[i]) % model.pk;
            if (!member_ok(child, j + 1)) continue;
            if (!charpoly_ok(child, j + 1)) continue;
            dfs(child, j + 1);
            if (found) return;
        }
    }

    void run() {
        std::uint64_t pp = (std::uint64_t)model.p;
        // strata by exact divisibility, smooth stratum first
        for (e = m; e >= 0; --e) {
            std::int64_t pe_i = 1;
            for (std::int64_t i = 0; i < e; ++i) pe_i *= model.p;
            pe = (std::uint64_t)pe_i % model.pk;
            t = mod_reduce(trace0 / pe_i, model.pk);
            nm = mod_reduce(norm0 / (pe_i * pe_i), model.pk);
            depth = model.k - 2 * (unsigned)e;
            Vec4 v{};
            for (v[0] = 0; v[0] < pp; ++v[0])
                for (v[1] = 0; v[1] < pp; ++v[1])
                    for (v[2] = 0; v[2] < pp; ++v[2])
                        for (v[3] = 0; v[3] < pp; ++v[3]) {
                            if (v[0] == 0 && v[1] == 0 && v[2] == 0 && v[3] == 0) continue;
                            if (!member_ok(v, 1)) continue;
                            if (!charpoly_ok(v, 1)) continue;
                            dfs(v, 1);
                            if (found) return;
                        }
        }
    }
};

// |kernel| and generators of {c in (Z/p^k)^4 : M c = 0}, M column-major.
struct KernelInfo {
    std::vector<Vec4> gens;
    std::uint64_t size = 1;
};

KernelInfo kernel_mod_pk(std::array<Vec4, 4> cols, std::int64_t p, unsigned k, std::uint64_t pk) {
    // rows[i][j] = entry (i, j)
    std::array<std::array<std::uint64_t, 4>, 4> a{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) a[i][j] = cols[j][i] % pk;
    // v tracks column operations: column j of the transformed matrix equals
    // the original matrix applied to v-column j
    std::array<std::array<std::uint64_t, 4>, 4> v{};
    for (int i = 0; i < 4; ++i) v[i][i] = 1;
    std::array<unsigned, 4> divisors;
    divisors.fill(k);
    std::uint64_t pp = (std::uint64_t)p;
    for (int step = 0; step < 4; ++step) {
        unsigned best_val = k;
        int bi = -1, bj = -1;
        for (int i = step; i < 4; ++i)
            for (int j = step; j < 4; ++j) {
                unsigned vv = val_of(a[i][j], p, k);
                if (vv < best_val) {
                    best_val = vv;
                    bi = i;
                    bj = j;
                }
            }
        if (bi < 0) break;
        // move pivot to (step, step)
        for (int j = 0; j < 4; ++j) std::swap(a[bi][j], a[step][j]);
        for (int i = 0; i < 4; ++i) {
            std::swap(a[i][bj], a[i][step]);
            std::swap(v[i][bj], v[i][step]);
        }
        std::uint64_t pv = pow_u64(pp, best_val);
        std::uint64_t unit = a[step][step] / pv;
        std::uint64_t ui = inv_mod(unit, pk);
        for (int j = 0; j < 4; ++j) a[step][j] = (a[step][j] * ui) % pk;  // row scaling
        for (int i = step + 1; i < 4; ++i) {
            if (a[i][step] == 0) continue;
            std::uint64_t q = a[i][step] / pv;
            for (int j = 0; j < 4; ++j) a[i][j] = (a[i][j] + pk - (q * a[step][j]) % pk) % pk;
        }
        for (int j = step + 1; j < 4; ++j) {
            if (a[step][j] == 0) continue;
            std::uint64_t q = a[step][j] / pv;
            for (int i = 0; i < 4; ++i) {
                a[i][j] = (a[i][j] + pk - (q * a[i][step]) % pk) % pk;
                v[i][j] = (v[i][j] + pk - (q * v[i][step]) % pk) % pk;
            }
        }
        divisors[step] = best_val;
    }
    KernelInfo info;
    for (int j = 0; j < 4; ++j) {
        unsigned s = divisors[j];
        info.size *= pow_u64(pp, s);
        if (s == 0) continue;
        Vec4 g;
        std::uint64_t lift = pow_u64(pp, k - s);
        for (int i = 0; i < 4; ++i) g[i] = (v[i][j] * lift) % pk;
        info.gens.push_back(g);
    }
    return info;
}

// Counts unit-conjugation orbits of the witness set at working precision jj
// via the orbit-stabilizer identity: #orbits = sum over witnesses of the
// stabilizer order divided by the unit group order. The witness set is
// conjugation-closed, so the division is exact.
std::int64_t count_classes(const FiniteRingModel& model, const std::vector<Vec4>& witnesses, unsigned jj) {
    if (witnesses.empty()) return 0;
    std::uint64_t pp = (std::uint64_t)model.p;
    std::uint64_t pj = pow_u64(pp, jj);
    // unit residues of the order: Nrd must be a unit mod p
    std::uint64_t unit_residues = 0;
    std::uint64_t total_res = pow_u64(pp, 4);
    std::vector<Vec4> basis_rows;
    for (auto& b : model.basis) basis_rows.push_back(b.row);
    if (basis_rows.size() != 4) throw std::logic_error("count_classes: order basis is not full rank");
    for (std::uint64_t idx = 0; idx < total_res; ++idx) {
        std::uint64_t rem = idx;
        Vec4 z{};
        for (int i = 0; i < 4; ++i) {
            std::uint64_t c = rem % pp;
            rem /= pp;
            if (c)
                for (int j = 0; j < 4; ++j) z[j] = (z[j] + c * basis_rows[i][j]) % model.pk;
        }
        if (model.nrd(z) % pp != 0) ++unit_residues;
    }
    __int128 units = unit_residues;
    for (unsigned i = 0; i < 4 * (jj - 1); ++i) units *= pp;

    __int128 stab_sum = 0;
    for (auto& w : witnesses) {
        // commutant of w inside the order, in basis coefficients
        std::array<Vec4, 4> cols;
        for (int i = 0; i < 4; ++i) {
            cols[i] = sub(model.mul(basis_rows[i], w), model.mul(w, basis_rows[i]), model.pk);
            for (int c = 0; c < 4; ++c) cols[i][c] %= pj;
        }
        KernelInfo ker = kernel_mod_pk(cols, model.p, jj, pj);
        // image of the commutant in order/p in basis coefficients
        std::vector<Vec4> image_basis;
        std::array<std::array<std::uint64_t, 4>, 4> red{};
        int rank = 0;
        for (auto& g : ker.gens) {
            std::array<std::uint64_t, 4> r;
            for (int i = 0; i < 4; ++i) r[i] = g[i] % pp;
            // reduce against current basis
            for (int b = 0; b < rank; ++b) {
                int pc = -1;
                for (int i = 0; i < 4; ++i)
                    if (red[b][i] != 0) {
                        pc = i;
                        break;
                    }
                if (pc >= 0 && r[pc]) {
                    std::uint64_t f = (r[pc] * inv_mod(red[b][pc], pp)) % pp;
                    for (int i = 0; i < 4; ++i) r[i] = (r[i] + pp - (f * red[b][i]) % pp) % pp;
                }
            }
            if (r[0] || r[1] || r[2] || r[3]) {
                red[rank] = r;
                Vec4 rv{r[0], r[1], r[2], r[3]};
                image_basis.push_back(rv);
                ++rank;
            }
        }
        std::uint64_t image_size = pow_u64(pp, (unsigned)rank);
        std::uint64_t image_units = 0;
        for (std::uint64_t idx = 0; idx < image_size; ++idx) {
            std::uint64_t rem = idx;
            Vec4 coeff{};
            for (int b = 0; b < rank; ++b) {
                std::uint64_t c = rem % pp;
                rem /= pp;
                if (c)
                    for (int i = 0; i < 4; ++i) coeff[i] = (coeff[i] + c * image_basis[b][i]) % pp;
            }
            Vec4 z{};
            for (int i = 0; i < 4; ++i)
                if (coeff[i])
                    for (int j = 0; j < 4; ++j) z[j] = (z[j] + coeff[i] * basis_rows[i][j]) % model.pk;
            if (model.nrd(z) % pp != 0) ++image_units;
        }
        stab_sum += (__int128)image_units * (ker.size / image_size);
    }
    if (stab_sum % units != 0)
        throw std::logic_error("count_classes: stabilizer sum not divisible by the unit group order");
    return (std::int64_t)(stab_sum / units);
}

}  // namespace

OracleResult enumerate_optimal(const FiniteRingModel& model, const LocalOrderDescriptor& gen, std::int64_t m,
                               EnumerateMode mode, std::uint64_t budget) {
    OracleResult res;
    res.precision_used = model.k;
    if ((unsigned)(2 * m) + 2 > model.k)
        throw std::invalid_argument("enumerate_optimal: precision below the n + 2m + 2 policy");
    std::int64_t pm = 1;
    for (std::int64_t i = 0; i < m; ++i) pm *= model.p;
    if (gen.trace % pm != 0 || gen.norm % (pm * pm) != 0)
        throw std::invalid_argument("enumerate_optimal: descriptor is not p^m times an integral generator");
    bool want_count = mode == EnumerateMode::Count;
    if (want_count) {
        __int128 order_size = 1;
        for (unsigned i = 0; i < 4 * model.k; ++i) order_size *= model.p;
        if (order_size > (__int128)budget) want_count = false;
    }
    // The characteristic congruence pins a witness only up to tails of depth
    // m plus half the discriminant valuation of the generator; counting works
    // at the faithful precision so each embedding class is one orbit.
    std::int64_t disc = gen.trace * gen.trace - 4 * gen.norm;
    unsigned vd0 = 0;
    while (disc != 0 && disc % model.p == 0 && vd0 < 2 * (unsigned)m + 4) {
        disc /= model.p;
        ++vd0;
    }
    vd0 -= std::min(vd0, 2 * (unsigned)m);
    unsigned tail = (unsigned)m + (vd0 + 1) / 2;
    // counting must keep at least one faithful digit above the divisibility
    // of the deepest stratum, else distinct witnesses collapse
    if (want_count && model.k <= tail + (unsigned)m)
        throw std::invalid_argument(
            "enumerate_optimal: counting needs precision above n + 2m + 2 by half the generator "
            "discriminant valuation");
    unsigned jj = model.k > tail ? model.k - tail : 1;
    Enumerator e(model, gen, m, /*exist_only=*/!want_count, jj);
    e.run();
    if (want_count) {
        std::sort(e.witnesses.begin(), e.witnesses.end());
        e.witnesses.erase(std::unique(e.witnesses.begin(), e.witnesses.end()), e.witnesses.end());
        res.witnesses = e.witnesses;
        res.exists = !e.witnesses.empty();
        res.class_count = count_classes(model, e.witnesses, jj);
    } else {
        res.exists = e.found;
        if (!res.exists) res.class_count = 0;
    }
    return res;
}

VerifyReport verify_table(ModelKind kind, std::int64_t p, std::int64_t max_m, unsigned max_n,
                          std::uint64_t budget, bool with_counts, unsigned forced_precision) {
    VerifyReport report;
    std::vector<LocalQuadExt> field_classes;
    if (p == 2)
        field_classes = {LocalQuadExt::Unramified, LocalQuadExt::Sqrt3,  LocalQuadExt::Sqrt7,
                         LocalQuadExt::Sqrt2,      LocalQuadExt::Sqrt6,  LocalQuadExt::Sqrt10,
                         LocalQuadExt::Sqrt14};
    else
        field_classes = {LocalQuadExt::Unramified, LocalQuadExt::RamifiedUnit, LocalQuadExt::RamifiedPrime};

    auto splitting_of = [](LocalQuadExt c) {
        return is_ramified_class(c) ? SplittingType::Ramified : SplittingType::Inert;
    };

    unsigned min_n = (kind == ModelKind::Eichler) ? 0 : 1;
    for (unsigned n = min_n; n <= max_n; ++n) {
        for (std::int64_t m = 0; m <= max_m; ++m) {
            for (auto kc : field_classes) {
                // headroom above the policy so counting keeps at least one
                // faithful digit for ramified generators
                unsigned k = forced_precision
                                 ? std::max(forced_precision, n + 2)
                                 : precision_policy(n, m) + ((unsigned)disc_valuation(kc) + 1) / 2;
                if (kind == ModelKind::Cartan && kc != LocalQuadExt::Unramified) continue;
                std::vector<std::optional<LocalQuadExt>> l_options;
                if (kind == ModelKind::Division)
                    for (auto lc : field_classes) l_options.push_back(lc);
                else
                    l_options.push_back(std::nullopt);
                for (auto lc : l_options) {
                    VerifyCell cell;
                    cell.kind = kind;
                    cell.p = p;
                    cell.m = m;
                    cell.n = n;
                    cell.k_class = kc;
                    cell.precision = k;
                    EmbeddingVerdict table;
                    switch (kind) {
                        case ModelKind::Eichler: table = eichler_exists(m, n, splitting_of(kc)); break;
                        case ModelKind::Cartan: table = cartan_exists(m, n); break;
                        case ModelKind::Division:
                            cell.l_class = *lc;
                            table = division_exists(p, m, n, kc, *lc);
                            break;
                    }
                    cell.rule_id = table.rule_id;
                    cell.table_exists = table.exists;
                    // Cells without a genuine catalog row are recorded but not
                    // compared: off-catalog division parities, and Cartan
                    // orders away from the maximal quadratic order (the
                    // closed row only covers m = 0; conductor-p^m embeddings
                    // into Cartan orders do exist in patterns the catalog
                    // does not list).
                    if (table.rule_id == "no-row" || (kind == ModelKind::Cartan && m > 0)) {
                        cell.skipped = true;
                        ++report.skipped;
                        report.cells.push_back(cell);
                        continue;
                    }
                    cell.table_count = table.count;
                    if (kind == ModelKind::Division && p != 2 && n == 2 && lc && is_ramified_class(*lc))
                        cell.table_count = division_count_nu2(p, m, splitting_of(kc));

                    FiniteRingModel model = build_model(kind, p, n, k, lc);
                    auto desc = local_descriptor(p, kc, m);
                    bool ask_counts = with_counts && cell.table_count.has_value();
                    OracleResult r = enumerate_optimal(model, desc, m,
                                                       ask_counts ? EnumerateMode::Count
                                                                  : EnumerateMode::ExistenceOnly,
                                                       budget);
                    cell.oracle_exists = r.exists;
                    cell.oracle_count = r.class_count;
                    cell.match = (cell.oracle_exists == cell.table_exists);
                    if (cell.match && cell.table_count && cell.oracle_count)
                        cell.match = (*cell.table_count == *cell.oracle_count);
                    if (!cell.match) {
                        report.all_match = false;
                        ++report.mismatches;
                    }
                    report.cells.push_back(cell);
                }
            }
        }
    }
    return report;
}

}  // namespace oracle
}  // namespace heegner
