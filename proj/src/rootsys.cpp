#include "thetaforge/rootsys.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "thetaforge/errors.hpp"

namespace thetaforge {

Weight operator+(const Weight& a, const Weight& b) {
    if (a.rank() != b.rank()) throw DimensionError("Weight: rank mismatch in +");
    Weight r = a;
    for (std::size_t i = 0; i < r.labels.size(); ++i) r.labels[i] += b.labels[i];
    return r;
}

Weight operator-(const Weight& a, const Weight& b) {
    if (a.rank() != b.rank()) throw DimensionError("Weight: rank mismatch in -");
    Weight r = a;
    for (std::size_t i = 0; i < r.labels.size(); ++i) r.labels[i] -= b.labels[i];
    return r;
}

std::string Weight::str() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < labels.size(); ++i) os << (i ? "," : "") << labels[i];
    os << ")";
    return os.str();
}

RootSystem::RootSystem(int n, int max_weyl_n) : n_(n), l_(n - 1), max_weyl_n_(max_weyl_n) {
    if (n < 2) throw Error("RootSystem: need n >= 2");
    cartan_.assign(l_, std::vector<long long>(l_, 0));
    for (int i = 0; i < l_; ++i) {
        cartan_[i][i] = 2;
        if (i > 0) cartan_[i][i - 1] = -1;
        if (i + 1 < l_) cartan_[i][i + 1] = -1;
    }
    // (C^{-1})_{ij} = min(i,j) (n - max(i,j)) / n  with 1-based indices
    cartan_inv_.assign(l_, std::vector<Rat>(l_));
    for (int i = 0; i < l_; ++i)
        for (int j = 0; j < l_; ++j) {
            long long lo = std::min(i, j) + 1, hi = std::max(i, j) + 1;
            cartan_inv_[i][j] = Rat(lo * (n_ - hi), n_);
        }
    // C * C^{-1} = Id exactly
    for (int i = 0; i < l_; ++i)
        for (int j = 0; j < l_; ++j) {
            Rat s = 0;
            for (int m = 0; m < l_; ++m) s += Rat(cartan_[i][m]) * cartan_inv_[m][j];
            if (s != Rat(i == j ? 1 : 0)) throw Error("RootSystem: Cartan inverse check failed");
        }
    rho_ = Weight(std::vector<long long>(l_, 1));
    std::vector<long long> hr(l_, 0);
    if (l_ == 1) {
        hr[0] = 2;
    } else {
        hr.front() = 1;
        hr.back() = 1;
    }
    highest_root_ = Weight(hr);

    // eager caches: instances are immutable and safe to share across workers
    for (int a = 0; a < n_; ++a)
        for (int b = a + 1; b < n_; ++b) {
            std::vector<long long> eps(n_, 0);
            eps[a] = 1;
            eps[b] = -1;
            std::vector<long long> lab(l_);
            for (int j = 0; j < l_; ++j) lab[j] = eps[j] - eps[j + 1];
            positive_roots_.push_back(Weight(lab));
        }
    if (n_ <= max_weyl_n_) {
        std::vector<int> p(n_);
        std::iota(p.begin(), p.end(), 0);
        do {
            int inv = 0;
            for (int i = 0; i < n_; ++i)
                for (int j = i + 1; j < n_; ++j)
                    if (p[i] > p[j]) ++inv;
            weyl_.push_back({p, (inv % 2 == 0) ? 1 : -1});
        } while (std::next_permutation(p.begin(), p.end()));
    }
}

void RootSystem::check_rank(std::size_t got) const {
    if (got != static_cast<std::size_t>(l_)) throw DimensionError("RootSystem: vector length != rank");
}

Rat RootSystem::inner_product(const std::vector<Rat>& a, const std::vector<Rat>& b) const {
    check_rank(a.size());
    check_rank(b.size());
    Rat s = 0;
    for (int i = 0; i < l_; ++i)
        for (int j = 0; j < l_; ++j) s += a[i] * cartan_inv_[i][j] * b[j];
    return s;
}

Rat RootSystem::inner_product(const Weight& a, const Weight& b) const {
    check_rank(a.rank());
    check_rank(b.rank());
    Rat s = 0;
    for (int i = 0; i < l_; ++i)
        for (int j = 0; j < l_; ++j)
            s += Rat(a.labels[i]) * cartan_inv_[i][j] * Rat(b.labels[j]);
    return s;
}

Rat RootSystem::casimir(const Weight& lam) const {
    if (!lam.dominant()) throw Error("casimir: weight not dominant " + lam.str());
    Weight shifted = lam + rho_;
    return inner_product(shifted, shifted) - inner_product(rho_, rho_);
}

long long RootSystem::weyl_order() const {
    long long f = 1;
    for (int i = 2; i <= n_; ++i) f *= i;
    return f;
}

const std::vector<WeylElement>& RootSystem::weyl_group() const {
    if (weyl_.empty())
        throw ResourceError("weyl_group: n = " + std::to_string(n_) +
                            " exceeds configured maximum " + std::to_string(max_weyl_n_));
    return weyl_;
}

WeylElement RootSystem::identity() const {
    std::vector<int> p(n_);
    std::iota(p.begin(), p.end(), 0);
    return {p, 1};
}

WeylElement RootSystem::compose(const WeylElement& a, const WeylElement& b) const {
    WeylElement r;
    r.perm.resize(n_);
    for (int i = 0; i < n_; ++i) r.perm[i] = a.perm[b.perm[i]];
    r.sign = a.sign * b.sign;
    return r;
}

Weight RootSystem::act(const WeylElement& w, const Weight& lam) const {
    check_rank(lam.rank());
    // epsilon-coordinates: b_i = sum_{j >= i} labels_j, b_n = 0; S_n permutes them.
    std::vector<long long> b(n_, 0);
    for (int i = l_ - 1; i >= 0; --i) b[i] = b[i + 1] + lam.labels[i];
    std::vector<long long> img(n_);
    for (int i = 0; i < n_; ++i) {
        // (w b)_i = b_{w^{-1}(i)}
        int pre = 0;
        for (int j = 0; j < n_; ++j)
            if (w.perm[j] == i) {
                pre = j;
                break;
            }
        img[i] = b[pre];
    }
    long long c = img[n_ - 1];
    Weight out;
    out.labels.resize(l_);
    for (int i = 0; i < l_; ++i) out.labels[i] = img[i] - img[i + 1];
    (void)c;  // projecting along (1,...,1); differences are shift-invariant
    return out;
}

const std::vector<Weight>& RootSystem::positive_roots() const { return positive_roots_; }

bool RootSystem::regular(const Weight& lam) const {
    check_rank(lam.rank());
    // distinct epsilon-coordinates <=> no positive-root pairing vanishes
    std::vector<long long> b(n_, 0);
    for (int i = l_ - 1; i >= 0; --i) b[i] = b[i + 1] + lam.labels[i];
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            if (b[i] == b[j]) return false;
    return true;
}

std::vector<long long> RootSystem::root_coordinates(const Weight& w) const {
    check_rank(w.rank());
    std::vector<long long> out(l_);
    for (int i = 0; i < l_; ++i) {
        Rat c = 0;
        for (int j = 0; j < l_; ++j) c += cartan_inv_[i][j] * Rat(w.labels[j]);
        if (!c.is_integer()) throw Error("root_coordinates: " + w.str() + " not in the root lattice");
        out[i] = c.as_int();
    }
    return out;
}

Weight RootSystem::from_root_coordinates(const std::vector<long long>& c) const {
    check_rank(c.size());
    Weight w;
    w.labels.assign(l_, 0);
    for (int i = 0; i < l_; ++i)
        for (int j = 0; j < l_; ++j) w.labels[i] += cartan_[i][j] * c[j];
    return w;
}

std::vector<Weight> RootSystem::level_k_weights(long long k) const {
    if (k < 0) throw Error("level_k_weights: k < 0");
    std::vector<Weight> out;
    std::vector<long long> cur(l_, 0);
    long long sum = 0;
    // odometer over labels >= 0 with sum <= k
    while (true) {
        out.push_back(Weight(cur));
        int p = l_ - 1;
        long long prefix = sum;  // sum of cur[0..p] as p moves left
        while (p >= 0 && prefix + 1 > k) {
            prefix -= cur[p];
            --p;
        }
        if (p < 0) break;
        ++cur[p];
        for (int i = p + 1; i < l_; ++i) cur[i] = 0;
        sum = prefix + 1;
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {
// highest-root reflection is the transposition (1 n) on epsilon-coordinates
WeylElement highest_reflection(int n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::swap(p.front(), p.back());
    return {p, -1};
}
WeylElement simple_reflection(int n, int i) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::swap(p[i], p[i + 1]);
    return {p, -1};
}
}  // namespace

AffineOrbitWitness RootSystem::alcove_reduce(const Weight& mu, long long level_shifted) const {
    check_rank(mu.rank());
    if (level_shifted < n_) throw Error("alcove_reduce: level_shifted < n");
    Weight cur = mu;
    WeylElement w = identity();
    std::vector<long long> beta(l_, 0);
    const long long step_cap = 1000000;
    long long steps = 0;
    while (true) {
        if (++steps > step_cap) throw ResourceError("alcove_reduce: step cap exceeded");
        int neg = -1;
        for (int i = 0; i < l_; ++i)
            if (cur.labels[i] < 0) {
                neg = i;
                break;
            }
        if (neg >= 0) {
            // cur' = s_i(cur); invariant mu = w(cur) + k' beta is kept by w <- w s_i
            Weight next = cur;
            long long c = cur.labels[neg];
            for (int j = 0; j < l_; ++j) next.labels[j] -= c * cartan_[j][neg];
            cur = next;
            w = compose(w, simple_reflection(n_, neg));
            continue;
        }
        long long s = cur.label_sum();
        if (s > level_shifted) {
            // affine reflection in the wall <x, alpha_hat> = level_shifted
            long long excess = s - level_shifted;
            Weight next = cur;
            for (int j = 0; j < l_; ++j) next.labels[j] -= excess * highest_root_.labels[j];
            cur = next;
            WeylElement r = highest_reflection(n_);
            // mu = w(s_hat(cur') + k' alpha_hat) + k' beta
            Weight w_ahat = act(w, highest_root_);
            auto rc = root_coordinates(w_ahat);
            for (int j = 0; j < l_; ++j) beta[j] += rc[j];
            w = compose(w, r);
            continue;
        }
        break;
    }
    bool interior = cur.label_sum() <= level_shifted - 1;
    for (int i = 0; i < l_; ++i)
        if (cur.labels[i] < 1) interior = false;
    if (!interior)
        throw SingularWeightError("alcove_reduce: " + mu.str() + " lies on an affine wall at level " +
                                  std::to_string(level_shifted));
    // verify mu = w(base) + level_shifted * beta exactly
    Weight recon = act(w, cur);
    Weight tr = from_root_coordinates(beta);
    for (int i = 0; i < l_; ++i) recon.labels[i] += level_shifted * tr.labels[i];
    if (!(recon == mu)) throw Error("alcove_reduce: internal witness check failed");
    return {cur, level_shifted, w, beta};
}

Weight RootSystem::alcove_reduce_closed(const Weight& mu, long long level) const {
    check_rank(mu.rank());
    if (level < 1) throw Error("alcove_reduce_closed: level < 1");
    Weight cur = mu;
    const long long step_cap = 1000000;
    long long steps = 0;
    while (true) {
        if (++steps > step_cap) throw ResourceError("alcove_reduce_closed: step cap exceeded");
        int neg = -1;
        for (int i = 0; i < l_; ++i)
            if (cur.labels[i] < 0) {
                neg = i;
                break;
            }
        if (neg >= 0) {
            long long c = cur.labels[neg];
            for (int j = 0; j < l_; ++j) cur.labels[j] -= c * cartan_[j][neg];
            continue;
        }
        long long s = cur.label_sum();
        if (s > level) {
            long long excess = s - level;
            for (int j = 0; j < l_; ++j) cur.labels[j] -= excess * highest_root_.labels[j];
            continue;
        }
        return cur;
    }
}

std::vector<OrbitTerm> RootSystem::affine_orbit(const Weight& gamma, long long k, const Rat& cutoff) const {
    check_rank(gamma.rank());
    if (!gamma.dominant() || gamma.label_sum() > k)
        throw Error("affine_orbit: gamma not in D_k");
    if (!(cutoff > Rat(0))) throw Error("affine_orbit: cutoff must be positive");
    const long long ls = k + n_;
    const Weight base = gamma + rho_;
    const Rat base_norm = norm2(base);

    // box bound: |beta|_inf <= (sqrt(cutoff) + |w(base)|) / (ls * sqrt(lambda_min(C)))
    double lam_min = 2.0 - 2.0 * std::cos(M_PI / n_);
    double bn = std::sqrt(norm2(base).to_double());
    long long box = static_cast<long long>(std::ceil((std::sqrt(cutoff.to_double()) + bn) /
                                                     (ls * std::sqrt(lam_min)))) + 1;

    std::vector<OrbitTerm> out;
    for (const auto& w : weyl_group()) {
        Weight wb = act(w, base);
        // enumerate beta in the box
        std::vector<long long> idx(l_, -box);
        while (true) {
            Weight cand = wb;
            for (int i = 0; i < l_; ++i)
                for (int j = 0; j < l_; ++j) cand.labels[i] += ls * cartan_[i][j] * idx[j];
            bool strictly_dominant = true;
            for (auto x : cand.labels)
                if (x < 1) strictly_dominant = false;
            if (strictly_dominant && norm2(cand) <= cutoff) {
                Weight lam = cand - rho_;
                out.push_back({lam, w.sign});
            }
            int pos = l_ - 1;
            while (pos >= 0 && idx[pos] == box) {
                idx[pos] = -box;
                --pos;
            }
            if (pos < 0) break;
            ++idx[pos];
        }
    }
    std::sort(out.begin(), out.end(), [&](const OrbitTerm& a, const OrbitTerm& c) {
        Rat na = norm2(a.lambda + rho_), nc = norm2(c.lambda + rho_);
        if (na != nc) return na < nc;
        return a.lambda < c.lambda;
    });
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i].lambda == out[i - 1].lambda)
            throw Error("affine_orbit: duplicate orbit point (freeness violated)");
    if (out.empty() && cutoff >= base_norm)
        throw Error("affine_orbit: internal error, representative missing");
    return out;
}

}  // namespace thetaforge
