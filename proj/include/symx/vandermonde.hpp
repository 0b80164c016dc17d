#pragma once

#include "decompose.hpp"
#include "errors.hpp"
#include "tensor.hpp"
#include "variety.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <vector>

namespace symx {

/// Dense order-k tensor with every mode of size d+1 (entries of a k-way
/// array in (C^{d+1})^{(x)k}), stored row-major with the first index slowest.
struct MultiwayTensor {
    int k = 0, d = 0;
    std::vector<Complex> entries;

    MultiwayTensor() = default;
    MultiwayTensor(int k_, int d_) : k(k_), d(d_) {
        size_t n = 1;
        for (int s = 0; s < k; ++s) n *= (size_t)(d + 1);
        entries.assign(n, Complex(0, 0));
    }

    size_t flat(const std::vector<int>& idx) const {
        size_t f = 0;
        for (int s = 0; s < k; ++s) {
            if (idx[s] < 0 || idx[s] > d) throw Error("MultiwayTensor: index out of range");
            f = f * (size_t)(d + 1) + (size_t)idx[s];
        }
        return f;
    }

    const Complex& at(const std::vector<int>& idx) const { return entries[flat(idx)]; }
    Complex& at(const std::vector<int>& idx) { return entries[flat(idx)]; }

    double fro_norm() const {
        double s = 0.0;
        for (auto& e : entries) s += std::norm(e);
        return std::sqrt(s);
    }
};

/// Segre variety of P^1 x ... x P^1 (k factors) in P^{2^k-1}: coordinates
/// x_nu indexed by nu in {0,1}^k (variable number = binary value of nu),
/// cut out by the swap binomials x_mu x_nu - x_eta x_theta over all index
/// pairs with the same componentwise sum. Cone dimension k+1.
inline VarietySpec<Complex> segre_variety(int k) {
    if (k < 1) throw Error("segre_variety: k must be at least 1");
    int N = 1 << k;
    std::map<std::vector<int>, std::vector<std::pair<int, int>>> groups;
    for (int p = 0; p < N; ++p)
        for (int q = p; q < N; ++q) {
            std::vector<int> key(k);
            for (int s = 0; s < k; ++s) key[s] = ((p >> s) & 1) + ((q >> s) & 1);
            groups[key].push_back({p, q});
        }
    std::vector<Poly<Complex>> gens;
    for (auto& [key, pairs] : groups)
        for (size_t a = 0; a < pairs.size(); ++a)
            for (size_t b = a + 1; b < pairs.size(); ++b) {
                Poly<Complex> g(N);
                MultiIndex m1(N, 0), m2(N, 0);
                m1[pairs[a].first] += 1;
                m1[pairs[a].second] += 1;
                m2[pairs[b].first] += 1;
                m2[pairs[b].second] += 1;
                g.add_term(std::move(m1), Complex(1, 0));
                g.add_term(std::move(m2), Complex(-1, 0));
                gens.push_back(std::move(g));
            }
    return make_variety<Complex>(N - 1, std::move(gens), k + 1);
}

/// Symmetrized image of a k-way tensor: the symmetric order-d tensor over
/// C^{2^k} whose entry at alpha is A at the k-tuple i_s = sum_j alpha_j *
/// bit_s(j). Lands in S^d of the Segre variety by construction.
inline SymTensor<Complex> vd_embed(const MultiwayTensor& A) {
    int n = (1 << A.k) - 1;
    SymTensor<Complex> B(n, A.d);
    for (int t = 0; t < B.size(); ++t) {
        const MultiIndex& alpha = B.labels[t];
        std::vector<int> idx(A.k, 0);
        for (int j = 1; j <= n; ++j)
            for (int s = 0; s < A.k; ++s)
                if ((j >> s) & 1) idx[s] += alpha[j - 1];
        B.val[t] = A.at(idx);
    }
    return B;
}

/// One separable term weight * (a_1,b_1)^{(d)} x ... x (a_k,b_k)^{(d)}.
struct VandermondeTerm {
    Complex weight;
    std::vector<std::pair<Complex, Complex>> modes;  // (a_s, b_s)
};

struct VandermondeDecomposition {
    int k = 0, d = 0;
    std::vector<VandermondeTerm> terms;
    double rel_error = 0.0;    // Frobenius, against the input
    double consistency = 0.0;  // worst separability violation of the points
};

inline MultiwayTensor vd_reconstruct(int k, int d, const std::vector<VandermondeTerm>& terms) {
    MultiwayTensor R(k, d);
    std::vector<int> idx(k, 0);
    for (size_t f = 0; f < R.entries.size(); ++f) {
        size_t rem = f;
        for (int s = k - 1; s >= 0; --s) {
            idx[s] = (int)(rem % (size_t)(d + 1));
            rem /= (size_t)(d + 1);
        }
        Complex acc(0, 0);
        for (const auto& t : terms) {
            Complex m = t.weight;
            for (int s = 0; s < k; ++s) {
                const auto& [a, b] = t.modes[s];
                for (int e = 0; e < d - idx[s]; ++e) m *= a;
                for (int e = 0; e < idx[s]; ++e) m *= b;
            }
            acc += m;
        }
        R.entries[f] = acc;
    }
    return R;
}

/// Vandermonde decomposition through the symmetric pipeline: embed, decompose
/// on the Segre variety, split each recovered point into per-mode factors
/// (checking separability), and measure the multiway reconstruction error.
inline VandermondeDecomposition vdecompose(const MultiwayTensor& A, const SolverConfig& cfg = {}) {
    SymTensor<Complex> B = vd_embed(A);
    VarietySpec<Complex> X = segre_variety(A.k);
    DecompositionResult res = decompose(B, X, cfg);
    if (!res.decomposition.hom_lambdas.empty())
        throw Error("vdecompose: a recovered term sits off the affine chart; "
                    "no finite Vandermonde form");
    VandermondeDecomposition out;
    out.k = A.k;
    out.d = A.d;
    for (size_t j = 0; j < res.decomposition.lambdas.size(); ++j) {
        const auto& v = res.decomposition.points[j];
        VandermondeTerm t;
        t.weight = res.decomposition.lambdas[j];
        for (int s = 0; s < A.k; ++s) t.modes.push_back({Complex(1, 0), v[(1 << s) - 1]});
        // Separability: every chart coordinate must factor through the modes.
        for (int jj = 1; jj < (1 << A.k); ++jj) {
            Complex expect(1, 0);
            for (int s = 0; s < A.k; ++s)
                if ((jj >> s) & 1) expect *= t.modes[s].second;
            double dev = std::abs(v[jj - 1] - expect) / (1.0 + std::abs(expect));
            out.consistency = std::max(out.consistency, dev);
        }
        out.terms.push_back(std::move(t));
    }
    MultiwayTensor R = vd_reconstruct(A.k, A.d, out.terms);
    double na = A.fro_norm();
    double diff = 0.0;
    for (size_t f = 0; f < A.entries.size(); ++f) diff += std::norm(A.entries[f] - R.entries[f]);
    out.rel_error = na > 0 ? std::sqrt(diff) / na : std::sqrt(diff);
    return out;
}

/// Exact (d+1)^k-term decomposition from node interpolation: with distinct
/// nodes t_0..t_d (default the (d+1)-st roots of unity), invert the
/// Vandermonde matrix along every mode; term (j_1..j_k) has weight
/// C_{j_1..j_k} and mode vectors (1, t_{j_s}). k=1 is plain interpolation.
inline VandermondeDecomposition vandermonde_oracle(
    const MultiwayTensor& A, std::optional<std::vector<Complex>> nodes = std::nullopt) {
    int d = A.d, k = A.k;
    std::vector<Complex> t;
    if (nodes) {
        t = *nodes;
        if ((int)t.size() != d + 1) throw Error("vandermonde_oracle: need d+1 nodes");
    } else {
        for (int l = 0; l <= d; ++l) {
            double ang = 2.0 * std::numbers::pi * l / (d + 1);
            t.push_back(Complex(std::cos(ang), std::sin(ang)));
        }
    }
    Eigen::MatrixXcd V(d + 1, d + 1);
    for (int i = 0; i <= d; ++i)
        for (int l = 0; l <= d; ++l) V(i, l) = std::pow(t[l], i);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(V);

    std::vector<Complex> C = A.entries;
    size_t total = C.size();
    for (int s = 0; s < k; ++s) {
        size_t stride = 1;
        for (int s2 = s + 1; s2 < k; ++s2) stride *= (size_t)(d + 1);
        size_t block = stride * (size_t)(d + 1);
        std::vector<Complex> out(total);
        Eigen::VectorXcd col(d + 1);
        for (size_t base = 0; base < total; base += block)
            for (size_t off = 0; off < stride; ++off) {
                for (int i = 0; i <= d; ++i) col(i) = C[base + off + stride * (size_t)i];
                Eigen::VectorXcd sol = lu.solve(col);
                for (int i = 0; i <= d; ++i) out[base + off + stride * (size_t)i] = sol(i);
            }
        C.swap(out);
    }

    VandermondeDecomposition out;
    out.k = k;
    out.d = d;
    std::vector<int> idx(k, 0);
    for (size_t f = 0; f < total; ++f) {
        size_t rem = f;
        for (int s = k - 1; s >= 0; --s) {
            idx[s] = (int)(rem % (size_t)(d + 1));
            rem /= (size_t)(d + 1);
        }
        VandermondeTerm term;
        term.weight = C[f];
        for (int s = 0; s < k; ++s) term.modes.push_back({Complex(1, 0), t[idx[s]]});
        out.terms.push_back(std::move(term));
    }
    MultiwayTensor R = vd_reconstruct(k, d, out.terms);
    double na = A.fro_norm();
    double diff = 0.0;
    for (size_t f = 0; f < total; ++f) diff += std::norm(A.entries[f] - R.entries[f]);
    out.rel_error = na > 0 ? std::sqrt(diff) / na : std::sqrt(diff);
    return out;
}

/// Random rank-r instance: unit first mode coordinates, complex-normal
/// second coordinates, weights of moderate modulus and random phase.
inline MultiwayTensor plant_vandermonde(int k, int d, int r, Rng& rng,
                                        std::vector<VandermondeTerm>* terms_out = nullptr) {
    std::vector<VandermondeTerm> terms;
    for (int j = 0; j < r; ++j) {
        VandermondeTerm t;
        double ang = 2.0 * std::numbers::pi * rng.uniform();
        t.weight = (0.5 + rng.uniform()) * Complex(std::cos(ang), std::sin(ang));
        for (int s = 0; s < k; ++s) t.modes.push_back({Complex(1, 0), rng.cgauss()});
        terms.push_back(std::move(t));
    }
    MultiwayTensor A = vd_reconstruct(k, d, terms);
    if (terms_out) *terms_out = std::move(terms);
    return A;
}

}  // namespace symx
