#include "phasewave/resultant.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

namespace phasewave {

namespace {

using Cplx = std::complex<double>;

void require_monic(const std::vector<double>& p, const char* name) {
    if (p.size() < 2)
        throw PwError(ErrorCode::domain_error, std::string(name) + " must have degree >= 1");
    if (p.back() != 1.0)
        throw PwError(ErrorCode::domain_error, std::string(name) + " must be monic");
}

/// Matrix of (Ag)(x,y) = (x-y) g(x,y) on the basis e_{i,j} = x^i y^j,
/// 0 <= i < d1, 0 <= j < d2, index i + d1 j.
Eigen::MatrixXd multiplication_matrix(const std::vector<double>& p, const std::vector<double>& q) {
    const int d1 = static_cast<int>(p.size()) - 1;
    const int d2 = static_cast<int>(q.size()) - 1;
    const int D = d1 * d2;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(D, D);
    auto id = [d1](int i, int j) { return i + d1 * j; };
    for (int i = 0; i < d1; ++i) {
        for (int j = 0; j < d2; ++j) {
            int col = id(i, j);
            // x * e_{i,j}
            if (i + 1 < d1) {
                A(id(i + 1, j), col) += 1.0;
            } else {
                for (int l = 0; l < d1; ++l) A(id(l, j), col) -= p[static_cast<std::size_t>(l)];
            }
            // - y * e_{i,j}
            if (j + 1 < d2) {
                A(id(i, j + 1), col) -= 1.0;
            } else {
                for (int l = 0; l < d2; ++l) A(id(i, l), col) += q[static_cast<std::size_t>(l)];
            }
        }
    }
    return A;
}

bool is_integer_matrix(const Eigen::MatrixXd& A) {
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            if (std::abs(A(i, j) - std::nearbyint(A(i, j))) > 1e-12) return false;
    return true;
}

/// Exact Faddeev-LeVerrier characteristic polynomial for integer matrices.
/// Returns false on (potential) 128-bit overflow.
bool char_poly_integer(const Eigen::MatrixXd& Ad, std::vector<double>& out) {
    using I = __int128;
    const Eigen::Index n = Ad.rows();
    std::vector<I> A(static_cast<std::size_t>(n * n)), B(static_cast<std::size_t>(n * n)),
        T(static_cast<std::size_t>(n * n));
    auto at = [n](std::vector<I>& M, Eigen::Index i, Eigen::Index j) -> I& {
        return M[static_cast<std::size_t>(i * n + j)];
    };
    const I kLimit = static_cast<I>(1) << 100;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            at(A, i, j) = static_cast<I>(std::llround(Ad(i, j)));

    // char(z) = z^n + c_{n-1} z^{n-1} + ... + c_0 via
    // B_1 = A, c_{n-1} = -tr(B_1); B_{k+1} = A (B_k + c_{n-k} I).
    std::vector<I> c(static_cast<std::size_t>(n) + 1, 0);
    c[static_cast<std::size_t>(n)] = 1;
    B = A;
    for (Eigen::Index k = 1; k <= n; ++k) {
        I tr = 0;
        for (Eigen::Index i = 0; i < n; ++i) tr += at(B, i, i);
        if (tr % k != 0) return false;  // exactness violated; should not happen
        I ck = -tr / k;
        c[static_cast<std::size_t>(n - k)] = ck;
        if (ck > kLimit || ck < -kLimit) return false;
        if (k == n) break;
        // T = A * (B + ck I)
        for (Eigen::Index i = 0; i < n; ++i) at(B, i, i) += ck;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                I acc = 0;
                for (Eigen::Index l = 0; l < n; ++l) {
                    acc += at(A, i, l) * at(B, l, j);
                    if (acc > kLimit || acc < -kLimit) return false;
                }
                at(T, i, j) = acc;
            }
        B.swap(T);
    }
    out.resize(static_cast<std::size_t>(n) + 1);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<double>(c[i]);
    return true;
}

std::vector<Cplx> companion_roots(const std::vector<double>& p) {
    const int d = static_cast<int>(p.size()) - 1;
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(d, d);
    for (int i = 1; i < d; ++i) C(i, i - 1) = 1.0;
    for (int j = 0; j < d; ++j) C(j, d - 1) = -p[static_cast<std::size_t>(j)];
    Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
    std::vector<Cplx> out(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    return out;
}

using CplxL = std::complex<long double>;

std::vector<CplxL> expand_from_roots(const std::vector<CplxL>& roots) {
    std::vector<CplxL> coeff{1.0L};
    for (const CplxL& root : roots) {
        std::vector<CplxL> next(coeff.size() + 1, CplxL(0.0L));
        for (std::size_t j = 0; j < coeff.size(); ++j) {
            next[j + 1] += coeff[j];
            next[j] -= root * coeff[j];
        }
        coeff = std::move(next);
    }
    return coeff;
}

/// Characteristic polynomial of the multiplication matrix: exact integer
/// Faddeev-LeVerrier when possible, otherwise through the factor spectra
/// (the spectrum of A is exactly the pairwise root differences, and the
/// small companion solves are far better conditioned than the d1 d2
/// dimensional eigenproblem of A itself).
std::vector<double> char_poly(const Eigen::MatrixXd& A, const std::vector<double>& p,
                              const std::vector<double>& q) {
    std::vector<double> out;
    if (is_integer_matrix(A) && char_poly_integer(A, out)) return out;

    std::vector<Cplx> ra = companion_roots(p), rb = companion_roots(q);
    std::vector<CplxL> diffs;
    diffs.reserve(ra.size() * rb.size());
    for (const Cplx& x : ra)
        for (const Cplx& y : rb) diffs.push_back(CplxL(x) - CplxL(y));
    std::vector<CplxL> coeff = expand_from_roots(diffs);
    out.resize(coeff.size());
    for (std::size_t j = 0; j < coeff.size(); ++j) out[j] = static_cast<double>(coeff[j].real());
    out.back() = 1.0;
    return out;
}

/// Division sequences z^s = g_s(z) p(z) + v_s(z), coefficients of g_s and v_s
/// for s = 0..smax, from the recurrence in the construction.
struct DivisionSeq {
    std::vector<std::vector<long double>> g;  // g[s]: ascending, may be empty (zero)
    std::vector<std::vector<long double>> v;  // v[s]: length d
};

// Extended precision: the sequence coefficients inherit the construction's
// intrinsic growth (the coefficient-set bounds are factorial in the degree),
// and double rounding at that magnitude shows up directly in the identity
// defect.
DivisionSeq division_sequences(const std::vector<double>& p, int smax) {
    const int d = static_cast<int>(p.size()) - 1;
    DivisionSeq seq;
    seq.g.resize(static_cast<std::size_t>(smax) + 1);
    seq.v.resize(static_cast<std::size_t>(smax) + 1);
    seq.g[0] = {};
    seq.v[0] = std::vector<long double>(static_cast<std::size_t>(d), 0.0L);
    seq.v[0][0] = 1.0L;
    for (int s = 0; s < smax; ++s) {
        const auto& gs = seq.g[static_cast<std::size_t>(s)];
        const auto& vs = seq.v[static_cast<std::size_t>(s)];
        long double lead = vs[static_cast<std::size_t>(d - 1)];
        std::vector<long double> gn(std::max<std::size_t>(gs.size() + 1, 1), 0.0L);
        gn[0] = lead;
        for (std::size_t k = 0; k < gs.size(); ++k) gn[k + 1] = gs[k];
        std::vector<long double> vn(static_cast<std::size_t>(d), 0.0L);
        vn[0] = -static_cast<long double>(p[0]) * lead;
        for (int k = 1; k < d; ++k)
            vn[static_cast<std::size_t>(k)] = vs[static_cast<std::size_t>(k - 1)] -
                                              static_cast<long double>(p[static_cast<std::size_t>(k)]) * lead;
        seq.g[static_cast<std::size_t>(s + 1)] = std::move(gn);
        seq.v[static_cast<std::size_t>(s + 1)] = std::move(vn);
    }
    return seq;
}

long double binomial(int n, int k) {
    long double acc = 1.0L;
    for (int i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;
    return acc;
}

}  // namespace

Cplx BivarPoly::eval(Cplx x, Cplx y) const {
    // Horner in x of Horner-in-y rows.
    Cplx acc = 0.0;
    for (Eigen::Index i = coef.rows(); i-- > 0;) {
        Cplx row = 0.0;
        for (Eigen::Index j = coef.cols(); j-- > 0;) row = row * y + coef(i, j);
        acc = acc * x + row;
    }
    return acc;
}

double poly_eval(const std::vector<double>& coeffs, double x) {
    double acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * x + coeffs[k];
    return acc;
}

Cplx poly_eval(const std::vector<double>& coeffs, Cplx x) {
    Cplx acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * x + coeffs[k];
    return acc;
}

std::vector<double> poly_from_roots(const std::vector<double>& roots) {
    std::vector<double> c{1.0};
    for (double r : roots) {
        std::vector<double> next(c.size() + 1, 0.0);
        for (std::size_t j = 0; j < c.size(); ++j) {
            next[j + 1] += c[j];
            next[j] -= r * c[j];
        }
        c = std::move(next);
    }
    return c;
}

Eigen::MatrixXd resultant_multiplication_matrix(const std::vector<double>& p,
                                                const std::vector<double>& q) {
    require_monic(p, "p");
    require_monic(q, "q");
    return multiplication_matrix(p, q);
}

ResultantTriple resultant_ominus(const std::vector<double>& p, const std::vector<double>& q) {
    require_monic(p, "p");
    require_monic(q, "q");
    const int d1 = static_cast<int>(p.size()) - 1;
    const int d2 = static_cast<int>(q.size()) - 1;
    const int D = d1 * d2;

    ResultantTriple out;
    out.r = char_poly(multiplication_matrix(p, q), p, q);

    DivisionSeq sp = division_sequences(p, D);
    DivisionSeq sq = division_sequences(q, D);

    Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> R1 =
        Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>::Zero(D + 1, D + 1);
    Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> R2 = R1;
    for (int s = 0; s <= D; ++s) {
        long double cs = out.r[static_cast<std::size_t>(s)];
        if (cs == 0.0L) continue;
        for (int l = 0; l <= s; ++l) {
            long double w = cs * binomial(s, l) * ((s - l) % 2 == 0 ? 1.0L : -1.0L);
            // R1 += w g_l(x) y^{s-l}
            const auto& gl = sp.g[static_cast<std::size_t>(l)];
            for (std::size_t i = 0; i < gl.size(); ++i)
                if (gl[i] != 0.0L) R1(static_cast<Eigen::Index>(i), s - l) += w * gl[i];
            // R2 += w v_l(x) h_{s-l}(y)
            const auto& vl = sp.v[static_cast<std::size_t>(l)];
            const auto& hsl = sq.g[static_cast<std::size_t>(s - l)];
            for (std::size_t i = 0; i < vl.size(); ++i) {
                if (vl[i] == 0.0L) continue;
                for (std::size_t j = 0; j < hsl.size(); ++j)
                    if (hsl[j] != 0.0L)
                        R2(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
                            w * vl[i] * hsl[j];
            }
        }
    }
    out.R1.coef = R1.cast<double>();
    out.R2.coef = R2.cast<double>();
    return out;
}

namespace {

CplxL eval_grid_l(const Eigen::MatrixXd& coef, CplxL x, CplxL y) {
    CplxL acc = 0.0L;
    for (Eigen::Index i = coef.rows(); i-- > 0;) {
        CplxL row = 0.0L;
        for (Eigen::Index j = coef.cols(); j-- > 0;) row = row * y + static_cast<long double>(coef(i, j));
        acc = acc * x + row;
    }
    return acc;
}

CplxL eval_poly_l(const std::vector<double>& c, CplxL x) {
    CplxL acc = 0.0L;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + static_cast<long double>(c[k]);
    return acc;
}

}  // namespace

double verify_resultant_identity(const ResultantTriple& triple, const std::vector<double>& p,
                                 const std::vector<double>& q, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    long double worst = 0.0L;
    for (int s = 0; s < samples; ++s) {
        CplxL x(unif(rng), unif(rng));
        CplxL y(unif(rng), unif(rng));
        CplxL t1 = eval_grid_l(triple.R1.coef, x, y) * eval_poly_l(p, x);
        CplxL t2 = eval_grid_l(triple.R2.coef, x, y) * eval_poly_l(q, y);
        CplxL lhs = eval_poly_l(triple.r, x - y);
        long double scale = std::max({1.0L, std::abs(lhs), std::abs(t1), std::abs(t2)});
        worst = std::max(worst, std::abs(lhs - t1 - t2) / scale);
    }
    return static_cast<double>(worst);
}

}  // namespace phasewave
