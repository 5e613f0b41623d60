#include "linalg.hpp"

#include <cmath>
#include <thread>

extern "C" {
void zgetrf_(const int*, const int*, dirac2d::Complex*, const int*, int*, int*);
void cgetrf_(const int*, const int*, std::complex<float>*, const int*, int*, int*);
void cgetrs_(const char*, const int*, const int*, const std::complex<float>*, const int*,
             const int*, std::complex<float>*, const int*, int*);
void zgetrs_(const char*, const int*, const int*, const dirac2d::Complex*, const int*,
             const int*, dirac2d::Complex*, const int*, int*);
void zgesdd_(const char*, const int*, const int*, dirac2d::Complex*, const int*, double*,
             dirac2d::Complex*, const int*, dirac2d::Complex*, const int*, dirac2d::Complex*,
             const int*, double*, int*, int*);
}

namespace dirac2d {

void parallel_for(int n, const std::function<void(int)>& fn) {
    int nthreads = std::min<int>(std::thread::hardware_concurrency(), 2);
    if (nthreads < 2 || n < 4) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t)
        pool.emplace_back([&, t] {
            for (int i = t; i < n; i += nthreads) fn(i);
        });
    for (auto& th : pool) th.join();
}

LuFactor::LuFactor(Matrix a) : lu_(std::move(a)), ipiv_(lu_.rows()) {
    int n = int(lu_.rows()), info = 0;
    if (lu_.cols() != n) throw std::invalid_argument("LuFactor: matrix must be square");
    zgetrf_(&n, &n, lu_.data(), &n, ipiv_.data(), &info);
    if (info < 0) throw std::runtime_error("zgetrf: bad argument");
    if (info > 0) throw RankDeficiencyError(0.0);  // exact zero pivot
}

Vector LuFactor::solve(const Vector& b) const {
    int n = this->n(), one = 1, info = 0;
    Vector x = b;
    zgetrs_("N", &n, &one, lu_.data(), &n, ipiv_.data(), x.data(), &n, &info);
    if (info != 0) throw std::runtime_error("zgetrs failed");
    return x;
}

Vector LuFactor::solve_adjoint(const Vector& b) const {
    int n = this->n(), one = 1, info = 0;
    Vector x = b;
    zgetrs_("C", &n, &one, lu_.data(), &n, ipiv_.data(), x.data(), &n, &info);
    if (info != 0) throw std::runtime_error("zgetrs failed");
    return x;
}

double LuFactor::pivot_ratio() const {
    double lo = 1e300, hi = 0;
    for (int i = 0; i < n(); ++i) {
        double d = std::abs(lu_(i, i));
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    return hi > 0 ? lo / hi : 0.0;
}

namespace {

Vector deterministic_start(int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i)
        v[i] = Complex(std::cos(0.7 * i + 0.3), std::sin(1.3 * i + 0.1));
    return v / v.norm();
}

}  // namespace

double norm2(const Matrix& a, double rtol, int max_iter) {
    Vector v = deterministic_start(int(a.cols()));
    double s = 0, sprev = 0;
    for (int it = 0; it < max_iter; ++it) {
        Vector w = a * v;
        Vector u = a.adjoint() * w;
        double nu = u.norm();
        if (nu == 0) return 0;
        s = w.norm();
        v = u / nu;
        if (it > 4 && std::abs(s - sprev) < rtol * s) break;
        sprev = s;
    }
    return s;
}

double norm2_implicit(int n, const std::function<Vector(const Vector&)>& apply,
                      const std::function<Vector(const Vector&)>& apply_adjoint) {
    Vector v = deterministic_start(n);
    double s = 0, sprev = 0;
    for (int it = 0; it < 300; ++it) {
        Vector w = apply(v);
        Vector u = apply_adjoint(w);
        double nu = u.norm();
        if (nu == 0) return 0;
        s = w.norm();
        v = u / nu;
        if (it > 4 && std::abs(s - sprev) < 1e-8 * s) break;
        sprev = s;
    }
    return s;
}

double sigma_min(const LuFactor& lu, double rtol, int max_iter) {
    Vector v = deterministic_start(lu.n());
    double s = 0, sprev = 0;
    for (int it = 0; it < max_iter; ++it) {
        Vector w = lu.solve(v);
        Vector u = lu.solve_adjoint(w / w.norm());
        // ||A^{-1}||_2^2 approx ||u|| * ||w|| growth; track sigma via Rayleigh
        double growth = u.norm();
        s = 1.0 / std::sqrt(growth * w.norm());
        v = u / growth;
        if (it > 4 && std::abs(s - sprev) < rtol * s) break;
        sprev = s;
    }
    return s;
}

double sigma_min_single(const Matrix& a, double rtol, int max_iter) {
    const int n = int(a.rows());
    using MatF = Eigen::Matrix<std::complex<float>, Eigen::Dynamic, Eigen::Dynamic>;
    using VecF = Eigen::Matrix<std::complex<float>, Eigen::Dynamic, 1>;
    MatF lu = a.cast<std::complex<float>>();
    std::vector<int> ipiv(n);
    int info = 0;
    cgetrf_(&n, &n, lu.data(), &n, ipiv.data(), &info);
    if (info > 0) return 0.0;  // exactly singular in single precision
    if (info < 0) throw std::runtime_error("cgetrf: bad argument");
    VecF v = deterministic_start(n).cast<std::complex<float>>();
    const int one = 1;
    double s = 0, sprev = 0;
    for (int it = 0; it < max_iter; ++it) {
        VecF w = v;
        cgetrs_("N", &n, &one, lu.data(), &n, ipiv.data(), w.data(), &n, &info);
        float wn = w.norm();
        VecF u = w / wn;
        cgetrs_("C", &n, &one, lu.data(), &n, ipiv.data(), u.data(), &n, &info);
        float growth = u.norm();
        s = 1.0 / std::sqrt(double(growth) * double(wn));
        v = u / growth;
        if (it > 4 && std::abs(s - sprev) < rtol * s) break;
        sprev = s;
    }
    return s;
}

std::vector<double> singular_values(const Matrix& a) {
    Matrix work_a = a;
    int n = int(a.rows()), m = int(a.cols()), info = 0, lwork = -1;
    std::vector<double> s(std::min(n, m));
    std::vector<double> rwork(size_t(7) * std::min(n, m) * std::min(n, m) + 4 * std::min(n, m));
    std::vector<int> iwork(8 * std::min(n, m));
    Complex wq;
    Complex* nullp = nullptr;
    zgesdd_("N", &n, &m, work_a.data(), &n, s.data(), nullp, &n, nullp, &n, &wq, &lwork,
            rwork.data(), iwork.data(), &info);
    lwork = int(wq.real());
    std::vector<Complex> work(lwork);
    zgesdd_("N", &n, &m, work_a.data(), &n, s.data(), nullp, &n, nullp, &n, work.data(), &lwork,
            rwork.data(), iwork.data(), &info);
    if (info != 0) throw std::runtime_error("zgesdd failed");
    return s;
}

std::vector<double> singular_values_jacobi(Matrix a) {
    const int n = int(a.cols());
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) {
                Complex apq = a.col(p).dot(a.col(q));  // conj(p) . q
                double app = a.col(p).squaredNorm(), aqq = a.col(q).squaredNorm();
                off = std::max(off, std::abs(apq) / std::sqrt(app * aqq + 1e-300));
                if (std::abs(apq) < 1e-30) continue;
                // 2x2 Hermitian eigenproblem [[app, apq],[conj(apq), aqq]]
                double tau = (aqq - app) / (2.0 * std::abs(apq));
                double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1 + tau * tau));
                double c = 1.0 / std::sqrt(1 + t * t);
                Complex phase = apq / std::abs(apq);
                Complex svec = t * c * phase;
                Eigen::VectorXcd colp = a.col(p), colq = a.col(q);
                a.col(p) = c * colp - std::conj(svec) * colq;
                a.col(q) = svec * colp + c * colq;
            }
        if (off < 1e-14) break;
    }
    std::vector<double> s(n);
    for (int j = 0; j < n; ++j) s[j] = a.col(j).norm();
    std::sort(s.begin(), s.end(), std::greater<double>());
    return s;
}

GmresResult gmres(const Matrix& a, const Vector& b, GmresOptions opt) {
    const int n = int(a.rows());
    if (a.cols() != n || b.size() != n) throw std::invalid_argument("gmres: shape mismatch");
    int maxit = opt.max_iter > 0 ? std::min(opt.max_iter, n) : n;
    const double bnorm = b.norm();
    GmresResult res;
    if (bnorm == 0) {
        res.x = Vector::Zero(n);
        res.converged = true;
        return res;
    }

    Vector x0 = opt.x0 ? *opt.x0 : Vector(Vector::Zero(n));
    Vector r0 = opt.x0 ? Vector(b - a * x0) : b;
    double beta = r0.norm();
    if (beta / bnorm <= opt.tol) {
        res.x = x0;
        res.converged = true;
        res.residual_history.push_back(beta / bnorm);
        return res;
    }

    std::vector<Vector> V;
    V.reserve(maxit + 1);
    V.push_back(r0 / beta);
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(maxit + 1, maxit);
    std::vector<Complex> cs(maxit), sn(maxit);
    Vector g = Vector::Zero(maxit + 1);
    g[0] = beta;

    int k = 0;
    double relres = beta / bnorm;
    res.residual_history.push_back(relres);
    for (; k < maxit; ++k) {
        Vector w = a * V[k];
        // modified Gram-Schmidt with one reorthogonalization pass
        for (int pass = 0; pass < 2; ++pass)
            for (int j = 0; j <= k; ++j) {
                Complex hjk = V[j].dot(w);
                H(j, k) += hjk;
                w -= hjk * V[j];
            }
        double hk1 = w.norm();
        H(k + 1, k) = hk1;
        if (hk1 > 0) V.push_back(w / hk1);

        // apply accumulated Givens rotations, then form the new one
        for (int j = 0; j < k; ++j) {
            Complex t = cs[j] * H(j, k) + sn[j] * H(j + 1, k);
            H(j + 1, k) = -std::conj(sn[j]) * H(j, k) + std::conj(cs[j]) * H(j + 1, k);
            H(j, k) = t;
        }
        double denom = std::sqrt(std::norm(H(k, k)) + std::norm(H(k + 1, k)));
        if (denom == 0) {
            cs[k] = 1;
            sn[k] = 0;
        } else {
            cs[k] = std::conj(H(k, k)) / denom;
            sn[k] = std::conj(H(k + 1, k)) / denom;
        }
        H(k, k) = cs[k] * H(k, k) + sn[k] * H(k + 1, k);
        H(k + 1, k) = 0;
        g[k + 1] = -std::conj(sn[k]) * g[k];
        g[k] = cs[k] * g[k];

        double newres = std::abs(g[k + 1]) / bnorm;
        relres = newres;
        res.residual_history.push_back(relres);
        if (newres <= opt.tol || hk1 == 0) {
            ++k;
            break;
        }
        // roundoff floor: no progress in 25 iterations at ~eps scale
        if (k > 25) {
            double old = res.residual_history[k - 25];
            if (relres > 0.5 * old && relres < 1e-12) {
                ++k;
                break;
            }
        }
    }

    // back substitution on the triangular H
    Vector y = Vector::Zero(k);
    for (int i = k - 1; i >= 0; --i) {
        Complex acc = g[i];
        for (int j = i + 1; j < k; ++j) acc -= H(i, j) * y[j];
        y[i] = acc / H(i, i);
    }
    Vector x = x0;
    for (int j = 0; j < k; ++j) x += y[j] * V[j];

    res.x = x;
    res.iterations = k;
    double final_rel = (b - a * x).norm() / bnorm;
    res.converged = final_rel <= std::max(opt.tol, 50 * 2.22e-16);
    if (!res.converged && k >= maxit) throw GmresNonConvergence(std::move(x), final_rel);
    return res;
}

}  // namespace dirac2d
