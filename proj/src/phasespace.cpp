#include "magcat/phasespace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "magcat/errors.hpp"
#include "magcat/parallel.hpp"

namespace magcat {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::MatrixXcd symmetrized(const Eigen::MatrixXcd& Q) { return 0.5 * (Q + Q.transpose()); }

/// E[prod_i w_i^{e_i}] for a zero-mean Gaussian with (complex) covariance
/// cov, via Stein's identity E[w_j g(w)] = sum_i cov_ji E[d_i g(w)].
class GaussianMoments {
  public:
    explicit GaussianMoments(const Eigen::MatrixXcd& cov) : cov_(cov) {}

    cplx operator()(const Monomial& e) {
        auto it = memo_.find(e);
        if (it != memo_.end()) return it->second;
        int j = -1;
        int deg = 0;
        for (int i = 0; i < cov_.rows(); ++i) {
            deg += e[i];
            if (j < 0 && e[i] > 0) j = i;
        }
        cplx value;
        if (deg == 0) {
            value = 1.0;
        } else if (deg % 2 == 1) {
            value = 0.0;
        } else {
            Monomial rest = e;
            rest[j] -= 1;
            value = 0.0;
            for (int i = 0; i < cov_.rows(); ++i) {
                if (rest[i] == 0 || cov_(j, i) == cplx{}) continue;
                Monomial lower = rest;
                lower[i] -= 1;
                value += cov_(j, i) * static_cast<double>(rest[i]) * (*this)(lower);
            }
        }
        memo_.emplace(e, value);
        return value;
    }

  private:
    Eigen::MatrixXcd cov_;
    std::map<Monomial, cplx> memo_;
};

/// Principal square root of det(A) continued from the real positive-definite
/// part; valid whenever Re(A) is positive definite. Throws otherwise.
cplx sqrt_det_with_pd_real_part(const Eigen::MatrixXcd& A) {
    const Eigen::MatrixXd R = A.real();
    const Eigen::MatrixXd S = A.imag();
    Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (R + R.transpose()));
    if (llt.info() != Eigen::Success) throw IntegrabilityError("Gaussian integral diverges: real part not positive definite");
    const Eigen::MatrixXd L = llt.matrixL();
    for (int i = 0; i < L.rows(); ++i) {
        if (!(L(i, i) > 0.0)) throw IntegrabilityError("Gaussian integral diverges: real part not positive definite");
    }
    const Eigen::MatrixXd Linv = L.inverse();
    const Eigen::MatrixXd T = Linv * (0.5 * (S + S.transpose())) * Linv.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (T + T.transpose()), Eigen::EigenvaluesOnly);
    cplx result = L.diagonal().prod();
    for (int i = 0; i < es.eigenvalues().size(); ++i) result *= std::sqrt(cplx(1.0, es.eigenvalues()(i)));
    return result;
}

void check_square(const Eigen::MatrixXcd& Q, Eigen::Index n, const char* what) {
    if (Q.rows() != n || Q.cols() != n) throw DimensionError(std::string(what) + ": matrix has wrong dimension");
}

}  // namespace

// --- PolyGaussian --------------------------------------------------------

PolyGaussian::PolyGaussian(Domain domain, Eigen::MatrixXcd Q, Eigen::VectorXcd b, Polynomial poly, cplx scale)
    : domain_(domain), Q_(std::move(Q)), b_(std::move(b)), poly_(std::move(poly)), scale_(scale) {
    check_square(Q_, b_.size(), "PolyGaussian");
    if (poly_.n_vars() != b_.size()) throw DimensionError("PolyGaussian: polynomial variable count does not match");
    Q_ = symmetrized(Q_);
    normalize_representation();
}

void PolyGaussian::normalize_representation() {
    const double m = poly_.max_abs_coefficient();
    if (m > 0.0) {
        poly_ *= 1.0 / m;
        scale_ *= m;
        poly_.prune(kCoefficientDropThreshold);
    }
}

int PolyGaussian::n_modes() const {
    if (n_vars() % 2 != 0) throw DimensionError("PolyGaussian has an unpaired quadrature variable");
    return n_vars() / 2;
}

cplx PolyGaussian::evaluate(std::span<const double> point) const {
    if (static_cast<int>(point.size()) != n_vars()) throw DimensionError("evaluation point has wrong dimension");
    Eigen::VectorXcd v(n_vars());
    for (int i = 0; i < n_vars(); ++i) v(i) = point[i];
    const cplx expo = -0.5 * (v.transpose() * Q_ * v)(0, 0) + (b_.transpose() * v)(0, 0);
    return scale_ * poly_.evaluate(point) * std::exp(expo);
}

cplx PolyGaussian::evaluate(std::span<const cplx> point) const {
    if (static_cast<int>(point.size()) != n_vars()) throw DimensionError("evaluation point has wrong dimension");
    Eigen::VectorXcd v(n_vars());
    for (int i = 0; i < n_vars(); ++i) v(i) = point[i];
    // transpose(), not adjoint(): the exponent is bilinear.
    const cplx expo = -0.5 * (v.transpose() * Q_ * v)(0, 0) + (b_.transpose() * v)(0, 0);
    return scale_ * poly_.evaluate(point) * std::exp(expo);
}

cplx PolyGaussian::trace() const {
    if (domain_ == Domain::Characteristic) {
        return scale_ * poly_.coefficient(Monomial{});
    }
    std::vector<int> all(n_vars());
    for (int i = 0; i < n_vars(); ++i) all[i] = i;
    const PolyGaussian scalar = integrate_out(*this, all);
    return scalar.scale() * scalar.poly().coefficient(Monomial{});
}

PolyGaussian PolyGaussian::scaled(cplx factor) const {
    PolyGaussian out = *this;
    out.scale_ *= factor;
    return out;
}

// --- mixtures ------------------------------------------------------------

PolyGaussianMixture::PolyGaussianMixture(PolyGaussian single) { terms.push_back({1.0, std::move(single)}); }

Domain PolyGaussianMixture::domain() const {
    if (terms.empty()) throw DimensionError("empty mixture");
    return terms.front().state.domain();
}

int PolyGaussianMixture::n_vars() const {
    if (terms.empty()) throw DimensionError("empty mixture");
    return terms.front().state.n_vars();
}

double PolyGaussianMixture::trace() const {
    double t = 0.0;
    for (const auto& term : terms) t += term.weight * term.state.trace().real();
    return t;
}

PolyGaussianMixture PolyGaussianMixture::normalized() const {
    PolyGaussianMixture out;
    double total = 0.0;
    for (const auto& term : terms) {
        if (term.weight < 0.0) throw NumericalError("negative mixture weight");
        const double tr = term.state.trace().real();
        const double w = term.weight * tr;
        if (w < 0.0) throw NumericalError("mixture term with negative trace");
        if (w <= 0.0) continue;
        out.terms.push_back({w, term.state.scaled(1.0 / tr)});
        total += w;
    }
    if (!(total > 0.0)) throw NormalizationError("mixture has zero total trace");
    for (auto& term : out.terms) term.weight /= total;
    return out;
}

cplx PolyGaussianMixture::evaluate(std::span<const double> point) const {
    cplx sum{};
    for (const auto& term : terms) sum += term.weight * term.state.evaluate(point);
    return sum;
}

// --- construction --------------------------------------------------------

namespace {

void check_covariance(const Eigen::MatrixXd& V) {
    if (V.rows() != V.cols() || V.rows() == 0 || V.rows() % 2 != 0) {
        throw DimensionError("covariance matrix must be square with even dimension");
    }
    if ((V - V.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, V.cwiseAbs().maxCoeff())) {
        throw DimensionError("covariance matrix is not symmetric");
    }
    // V + (i/2) Omega >= 0.
    const Eigen::Index n = V.rows();
    Eigen::MatrixXcd H = V.cast<cplx>();
    for (Eigen::Index k = 0; k < n / 2; ++k) {
        H(2 * k, 2 * k + 1) += cplx(0.0, 0.5);
        H(2 * k + 1, 2 * k) -= cplx(0.0, 0.5);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10) throw PhysicalityError("covariance matrix violates the uncertainty principle");
}

}  // namespace

PolyGaussian gaussian_char_from_cov(const Eigen::MatrixXd& V) {
    return gaussian_char_from_cov(V, Eigen::VectorXd::Zero(V.rows()));
}

PolyGaussian gaussian_char_from_cov(const Eigen::MatrixXd& V, const Eigen::VectorXd& mean) {
    check_covariance(V);
    if (mean.size() != V.rows()) throw DimensionError("mean vector has wrong dimension");
    const int n = static_cast<int>(V.rows());
    return PolyGaussian(Domain::Characteristic, V.cast<cplx>(), cplx(0.0, 1.0) * mean.cast<cplx>(),
                        Polynomial::constant(n, 1.0));
}

PolyGaussian gaussian_wigner_from_cov(const Eigen::MatrixXd& V) {
    return gaussian_wigner_from_cov(V, Eigen::VectorXd::Zero(V.rows()));
}

PolyGaussian gaussian_wigner_from_cov(const Eigen::MatrixXd& V, const Eigen::VectorXd& mean) {
    check_covariance(V);
    if (mean.size() != V.rows()) throw DimensionError("mean vector has wrong dimension");
    const int n = static_cast<int>(V.rows());
    const Eigen::MatrixXd P = V.inverse();
    const Eigen::VectorXd b = P * mean;
    const double norm = std::pow(kTwoPi, -0.5 * n) / std::sqrt(V.determinant());
    const double c = -0.5 * mean.dot(b);
    return PolyGaussian(Domain::Wigner, P.cast<cplx>(), b.cast<cplx>(), Polynomial::constant(n, 1.0),
                        norm * std::exp(c));
}

// --- closure operations ---------------------------------------------------

PolyGaussian affine_substitute(const PolyGaussian& f, const Eigen::MatrixXcd& M, const Eigen::VectorXcd& t) {
    if (M.rows() != f.n_vars() || t.size() != f.n_vars()) throw DimensionError("affine map does not match state");
    const Eigen::MatrixXcd& Q = f.quadratic();
    const Eigen::VectorXcd& b = f.linear();
    Eigen::MatrixXcd Qn = M.transpose() * Q * M;
    Eigen::VectorXcd bn = M.transpose() * (b - Q * t);
    const cplx c = -0.5 * (t.transpose() * Q * t)(0, 0) + (b.transpose() * t)(0, 0);
    return PolyGaussian(f.domain(), std::move(Qn), std::move(bn), f.poly().compose_affine(M, t),
                        f.scale() * std::exp(c));
}

PolyGaussian integrate_out(const PolyGaussian& f, std::span<const int> vars) {
    const int n = f.n_vars();
    std::vector<bool> removed(n, false);
    for (int v : vars) {
        if (v < 0 || v >= n || removed[v]) throw DimensionError("integrate_out: bad or repeated variable index");
        removed[v] = true;
    }
    const int k = static_cast<int>(vars.size());
    if (k == 0) return f;
    std::vector<int> keep;
    for (int i = 0; i < n; ++i) {
        if (!removed[i]) keep.push_back(i);
    }
    const int nk = static_cast<int>(keep.size());

    const Eigen::MatrixXcd& Q = f.quadratic();
    const Eigen::VectorXcd& b = f.linear();
    Eigen::MatrixXcd A(k, k), Qwu(k, nk), Quu(nk, nk);
    Eigen::VectorXcd bw(k), bu(nk);
    for (int i = 0; i < k; ++i) {
        bw(i) = b(vars[i]);
        for (int j = 0; j < k; ++j) A(i, j) = Q(vars[i], vars[j]);
        for (int j = 0; j < nk; ++j) Qwu(i, j) = Q(vars[i], keep[j]);
    }
    for (int i = 0; i < nk; ++i) {
        bu(i) = b(keep[i]);
        for (int j = 0; j < nk; ++j) Quu(i, j) = Q(keep[i], keep[j]);
    }
    const cplx sqrt_det = sqrt_det_with_pd_real_part(A);
    const Eigen::MatrixXcd Ainv = A.inverse();

    Eigen::MatrixXcd Qn = Quu - Qwu.transpose() * Ainv * Qwu;
    Eigen::VectorXcd bn = bu - Qwu.transpose() * Ainv * bw;
    const cplx c = 0.5 * (bw.transpose() * Ainv * bw)(0, 0);

    // Shift w = w' + Ainv (bw - Qwu u) and integrate the monomials in w'
    // against the centred Gaussian with covariance Ainv.
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
    Eigen::VectorXcd t = Eigen::VectorXcd::Zero(n);
    const Eigen::MatrixXcd shift_lin = -Ainv * Qwu;
    const Eigen::VectorXcd shift_const = Ainv * bw;
    for (int j = 0; j < nk; ++j) M(keep[j], j) = 1.0;
    for (int i = 0; i < k; ++i) {
        M(vars[i], nk + i) = 1.0;
        for (int j = 0; j < nk; ++j) M(vars[i], j) = shift_lin(i, j);
        t(vars[i]) = shift_const(i);
    }
    const Polynomial joint = f.poly().compose_affine(M, t);
    GaussianMoments moments(Ainv);
    Polynomial reduced(nk);
    for (const auto& [mono, coef] : joint.terms()) {
        Monomial wexp{};
        Monomial uexp{};
        for (int i = 0; i < nk; ++i) uexp[i] = mono[i];
        for (int i = 0; i < k; ++i) wexp[i] = mono[nk + i];
        const cplx mom = moments(wexp);
        if (mom != cplx{}) reduced.add_term(uexp, coef * mom);
    }
    const cplx prefactor = std::pow(kTwoPi, 0.5 * k) / sqrt_det;
    return PolyGaussian(f.domain(), std::move(Qn), std::move(bn), std::move(reduced),
                        f.scale() * prefactor * std::exp(c));
}

PolyGaussian substitute(const PolyGaussian& f, int var, double value) {
    const int n = f.n_vars();
    if (var < 0 || var >= n) throw DimensionError("substitute: variable out of range");
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n - 1);
    Eigen::VectorXcd t = Eigen::VectorXcd::Zero(n);
    for (int i = 0, j = 0; i < n; ++i) {
        if (i == var) continue;
        M(i, j++) = 1.0;
    }
    t(var) = value;
    return affine_substitute(f, M, t);
}

PolyGaussian rotate_mode(const PolyGaussian& f, int mode, double theta) {
    const int n = f.n_vars();
    if (mode < 0 || 2 * mode + 1 >= n) throw DimensionError("rotate_mode: mode out of range");
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(n, n);
    // g(v) = f(R(-theta) v)
    const double c = std::cos(theta), s = std::sin(theta);
    M(2 * mode, 2 * mode) = c;
    M(2 * mode, 2 * mode + 1) = s;
    M(2 * mode + 1, 2 * mode) = -s;
    M(2 * mode + 1, 2 * mode + 1) = c;
    return affine_substitute(f, M, Eigen::VectorXcd::Zero(n));
}

PolyGaussian scale_arguments(const PolyGaussian& f, std::span<const double> factor_per_mode) {
    const int modes = f.n_modes();
    if (static_cast<int>(factor_per_mode.size()) != modes) throw DimensionError("scale_arguments: one factor per mode required");
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(2 * modes, 2 * modes);
    for (int k = 0; k < modes; ++k) {
        M(2 * k, 2 * k) = factor_per_mode[k];
        M(2 * k + 1, 2 * k + 1) = factor_per_mode[k];
    }
    return affine_substitute(f, M, Eigen::VectorXcd::Zero(2 * modes));
}

PolyGaussian multiply_gaussian(const PolyGaussian& f, const Eigen::MatrixXcd& extra) {
    check_square(extra, f.n_vars(), "multiply_gaussian");
    return PolyGaussian(f.domain(), f.quadratic() + extra, f.linear(), f.poly(), f.scale());
}

PolyGaussian apply_first_order(const PolyGaussian& f, std::span<const cplx> grad, std::span<const cplx> mult) {
    const int n = f.n_vars();
    if (static_cast<int>(grad.size()) != n || static_cast<int>(mult.size()) != n) {
        throw DimensionError("apply_first_order: coefficient vectors have wrong size");
    }
    const Eigen::MatrixXcd& Q = f.quadratic();
    const Eigen::VectorXcd& b = f.linear();
    const Polynomial& P = f.poly();
    // d_j (P e^E) = (d_j P + P (b_j - (Q v)_j)) e^E
    Polynomial out(n);
    cplx const_factor{};
    for (int j = 0; j < n; ++j) {
        if (grad[j] == cplx{}) continue;
        out += P.derivative(j) * grad[j];
        const_factor += grad[j] * b(j);
    }
    out += P * const_factor;
    for (int l = 0; l < n; ++l) {
        cplx lin = mult[l];
        for (int j = 0; j < n; ++j) lin -= grad[j] * Q(j, l);
        if (lin != cplx{}) out += P.times_variable(l) * lin;
    }
    return PolyGaussian(f.domain(), Q, b, std::move(out), f.scale());
}

PolyGaussian derivative(const PolyGaussian& f, int var) {
    const int n = f.n_vars();
    if (var < 0 || var >= n) throw DimensionError("derivative: variable out of range");
    std::vector<cplx> grad(n, 0.0), mult(n, 0.0);
    grad[var] = 1.0;
    return apply_first_order(f, grad, mult);
}

// --- photon operations ----------------------------------------------------

namespace {

// In characteristic coordinates k = sqrt(2)(Re beta, Im beta):
//   d/dbeta = (d_kx - i d_ky)/sqrt2,  d/dbeta^* = (d_kx + i d_ky)/sqrt2,
//   beta = (kx + i ky)/sqrt2,         beta^* = (kx - i ky)/sqrt2.
// sign = +1 gives subtraction, -1 addition.
PolyGaussian photon_operation(const PolyGaussian& state, int mode, double sign) {
    if (state.domain() != Domain::Characteristic) {
        throw DomainError("single-photon operations act on characteristic-domain states");
    }
    const int n = state.n_vars();
    if (mode < 0 || 2 * mode + 1 >= n) throw DimensionError("photon operation: mode out of range");
    const double s = 1.0 / std::sqrt(2.0);
    const cplx I(0.0, 1.0);
    const int kx = 2 * mode, ky = 2 * mode + 1;
    std::vector<cplx> grad(n, 0.0), mult(n, 0.0);
    // (d_beta^* +- beta/2)
    grad[kx] = s;
    grad[ky] = I * s;
    mult[kx] = sign * s / 2.0;
    mult[ky] = sign * I * s / 2.0;
    PolyGaussian inner = apply_first_order(state, grad, mult);
    // (d_beta +- beta^*/2)
    grad[kx] = s;
    grad[ky] = -I * s;
    mult[kx] = sign * s / 2.0;
    mult[ky] = -sign * I * s / 2.0;
    return apply_first_order(inner, grad, mult).scaled(-1.0);
}

constexpr double kDegenerateHerald = 1e-12;

}  // namespace

PolyGaussian apply_subtraction(const PolyGaussian& state, int mode) {
    const double before = std::abs(state.trace());
    PolyGaussian out = photon_operation(state, mode, +1.0);
    if (out.trace().real() <= kDegenerateHerald * before) {
        throw DegenerateHeraldError("photon subtraction has vanishing heralding probability");
    }
    return out;
}

PolyGaussian apply_addition(const PolyGaussian& state, int mode) {
    const double before = std::abs(state.trace());
    PolyGaussian out = photon_operation(state, mode, -1.0);
    if (out.trace().real() <= kDegenerateHerald * before) {
        throw DegenerateHeraldError("photon addition has vanishing heralding probability");
    }
    return out;
}

namespace {

template <class Op>
PolyGaussianMixture map_terms(const PolyGaussianMixture& in, Op op) {
    PolyGaussianMixture out;
    out.terms.reserve(in.terms.size());
    for (const auto& term : in.terms) out.terms.push_back({term.weight, op(term.state)});
    return out;
}

}  // namespace

PolyGaussianMixture apply_subtraction(const PolyGaussianMixture& state, int mode) {
    return map_terms(state, [mode](const PolyGaussian& s) { return apply_subtraction(s, mode); });
}

PolyGaussianMixture apply_addition(const PolyGaussianMixture& state, int mode) {
    return map_terms(state, [mode](const PolyGaussian& s) { return apply_addition(s, mode); });
}

// --- Fourier transforms ----------------------------------------------------

namespace {

/// Builds f(v) * exp(sign * i * x.v) over the joint variables (x, v) and
/// integrates v out.
PolyGaussian fourier(const PolyGaussian& f, double sign, Domain target, double prefactor) {
    const int d = f.n_vars();
    if (2 * d > kMaxVars) throw DimensionError("Fourier transform exceeds the supported variable count");
    Eigen::MatrixXcd Q = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
    Q.bottomRightCorner(d, d) = f.quadratic();
    // -1/2 [x;v]^T [[0, cI],[cI, Q]] [x;v] = -c x.v - 1/2 v^T Q v
    const cplx coupling(0.0, -sign);
    for (int i = 0; i < d; ++i) {
        Q(i, d + i) = coupling;
        Q(d + i, i) = coupling;
    }
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(2 * d);
    b.tail(d) = f.linear();
    std::vector<int> map(d);
    for (int i = 0; i < d; ++i) map[i] = d + i;
    PolyGaussian joint(target, std::move(Q), std::move(b), f.poly().embed(2 * d, map), f.scale() * prefactor);
    std::vector<int> vars(map.begin(), map.end());
    return integrate_out(joint, vars);
}

}  // namespace

PolyGaussian char_to_wigner(const PolyGaussian& state) {
    if (state.domain() != Domain::Characteristic) throw DomainError("char_to_wigner expects a characteristic-domain state");
    return fourier(state, -1.0, Domain::Wigner, std::pow(kTwoPi, -state.n_vars()));
}

PolyGaussian wigner_to_char(const PolyGaussian& state) {
    if (state.domain() != Domain::Wigner) throw DomainError("wigner_to_char expects a Wigner-domain state");
    return fourier(state, +1.0, Domain::Characteristic, 1.0);
}

PolyGaussianMixture char_to_wigner(const PolyGaussianMixture& state) {
    return map_terms(state, [](const PolyGaussian& s) { return char_to_wigner(s); });
}

PolyGaussianMixture wigner_to_char(const PolyGaussianMixture& state) {
    return map_terms(state, [](const PolyGaussian& s) { return wigner_to_char(s); });
}

// --- grids ---------------------------------------------------------------

GridAxes GridAxes::refined() const {
    GridAxes g = *this;
    g.nx = 2 * nx - 1;
    g.ny = 2 * ny - 1;
    return g;
}

namespace {

struct CompiledTerm {
    cplx weight;  // mixture weight * scale
    cplx qxx, qxy, qyy, bx, by;
    std::vector<std::tuple<int, int, cplx>> monomials;
    int max_degree = 0;
};

CompiledTerm compile(double weight, const PolyGaussian& s) {
    CompiledTerm c;
    c.weight = weight * s.scale();
    c.qxx = s.quadratic()(0, 0);
    c.qxy = s.quadratic()(0, 1);
    c.qyy = s.quadratic()(1, 1);
    c.bx = s.linear()(0);
    c.by = s.linear()(1);
    for (const auto& [m, coef] : s.poly().terms()) {
        c.monomials.emplace_back(m[0], m[1], coef);
        c.max_degree = std::max({c.max_degree, int(m[0]), int(m[1])});
    }
    return c;
}

}  // namespace

WignerGrid eval_grid(const PolyGaussianMixture& state, const GridAxes& axes, bool renormalize) {
    if (state.terms.empty()) throw DimensionError("eval_grid: empty mixture");
    for (const auto& term : state.terms) {
        if (term.state.domain() != Domain::Wigner) throw DomainError("eval_grid expects Wigner-domain states");
        if (term.state.n_vars() != 2) throw DimensionError("eval_grid requires exactly one remaining mode");
    }
    if (axes.nx < 2 || axes.ny < 2) throw DimensionError("eval_grid: need at least two points per axis");
    std::vector<CompiledTerm> compiled;
    compiled.reserve(state.terms.size());
    for (const auto& term : state.terms) compiled.push_back(compile(term.weight, term.state));

    WignerGrid grid;
    grid.axes = axes;
    grid.cell_area = axes.dx() * axes.dy();
    grid.values.resize(axes.ny, axes.nx);
    std::vector<double> max_imag(axes.ny, 0.0);
    parallel_for(static_cast<std::size_t>(axes.ny), [&](std::size_t row) {
        const double y = axes.y(static_cast<int>(row));
        std::vector<double> xp, yp;
        for (int i = 0; i < axes.nx; ++i) {
            const double x = axes.x(i);
            cplx sum{};
            for (const auto& c : compiled) {
                const cplx expo = -0.5 * (c.qxx * x * x + 2.0 * c.qxy * x * y + c.qyy * y * y) + c.bx * x + c.by * y;
                xp.assign(c.max_degree + 1, 1.0);
                yp.assign(c.max_degree + 1, 1.0);
                for (int e = 1; e <= c.max_degree; ++e) {
                    xp[e] = xp[e - 1] * x;
                    yp[e] = yp[e - 1] * y;
                }
                cplx p{};
                for (const auto& [ex, ey, coef] : c.monomials) p += coef * (xp[ex] * yp[ey]);
                sum += c.weight * p * std::exp(expo);
            }
            grid.values(row, i) = sum.real();
            max_imag[row] = std::max(max_imag[row], std::abs(sum.imag()));
        }
    });
    const double max_real = grid.values.cwiseAbs().maxCoeff();
    const double imag = *std::max_element(max_imag.begin(), max_imag.end());
    if (imag > 1e-10 * max_real + 1e-300) {
        throw NumericalError("Wigner grid has a non-negligible imaginary part");
    }
    grid.trace_weight = grid.integral();
    if (renormalize) {
        if (!(grid.trace_weight > 0.0)) throw NormalizationError("Wigner grid integrates to a non-positive value");
        grid.values /= grid.trace_weight;
    }
    return grid;
}

WignerGrid eval_grid(const PolyGaussian& state, const GridAxes& axes, bool renormalize) {
    return eval_grid(PolyGaussianMixture(state), axes, renormalize);
}

void write_grid_csv(const WignerGrid& grid, std::ostream& out) {
    char buf[64];
    const auto& a = grid.axes;
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    out << "# x_min,x_max,nx,y_min,y_max,ny,trace_weight\n";
    out << "# " << num(a.x_min) << ',' << num(a.x_max) << ',' << a.nx << ',' << num(a.y_min) << ',' << num(a.y_max) << ','
        << a.ny << ',' << num(grid.trace_weight) << '\n';
    for (int j = 0; j < a.ny; ++j) {
        for (int i = 0; i < a.nx; ++i) {
            if (i) out << ',';
            out << num(grid.values(j, i));
        }
        out << '\n';
    }
}

WignerGrid read_grid_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw DimensionError("grid CSV: missing header line");
    if (line.find("x_min") != std::string::npos && (!std::getline(in, line) || line.rfind("# ", 0) != 0))
        throw DimensionError("grid CSV: missing header values");
    std::istringstream hs(line.substr(2));
    WignerGrid grid;
    auto& a = grid.axes;
    char comma;
    if (!(hs >> a.x_min >> comma >> a.x_max >> comma >> a.nx >> comma >> a.y_min >> comma >> a.y_max >> comma >> a.ny >>
          comma >> grid.trace_weight)) {
        throw DimensionError("grid CSV: malformed header");
    }
    grid.cell_area = a.dx() * a.dy();
    grid.values.resize(a.ny, a.nx);
    for (int j = 0; j < a.ny; ++j) {
        if (!std::getline(in, line)) throw DimensionError("grid CSV: too few rows");
        std::istringstream rs(line);
        std::string cell;
        for (int i = 0; i < a.nx; ++i) {
            if (!std::getline(rs, cell, ',')) throw DimensionError("grid CSV: too few columns");
            grid.values(j, i) = std::stod(cell);
        }
    }
    return grid;
}

}  // namespace magcat
