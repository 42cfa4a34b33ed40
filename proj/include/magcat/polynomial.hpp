#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <span>

#include <Eigen/Dense>

namespace magcat {

using cplx = std::complex<double>;

/// Maximum number of real variables a polynomial can carry. Fourier
/// transforms of two-mode objects need 8 (4 position + 4 frequency).
inline constexpr int kMaxVars = 8;

/// Exponent vector of a monomial. Unused trailing slots stay zero.
using Monomial = std::array<std::uint8_t, kMaxVars>;

int total_degree(const Monomial& m);

/// Sparse multivariate polynomial with complex coefficients over a fixed
/// number of variables. Zero coefficients are never stored.
class Polynomial {
  public:
    explicit Polynomial(int n_vars = 0);

    static Polynomial constant(int n_vars, cplx value);
    static Polynomial variable(int n_vars, int index, cplx coefficient = 1.0);

    int n_vars() const { return n_vars_; }
    int degree() const;
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const std::map<Monomial, cplx>& terms() const { return terms_; }

    cplx coefficient(const Monomial& m) const;
    void add_term(const Monomial& m, cplx coefficient);

    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator-=(const Polynomial& other);
    Polynomial& operator*=(cplx factor);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, cplx s) { return a *= s; }
    friend Polynomial operator*(cplx s, Polynomial a) { return a *= s; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

    Polynomial derivative(int var) const;
    Polynomial times_variable(int var) const;

    cplx evaluate(std::span<const cplx> point) const;
    cplx evaluate(std::span<const double> point) const;

    /// p(M u + t), a polynomial in the M.cols() variables u.
    Polynomial compose_affine(const Eigen::MatrixXcd& M, const Eigen::VectorXcd& t) const;

    /// Relabels variable i as variable index_map[i] of a polynomial over
    /// new_n_vars variables.
    Polynomial embed(int new_n_vars, std::span<const int> index_map) const;

    double max_abs_coefficient() const;

    /// Drops coefficients with |c| <= threshold.
    void prune(double threshold);

  private:
    int n_vars_;
    std::map<Monomial, cplx> terms_;
};

}  // namespace magcat
