#include "magcat/polynomial.hpp"

#include <algorithm>
#include <vector>

#include "magcat/errors.hpp"

namespace magcat {

int total_degree(const Monomial& m) {
    int d = 0;
    for (auto e : m) d += e;
    return d;
}

Polynomial::Polynomial(int n_vars) : n_vars_(n_vars) {
    if (n_vars < 0 || n_vars > kMaxVars) {
        throw DimensionError("polynomial variable count out of range: " + std::to_string(n_vars));
    }
}

Polynomial Polynomial::constant(int n_vars, cplx value) {
    Polynomial p(n_vars);
    p.add_term(Monomial{}, value);
    return p;
}

Polynomial Polynomial::variable(int n_vars, int index, cplx coefficient) {
    if (index < 0 || index >= n_vars) throw DimensionError("polynomial variable index out of range");
    Polynomial p(n_vars);
    Monomial m{};
    m[index] = 1;
    p.add_term(m, coefficient);
    return p;
}

int Polynomial::degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, total_degree(m));
    return d;
}

cplx Polynomial::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? cplx{} : it->second;
}

void Polynomial::add_term(const Monomial& m, cplx coefficient) {
    if (coefficient == cplx{}) return;
    auto [it, inserted] = terms_.try_emplace(m, coefficient);
    if (!inserted) {
        it->second += coefficient;
        if (it->second == cplx{}) terms_.erase(it);
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
    if (other.n_vars_ != n_vars_) throw DimensionError("polynomial variable count mismatch");
    for (const auto& [m, c] : other.terms_) add_term(m, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
    if (other.n_vars_ != n_vars_) throw DimensionError("polynomial variable count mismatch");
    for (const auto& [m, c] : other.terms_) add_term(m, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(cplx factor) {
    if (factor == cplx{}) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, c] : terms_) c *= factor;
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.n_vars_ != b.n_vars_) throw DimensionError("polynomial variable count mismatch");
    Polynomial out(a.n_vars_);
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            Monomial m{};
            for (int i = 0; i < kMaxVars; ++i) m[i] = static_cast<std::uint8_t>(ma[i] + mb[i]);
            out.add_term(m, ca * cb);
        }
    }
    return out;
}

Polynomial Polynomial::derivative(int var) const {
    if (var < 0 || var >= n_vars_) throw DimensionError("derivative variable out of range");
    Polynomial out(n_vars_);
    for (const auto& [m, c] : terms_) {
        if (m[var] == 0) continue;
        Monomial d = m;
        d[var] -= 1;
        out.add_term(d, c * static_cast<double>(m[var]));
    }
    return out;
}

Polynomial Polynomial::times_variable(int var) const {
    if (var < 0 || var >= n_vars_) throw DimensionError("variable out of range");
    Polynomial out(n_vars_);
    for (const auto& [m, c] : terms_) {
        Monomial d = m;
        d[var] += 1;
        out.add_term(d, c);
    }
    return out;
}

namespace {

template <class T>
cplx evaluate_impl(const std::map<Monomial, cplx>& terms, int n_vars, std::span<const T> point) {
    if (static_cast<int>(point.size()) != n_vars) throw DimensionError("evaluation point has wrong dimension");
    cplx sum{};
    for (const auto& [m, c] : terms) {
        cplx v = c;
        for (int i = 0; i < n_vars; ++i) {
            for (int k = 0; k < m[i]; ++k) v *= point[i];
        }
        sum += v;
    }
    return sum;
}

}  // namespace

cplx Polynomial::evaluate(std::span<const cplx> point) const {
    return evaluate_impl(terms_, n_vars_, point);
}

cplx Polynomial::evaluate(std::span<const double> point) const {
    return evaluate_impl(terms_, n_vars_, point);
}

Polynomial Polynomial::compose_affine(const Eigen::MatrixXcd& M, const Eigen::VectorXcd& t) const {
    if (M.rows() != n_vars_ || t.size() != n_vars_) throw DimensionError("affine map does not match polynomial");
    const int m_vars = static_cast<int>(M.cols());
    // Each old variable becomes a linear polynomial in the new ones.
    std::vector<std::vector<Polynomial>> powers(n_vars_);
    for (int i = 0; i < n_vars_; ++i) {
        Polynomial lin = Polynomial::constant(m_vars, t(i));
        for (int j = 0; j < m_vars; ++j) {
            if (M(i, j) != cplx{}) lin += Polynomial::variable(m_vars, j, M(i, j));
        }
        powers[i].push_back(Polynomial::constant(m_vars, 1.0));
        powers[i].push_back(std::move(lin));
    }
    auto power = [&](int i, int e) -> const Polynomial& {
        while (static_cast<int>(powers[i].size()) <= e) powers[i].push_back(powers[i].back() * powers[i][1]);
        return powers[i][e];
    };
    Polynomial out(m_vars);
    for (const auto& [m, c] : terms_) {
        Polynomial term = Polynomial::constant(m_vars, c);
        for (int i = 0; i < n_vars_; ++i) {
            if (m[i] > 0) term = term * power(i, m[i]);
        }
        out += term;
    }
    return out;
}

Polynomial Polynomial::embed(int new_n_vars, std::span<const int> index_map) const {
    if (static_cast<int>(index_map.size()) != n_vars_) throw DimensionError("embedding map has wrong size");
    Polynomial out(new_n_vars);
    for (const auto& [m, c] : terms_) {
        Monomial d{};
        for (int i = 0; i < n_vars_; ++i) {
            if (m[i] == 0) continue;
            if (index_map[i] < 0 || index_map[i] >= new_n_vars) throw DimensionError("embedding target out of range");
            d[index_map[i]] = m[i];
        }
        out.add_term(d, c);
    }
    return out;
}

double Polynomial::max_abs_coefficient() const {
    double v = 0.0;
    for (const auto& [m, c] : terms_) v = std::max(v, std::abs(c));
    return v;
}

void Polynomial::prune(double threshold) {
    std::erase_if(terms_, [threshold](const auto& kv) { return std::abs(kv.second) <= threshold; });
}

}  // namespace magcat
