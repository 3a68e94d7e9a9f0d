#include "qlogic/quantum.hpp"

#include "qlogic/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qlogic {

namespace {

constexpr double pi = 3.14159265358979323846;

void require_same_size(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
    if (a.size() != b.size())
        throw DimensionError(std::string(op) + ": sizes " + std::to_string(a.size()) + " and " +
                             std::to_string(b.size()));
}

// Dimension 2j+1, or DomainError when 2j is not a nonnegative integer.
std::size_t spin_dimension(double j) {
    double two_j = 2 * j;
    if (!std::isfinite(j) || j < 0 || std::abs(two_j - std::round(two_j)) > 1e-12) {
        std::ostringstream m;
        m << "spin j = " << j << " is not a nonnegative half-integer";
        throw DomainError(m.str());
    }
    return static_cast<std::size_t>(std::llround(two_j)) + 1;
}

// Ladder index k = j - m, or DomainError.
std::size_t ladder_index(double j, double m) {
    std::size_t d = spin_dimension(j);
    double k = j - m;
    if (std::abs(k - std::round(k)) > 1e-12 || k < -1e-12 || k > static_cast<double>(d - 1) + 1e-12) {
        std::ostringstream s;
        s << "m = " << m << " is not in the spin-" << j << " ladder";
        throw DomainError(s.str());
    }
    return static_cast<std::size_t>(std::llround(k));
}

void fix_phase(ComplexMatrix& v, std::size_t col) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        double a = std::abs(v(i, col));
        if (a > 1e-12) {
            Complex ph = std::conj(v(i, col)) / a;
            for (std::size_t k = 0; k < v.size(); ++k) v(k, col) *= ph;
            v(i, col) = a;
            return;
        }
    }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t n, std::initializer_list<Complex> rowmajor) : n_(n), a_(rowmajor) {
    if (a_.size() != n * n)
        throw DimensionError("matrix of size " + std::to_string(n) + " needs " + std::to_string(n * n) +
                             " entries, got " + std::to_string(a_.size()));
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<double>& d) {
    ComplexMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

Complex ComplexMatrix::trace() const {
    Complex t = 0;
    for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0;
    for (const auto& x : a_) s += std::norm(x);
    return std::sqrt(s);
}

double ComplexMatrix::hermiticity_defect() const {
    double m = 0;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i; j < n_; ++j) m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    require_same_size(*this, o, "matrix sum");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    require_same_size(*this, o, "matrix difference");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    for (auto& x : a_) x *= s;
    return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_size(a, b, "matrix product");
    const std::size_t n = a.size();
    ComplexMatrix c(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            Complex x = a(i, k);
            if (x == Complex(0)) continue;
            for (std::size_t j = 0; j < n; ++j) c(i, j) += x * b(k, j);
        }
    return c;
}

StateVector operator*(const ComplexMatrix& a, const StateVector& v) {
    if (a.size() != v.size())
        throw DimensionError("matrix of size " + std::to_string(a.size()) + " applied to vector of length " +
                             std::to_string(v.size()));
    StateVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) out[i] += a(i, j) * v[j];
    return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_size(a, b, "matrix comparison");
    double m = 0;
    for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t n = a.size(), m = b.size();
    ComplexMatrix c(n * m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Complex x = a(i, j);
            if (x == Complex(0)) continue;
            for (std::size_t k = 0; k < m; ++k)
                for (std::size_t l = 0; l < m; ++l) c(i * m + k, j * m + l) = x * b(k, l);
        }
    return c;
}

StateVector kron(const StateVector& a, const StateVector& b) {
    StateVector out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a)
        for (const auto& y : b) out.push_back(x * y);
    return out;
}

ComplexMatrix outer(const StateVector& v) {
    ComplexMatrix m(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
    return m;
}

Complex inner(const StateVector& a, const StateVector& b) {
    if (a.size() != b.size())
        throw DimensionError("inner product of vectors of length " + std::to_string(a.size()) + " and " +
                             std::to_string(b.size()));
    Complex s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double norm(const StateVector& v) { return std::sqrt(std::real(inner(v, v))); }

SpinMatrices spin_components(double j) {
    const std::size_t d = spin_dimension(j);
    SpinMatrices s{ComplexMatrix(d), ComplexMatrix(d), ComplexMatrix(d)};
    for (std::size_t k = 0; k < d; ++k) {
        double m = j - static_cast<double>(k);
        s.z(k, k) = m;
        if (k == 0) continue;
        // <m+1| J+ |m> at row k-1, column k
        double up = std::sqrt(j * (j + 1) - m * (m + 1));
        s.x(k - 1, k) = up / 2;
        s.x(k, k - 1) = up / 2;
        s.y(k - 1, k) = Complex(0, -up / 2);
        s.y(k, k - 1) = Complex(0, up / 2);
    }
    return s;
}

ComplexMatrix spin_operator(double j, Direction d) {
    auto s = spin_components(j);
    double st = std::sin(d.theta);
    return (st * std::cos(d.phi)) * s.x + (st * std::sin(d.phi)) * s.y + Complex(std::cos(d.theta)) * s.z;
}

namespace {

// Eigensystem of S_j(d) with eigenvalue k checked against m = -j + k.
Eigensystem spin_eigensystem(double j, Direction d) {
    auto es = eigensystem(spin_operator(j, d));
    for (std::size_t k = 0; k < es.values.size(); ++k)
        if (std::abs(es.values[k] - (static_cast<double>(k) - j)) > 1e-8)
            throw DomainError("spin operator spectrum deviates from the ladder");
    return es;
}

StateVector column(const ComplexMatrix& m, std::size_t c) {
    StateVector v(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) v[i] = m(i, c);
    return v;
}

}  // namespace

std::vector<ComplexMatrix> projectors(double j, Direction d) {
    auto es = spin_eigensystem(j, d);
    std::vector<ComplexMatrix> out;
    for (std::size_t k = 0; k < es.values.size(); ++k) out.push_back(outer(column(es.vectors, k)));
    return out;
}

StateVector spin_eigenvector(double j, Direction d, double m) {
    std::size_t k = ladder_index(j, m);
    auto es = spin_eigensystem(j, d);
    // values are ascending in m, ladder index counts down from +j
    return column(es.vectors, es.values.size() - 1 - k);
}

std::array<ComplexMatrix, 3> spin1_projector_table(Direction d) {
    const double st = std::sin(d.theta), ct = std::cos(d.theta);
    const double c2 = std::cos(d.theta / 2) * std::cos(d.theta / 2);
    const double s2 = std::sin(d.theta / 2) * std::sin(d.theta / 2);
    const Complex e1 = std::polar(1.0, -d.phi), e2 = std::polar(1.0, -2 * d.phi);
    const double r2 = std::sqrt(2.0);
    auto hermitian = [](Complex a00, Complex a01, Complex a02, Complex a11, Complex a12, Complex a22) {
        return ComplexMatrix(3, {a00, a01, a02, std::conj(a01), a11, a12, std::conj(a02), std::conj(a12), a22});
    };
    return {hermitian(st * st / 2, -e1 * ct * st / r2, -e2 * st * st / 2.0, ct * ct, e1 * ct * st / r2, st * st / 2),
            hermitian(c2 * c2, e1 * c2 * st / r2, e2 * st * st / 4.0, st * st / 2, e1 * s2 * st / r2, s2 * s2),
            hermitian(s2 * s2, -e1 * s2 * st / r2, e2 * st * st / 4.0, st * st / 2, -e1 * c2 * st / r2, c2 * c2)};
}

StateVector singlet(double j) {
    const std::size_t d = spin_dimension(j);
    StateVector psi(d * d);
    const double amp = 1 / std::sqrt(static_cast<double>(d));
    for (std::size_t k = 0; k < d; ++k) psi[k * d + (d - 1 - k)] = (k % 2 == 0 ? amp : -amp);
    return psi;
}

double joint_probability(double j, Direction d1, Direction d2, double m1, double m2) {
    auto v1 = spin_eigenvector(j, d1, m1);
    auto v2 = spin_eigenvector(j, d2, m2);
    // Tr{rho (F1 x F2)} = |<v1 x v2 | psi>|^2
    return std::norm(inner(kron(v1, v2), singlet(j)));
}

double correlation(double j, Direction d1, Direction d2) {
    return project_and_bound(kron(spin_operator(j, d1), spin_operator(j, d2)), singlet(j));
}

double correlation_closed_form(double j, Direction d1, Direction d2) {
    spin_dimension(j);
    return -(j * (j + 1) / 3) * (std::cos(d1.theta) * std::cos(d2.theta) +
                                 std::cos(d1.phi - d2.phi) * std::sin(d1.theta) * std::sin(d2.theta));
}

namespace {

void require_angle(double theta) {
    if (!(theta >= 0 && theta <= pi)) {
        std::ostringstream m;
        m << "relative angle " << theta << " outside [0, pi]";
        throw DomainError(m.str());
    }
}

}  // namespace

double classical_correlation(double theta) {
    require_angle(theta);
    return 2 * theta / pi - 1;
}

double delta_E(double theta) {
    require_angle(theta);
    return -1 + 2 * theta / pi + std::cos(theta);
}

double stronger_than_quantum_correlation(double theta) {
    require_angle(theta);
    double x = theta - pi / 2;
    return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0);
}

Eigensystem eigensystem(const ComplexMatrix& h, const JacobiOptions& opt) {
    const std::size_t n = h.size();
    double defect = h.hermiticity_defect();
    if (defect > opt.hermitian_tolerance) {
        std::ostringstream m;
        m << "matrix is not Hermitian: max |H - H^dagger| = " << defect;
        throw DomainError(m.str());
    }
    ComplexMatrix a = h;
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = a(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            Complex x = (a(i, j) + std::conj(a(j, i))) / 2.0;
            a(i, j) = x;
            a(j, i) = std::conj(x);
        }
    }
    Eigensystem es;
    es.vectors = ComplexMatrix::identity(n);
    ComplexMatrix& v = es.vectors;
    const double threshold = opt.relative_tolerance * h.frobenius_norm();

    auto off_norm = [&] {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += 2 * std::norm(a(i, j));
        return std::sqrt(s);
    };

    bool converged = off_norm() <= threshold;
    while (!converged && es.sweeps < opt.max_sweeps) {
        ++es.sweeps;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double g = std::abs(a(p, q));
                if (g == 0) continue;
                const Complex e = a(p, q) / g;
                const double tau = (a(q, q).real() - a(p, p).real()) / (2 * g);
                const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1 + tau * tau));
                const double c = 1 / std::sqrt(1 + t * t), s = t * c;
                // R = diag(1, conj(e)) on (p, q) followed by the real rotation [[c, s], [-s, c]]
                const Complex rpp = c, rpq = s, rqp = -s * std::conj(e), rqq = c * std::conj(e);
                for (std::size_t k = 0; k < n; ++k) {
                    Complex kp = a(k, p), kq = a(k, q);
                    a(k, p) = kp * rpp + kq * rqp;
                    a(k, q) = kp * rpq + kq * rqq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    Complex pk = a(p, k), qk = a(q, k);
                    a(p, k) = std::conj(rpp) * pk + std::conj(rqp) * qk;
                    a(q, k) = std::conj(rpq) * pk + std::conj(rqq) * qk;
                }
                a(p, q) = a(q, p) = 0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (std::size_t k = 0; k < n; ++k) {
                    Complex kp = v(k, p), kq = v(k, q);
                    v(k, p) = kp * rpp + kq * rqp;
                    v(k, q) = kp * rpq + kq * rqq;
                }
            }
        converged = off_norm() <= threshold;
    }
    if (!converged)
        throw DomainError("Jacobi eigensolver did not converge in " + std::to_string(opt.max_sweeps) + " sweeps");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
    ComplexMatrix sorted(n);
    es.values.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        es.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) sorted(i, k) = v(i, order[k]);
        fix_phase(sorted, k);
    }
    es.vectors = std::move(sorted);
    return es;
}

std::vector<double> eigenvalues(const ComplexMatrix& h, const JacobiOptions& opt) {
    return eigensystem(h, opt).values;
}

std::array<double, 4> chsh_eigen_formula(double t1, double t2, double t3, double t4) {
    const double x = std::sin(t1 - t2) * std::sin(t3 - t4);
    const double lo = 2 * std::sqrt(std::max(0.0, 1 - x)), hi = 2 * std::sqrt(std::max(0.0, 1 + x));
    std::array<double, 4> out{-lo, -hi, lo, hi};
    std::sort(out.begin(), out.end());
    return out;
}

double project_and_bound(const ComplexMatrix& op, const StateVector& state) {
    if (op.size() != state.size())
        throw DimensionError("operator of size " + std::to_string(op.size()) + " and state of length " +
                             std::to_string(state.size()));
    if (std::abs(norm(state) - 1) > 1e-10) throw DomainError("state is not a unit vector");
    return std::real(inner(state, op * state));
}

StateVector bell_state(BellState b) {
    const double r = 1 / std::sqrt(2.0);
    switch (b) {
        case BellState::psi_minus: return {0, r, -r, 0};
        case BellState::psi_plus: return {0, r, r, 0};
        case BellState::phi_minus: return {r, 0, 0, -r};
        case BellState::phi_plus: return {r, 0, 0, r};
    }
    return {};
}

BellState parse_bell_state(const std::string& name) {
    if (name == "psi-minus") return BellState::psi_minus;
    if (name == "psi-plus") return BellState::psi_plus;
    if (name == "phi-minus") return BellState::phi_minus;
    if (name == "phi-plus") return BellState::phi_plus;
    throw FormatError("unknown state '" + name + "' (expected psi-minus, psi-plus, phi-minus or phi-plus)");
}

}  // namespace qlogic
