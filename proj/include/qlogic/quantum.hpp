#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qlogic {

using Complex = std::complex<double>;
using StateVector = std::vector<Complex>;

// Dense square matrix of complex doubles, row-major.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t n) : n_(n), a_(n * n) {}
    ComplexMatrix(std::size_t n, std::initializer_list<Complex> rowmajor);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(const std::vector<double>& d);

    std::size_t size() const { return n_; }
    Complex& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    const std::vector<Complex>& data() const { return a_; }

    ComplexMatrix adjoint() const;
    Complex trace() const;
    double frobenius_norm() const;
    // max |M - M^dagger|
    double hermiticity_defect() const;

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(Complex s);

private:
    std::size_t n_ = 0;
    std::vector<Complex> a_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
StateVector operator*(const ComplexMatrix& a, const StateVector& v);

// max |a_ij - b_ij|; throws DimensionError on size mismatch.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
StateVector kron(const StateVector& a, const StateVector& b);
// |v><v|
ComplexMatrix outer(const StateVector& v);
Complex inner(const StateVector& a, const StateVector& b);  // <a|b>
double norm(const StateVector& v);

struct Direction {
    double theta = 0;
    double phi = 0;
};

struct SpinMatrices {
    ComplexMatrix x, y, z;
};

// Spin components for spin j from the ladder operators, basis ordered
// m = +j, j-1, ..., -j. Throws DomainError unless 2j is a nonnegative integer.
SpinMatrices spin_components(double j);

// Mx sin(theta) cos(phi) + My sin(theta) sin(phi) + Mz cos(theta)
ComplexMatrix spin_operator(double j, Direction d);

// Spectral projectors of spin_operator(j, d), index k holding m = -j + k.
std::vector<ComplexMatrix> projectors(double j, Direction d);

// Eigenvector of spin_operator(j, d) for eigenvalue m, first nonzero component
// real and positive.
StateVector spin_eigenvector(double j, Direction d, double m);

// The closed-form spin-1 projector table with its own labels {F_-, F_0, F_+}.
// That table assigns the labels in the order (0, +1, -1) of the actual
// eigenvalues, so its F_0 at theta = phi = 0 is diag(1, 0, 0) while
// projectors(1, d)[1] is diag(0, 1, 0).
std::array<ComplexMatrix, 3> spin1_projector_table(Direction d);

// sum_m (-1)^(j-m) / sqrt(2j+1) |m, -m>
StateVector singlet(double j);

// Tr{rho_singlet (F_m1(d1) x F_m2(d2))}. Throws DomainError for |m| > j or m
// not in the spin ladder.
double joint_probability(double j, Direction d1, Direction d2, double m1, double m2);

// Tr{rho_singlet (S_j(d1) x S_j(d2))} by direct trace.
double correlation(double j, Direction d1, Direction d2);
// -(j(j+1)/3) [cos t1 cos t2 + cos(p1 - p2) sin t1 sin t2]
double correlation_closed_form(double j, Direction d1, Direction d2);

// Classical and stronger-than-quantum correlation functions of the relative
// angle; all throw DomainError outside [0, pi].
double classical_correlation(double theta);          // 2 theta / pi - 1
double delta_E(double theta);                        // -1 + 2 theta / pi + cos theta
double stronger_than_quantum_correlation(double theta);  // sgn(theta - pi/2)

struct JacobiOptions {
    int max_sweeps = 100;
    double relative_tolerance = 1e-13;  // off-diagonal Frobenius / ||H||_F
    double hermitian_tolerance = 1e-12;
};

struct Eigensystem {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // column k belongs to values[k]
    int sweeps = 0;
};

// Cyclic Jacobi on a Hermitian matrix. Throws DomainError if the input is not
// Hermitian within the tolerance or the sweep cap is reached.
Eigensystem eigensystem(const ComplexMatrix& h, const JacobiOptions& opt = {});
std::vector<double> eigenvalues(const ComplexMatrix& h, const JacobiOptions& opt = {});

// Eigenvalues of the in-plane CHSH operator
// E(t1,t3) + E(t1,t4) + E(t2,t3) - E(t2,t4), sorted ascending.
std::array<double, 4> chsh_eigen_formula(double t1, double t2, double t3, double t4);

// <state|op|state>; throws DimensionError on size mismatch and DomainError for a
// state that is not of unit norm (within 1e-10).
double project_and_bound(const ComplexMatrix& op, const StateVector& state);

// Two-qubit Bell states in the basis |00>, |01>, |10>, |11>.
enum class BellState { psi_minus, psi_plus, phi_minus, phi_plus };
StateVector bell_state(BellState b);
BellState parse_bell_state(const std::string& name);  // "psi-minus", ...

}  // namespace qlogic
