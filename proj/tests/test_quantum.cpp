#include "doctest.h"

#include "qlogic/error.hpp"
#include "qlogic/operator.hpp"
#include "qlogic/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace qlogic;

namespace {

constexpr double pi = 3.14159265358979323846;
const Complex I(0, 1);

std::mt19937_64& rng() {
    static std::mt19937_64 g(20171);
    return g;
}

double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

Direction random_direction() { return {uniform(0, pi), uniform(0, 2 * pi)}; }

ComplexMatrix random_hermitian(std::size_t n) {
    ComplexMatrix h(n);
    for (std::size_t i = 0; i < n; ++i) {
        h(i, i) = uniform(-1, 1);
        for (std::size_t j = i + 1; j < n; ++j) {
            h(i, j) = Complex(uniform(-1, 1), uniform(-1, 1));
            h(j, i) = std::conj(h(i, j));
        }
    }
    return h;
}

// Tr{|psi><psi| M} by explicit density matrix and matrix product.
double trace_oracle(const ComplexMatrix& m, const StateVector& psi) { return (outer(psi) * m).trace().real(); }

double residual(const ComplexMatrix& h, const Eigensystem& es) {
    double worst = 0;
    for (std::size_t k = 0; k < es.values.size(); ++k) {
        StateVector v(h.size());
        for (std::size_t i = 0; i < h.size(); ++i) v[i] = es.vectors(i, k);
        auto hv = h * v;
        double r = 0;
        for (std::size_t i = 0; i < v.size(); ++i) r += std::norm(hv[i] - es.values[k] * v[i]);
        worst = std::max(worst, std::sqrt(r));
    }
    return worst;
}

// The two-site CHSH operator from its definition with sigma(phi) = 2 S(pi/2, phi).
ComplexMatrix chsh_direct(double t1, double t2, double t3, double t4) {
    auto s = [](double t) { return Complex(2) * spin_operator(0.5, {pi / 2, t}); };
    return kron(s(t1), s(t3)) + kron(s(t1), s(t4)) + kron(s(t2), s(t3)) - kron(s(t2), s(t4));
}

}  // namespace

TEST_CASE("spin components match the explicit matrices") {
    const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
    auto h = spin_components(0.5);
    CHECK(max_abs_diff(h.x, ComplexMatrix(2, {0, 0.5, 0.5, 0})) <= 1e-12);
    CHECK(max_abs_diff(h.y, ComplexMatrix(2, {0, -0.5 * I, 0.5 * I, 0})) <= 1e-12);
    CHECK(max_abs_diff(h.z, ComplexMatrix::diagonal({0.5, -0.5})) <= 1e-12);

    auto one = spin_components(1);
    CHECK(max_abs_diff(one.x, ComplexMatrix(3, {0, 1 / r2, 0, 1 / r2, 0, 1 / r2, 0, 1 / r2, 0})) <= 1e-12);
    CHECK(max_abs_diff(one.y, ComplexMatrix(3, {0, -I / r2, 0, I / r2, 0, -I / r2, 0, I / r2, 0})) <= 1e-12);
    CHECK(max_abs_diff(one.z, ComplexMatrix::diagonal({1, 0, -1})) <= 1e-12);

    auto th = spin_components(1.5);
    CHECK(max_abs_diff(th.x, ComplexMatrix(4, {0, r3 / 2, 0, 0, r3 / 2, 0, 1, 0, 0, 1, 0, r3 / 2, 0, 0, r3 / 2, 0})) <=
          1e-12);
    CHECK(max_abs_diff(th.y, ComplexMatrix(4, {0, -I * r3 / 2.0, 0, 0, I * r3 / 2.0, 0, -I, 0, 0, I, 0,
                                               -I * r3 / 2.0, 0, 0, I * r3 / 2.0, 0})) <= 1e-12);
    CHECK(max_abs_diff(th.z, ComplexMatrix::diagonal({1.5, 0.5, -0.5, -1.5})) <= 1e-12);

    SUBCASE("commutation relations and Casimir for several j") {
        for (double j : {0.0, 0.5, 1.0, 1.5, 2.0, 2.5}) {
            CAPTURE(j);
            auto s = spin_components(j);
            const auto d = s.z.size();
            CHECK(max_abs_diff(s.x * s.y - s.y * s.x, I * s.z) <= 1e-12);
            CHECK(max_abs_diff(s.y * s.z - s.z * s.y, I * s.x) <= 1e-12);
            auto casimir = s.x * s.x + s.y * s.y + s.z * s.z;
            CHECK(max_abs_diff(casimir, Complex(j * (j + 1)) * ComplexMatrix::identity(d)) <= 1e-12);
        }
    }
    CHECK_THROWS_AS(spin_components(0.25), DomainError);
    CHECK_THROWS_AS(spin_components(-0.5), DomainError);
}

TEST_CASE("spin_operator") {
    CHECK(max_abs_diff(spin_operator(0.5, {0, 0}), ComplexMatrix::diagonal({0.5, -0.5})) <= 1e-15);
    for (int k = 0; k < 20; ++k) {
        Direction d = random_direction();
        const double t = d.theta, p = d.phi;
        ComplexMatrix expected(2, {std::cos(t) / 2, std::polar(1.0, -p) * std::sin(t) / 2.0,
                                   std::polar(1.0, p) * std::sin(t) / 2.0, -std::cos(t) / 2});
        CHECK(max_abs_diff(spin_operator(0.5, d), expected) <= 1e-14);
        const double r2 = std::sqrt(2.0);
        ComplexMatrix one(3, {std::cos(t), std::polar(1.0, -p) * std::sin(t) / r2, 0,
                              std::polar(1.0, p) * std::sin(t) / r2, 0, std::polar(1.0, -p) * std::sin(t) / r2, 0,
                              std::polar(1.0, p) * std::sin(t) / r2, -std::cos(t)});
        CHECK(max_abs_diff(spin_operator(1, d), one) <= 1e-14);
    }
    for (double j : {0.5, 1.0, 1.5, 2.0}) {
        for (int k = 0; k < 10; ++k) {
            auto ev = eigenvalues(spin_operator(j, random_direction()));
            for (std::size_t i = 0; i < ev.size(); ++i) CHECK(ev[i] == doctest::Approx(i - j).epsilon(1e-12));
        }
    }
}

TEST_CASE("projectors and spectral identities") {
    for (double j : {0.5, 1.0, 1.5}) {
        CAPTURE(j);
        for (int k = 0; k < 100; ++k) {
            Direction d = random_direction();
            auto f = projectors(j, d);
            const auto n = f.size();
            REQUIRE(n == static_cast<std::size_t>(2 * j + 1));
            ComplexMatrix sum(n), recon(n);
            for (std::size_t a = 0; a < n; ++a) {
                sum += f[a];
                recon += Complex(a - j) * f[a];
                for (std::size_t b = 0; b < n; ++b) {
                    ComplexMatrix expected = a == b ? f[a] : ComplexMatrix(n);
                    CHECK(max_abs_diff(f[a] * f[b], expected) <= 1e-10);
                }
            }
            CHECK(max_abs_diff(sum, ComplexMatrix::identity(n)) <= 1e-10);
            CHECK(max_abs_diff(recon, spin_operator(j, d)) <= 1e-10);
        }
    }
    SUBCASE("spin-1/2 projectors are (I +- sigma)/2") {
        for (int k = 0; k < 20; ++k) {
            Direction d = random_direction();
            auto f = projectors(0.5, d);
            auto sigma = Complex(2) * spin_operator(0.5, d);
            CHECK(max_abs_diff(f[1], Complex(0.5) * (ComplexMatrix::identity(2) + sigma)) <= 1e-12);
            CHECK(max_abs_diff(f[0], Complex(0.5) * (ComplexMatrix::identity(2) - sigma)) <= 1e-12);
        }
    }
    SUBCASE("spin-1 table") {
        auto table = spin1_projector_table({0, 0});
        CHECK(max_abs_diff(table[1], ComplexMatrix::diagonal({1, 0, 0})) <= 1e-15);
        CHECK(max_abs_diff(projectors(1, {0, 0})[1], ComplexMatrix::diagonal({0, 1, 0})) <= 1e-12);
        // the table's labels F_-, F_0, F_+ belong to the eigenvalues 0, +1, -1
        for (int k = 0; k < 50; ++k) {
            Direction d = random_direction();
            auto f = projectors(1, d);
            auto t = spin1_projector_table(d);
            CHECK(max_abs_diff(t[0], f[1]) <= 1e-10);
            CHECK(max_abs_diff(t[1], f[2]) <= 1e-10);
            CHECK(max_abs_diff(t[2], f[0]) <= 1e-10);
        }
    }
    SUBCASE("eigenvector phase") {
        for (int k = 0; k < 20; ++k) {
            Direction d = random_direction();
            for (double m : {-1.0, 0.0, 1.0}) {
                auto v = spin_eigenvector(1, d, m);
                auto first = std::find_if(v.begin(), v.end(), [](Complex x) { return std::abs(x) > 1e-12; });
                REQUIRE(first != v.end());
                CHECK(first->imag() == doctest::Approx(0).epsilon(1e-15));
                CHECK(first->real() > 0);
                CHECK(norm(v) == doctest::Approx(1).epsilon(1e-12));
            }
        }
        CHECK_THROWS_AS(spin_eigenvector(1, {0, 0}, 0.5), DomainError);
        CHECK_THROWS_AS(spin_eigenvector(0.5, {0, 0}, 1.5), DomainError);
    }
}

TEST_CASE("singlets") {
    const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
    auto close = [](const StateVector& a, const StateVector& b) {
        REQUIRE(a.size() == b.size());
        double m = 0;
        for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
        return m <= 1e-15;
    };
    CHECK(close(singlet(0.5), {0, 1 / r2, -1 / r2, 0}));
    CHECK(close(singlet(1), {0, 0, 1 / r3, 0, -1 / r3, 0, 1 / r3, 0, 0}));
    // 1/2 (|3/2,-3/2> - |1/2,-1/2> + |-1/2,1/2> - |-3/2,3/2>), index = 4 (3/2 - m1) + (3/2 - m2)
    StateVector s32(16);
    s32[3] = 0.5;
    s32[6] = -0.5;
    s32[9] = 0.5;
    s32[12] = -0.5;
    CHECK(close(singlet(1.5), s32));
    for (double j : {0.5, 1.0, 1.5, 2.0}) {
        CHECK(norm(singlet(j)) == doctest::Approx(1).epsilon(1e-15));
        // total spin zero: (S_a x I + I x S_a)|psi> = 0
        auto s = spin_components(j);
        auto id = ComplexMatrix::identity(s.z.size());
        for (const auto* m : {&s.x, &s.y, &s.z}) {
            auto out = (kron(*m, id) + kron(id, *m)) * singlet(j);
            CHECK(norm(out) <= 1e-12);
        }
    }
}

TEST_CASE("joint probabilities") {
    const Direction z{0, 0};
    SUBCASE("spin-1/2 closed form") {
        for (int k = 0; k < 200; ++k) {
            Direction a = random_direction(), b = random_direction();
            double c = std::cos(a.theta) * std::cos(b.theta) + std::sin(a.theta) * std::sin(b.theta) * std::cos(a.phi - b.phi);
            for (double m1 : {-0.5, 0.5})
                for (double m2 : {-0.5, 0.5}) {
                    double sign = (m1 > 0) == (m2 > 0) ? 1 : -1;
                    CHECK(joint_probability(0.5, a, b, m1, m2) == doctest::Approx(0.25 * (1 - sign * c)).epsilon(1e-12));
                }
        }
    }
    CHECK(joint_probability(0.5, z, z, 0.5, 0.5) == doctest::Approx(0).epsilon(1e-15));
    CHECK(joint_probability(0.5, z, {pi, 0}, 0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
    SUBCASE("probability axioms and trace oracle") {
        for (double j : {0.5, 1.0, 1.5}) {
            for (int k = 0; k < 30; ++k) {
                Direction a = random_direction(), b = random_direction();
                auto fa = projectors(j, a), fb = projectors(j, b);
                double total = 0;
                for (std::size_t i = 0; i < fa.size(); ++i)
                    for (std::size_t l = 0; l < fb.size(); ++l) {
                        double p = joint_probability(j, a, b, i - j, l - j);
                        CHECK(p >= -1e-12);
                        CHECK(p <= 1 + 1e-12);
                        CHECK(p == doctest::Approx(trace_oracle(kron(fa[i], fb[l]), singlet(j))).epsilon(1e-10));
                        total += p;
                    }
                CHECK(total == doctest::Approx(1).epsilon(1e-10));
            }
        }
    }
    CHECK_THROWS_AS(joint_probability(0.5, z, z, 1, 0.5), DomainError);
}

TEST_CASE("singlet correlations") {
    for (double j : {0.5, 1.0, 1.5}) {
        CAPTURE(j);
        for (int k = 0; k < 1000; ++k) {
            Direction a = random_direction(), b = random_direction();
            double oracle = trace_oracle(kron(spin_operator(j, a), spin_operator(j, b)), singlet(j));
            CHECK(correlation(j, a, b) == doctest::Approx(oracle).epsilon(1e-10));
            CHECK(correlation_closed_form(j, a, b) == doctest::Approx(oracle).epsilon(1e-10));
        }
    }
    CHECK(4 * correlation(0.5, {1, 2}, {1, 2}) == doctest::Approx(-1).epsilon(1e-12));
    // in-plane spin-1/2 normalized form -cos(t1 - t2)
    for (int k = 0; k < 50; ++k) {
        double t1 = uniform(0, pi), t2 = uniform(0, pi);
        CHECK(4 * correlation(0.5, {t1, 0}, {t2, 0}) == doctest::Approx(-std::cos(t1 - t2)).epsilon(1e-12));
    }
    SUBCASE("rotational invariance") {
        auto to_vec = [](Direction d) {
            return std::array<double, 3>{std::sin(d.theta) * std::cos(d.phi), std::sin(d.theta) * std::sin(d.phi),
                                         std::cos(d.theta)};
        };
        auto to_dir = [](std::array<double, 3> v) { return Direction{std::acos(std::clamp(v[2], -1.0, 1.0)), std::atan2(v[1], v[0])}; };
        for (double j : {0.5, 1.0, 1.5}) {
            for (int k = 0; k < 100; ++k) {
                Direction a = random_direction(), b = random_direction();
                // random rotation from Euler angles z-y-z
                double al = uniform(0, 2 * pi), be = uniform(0, pi), ga = uniform(0, 2 * pi);
                auto rot = [&](std::array<double, 3> v) {
                    auto rz = [](double t, std::array<double, 3> x) {
                        return std::array<double, 3>{std::cos(t) * x[0] - std::sin(t) * x[1],
                                                     std::sin(t) * x[0] + std::cos(t) * x[1], x[2]};
                    };
                    auto ry = [](double t, std::array<double, 3> x) {
                        return std::array<double, 3>{std::cos(t) * x[0] + std::sin(t) * x[2], x[1],
                                                     -std::sin(t) * x[0] + std::cos(t) * x[2]};
                    };
                    return rz(al, ry(be, rz(ga, v)));
                };
                double before = correlation(j, a, b);
                double after = correlation(j, to_dir(rot(to_vec(a))), to_dir(rot(to_vec(b))));
                CHECK(std::abs(before - after) <= 1e-9);
            }
        }
    }
}

TEST_CASE("classical and difference correlations") {
    CHECK(classical_correlation(0) == -1);
    CHECK(delta_E(0) == doctest::Approx(0).epsilon(1e-15));
    CHECK(classical_correlation(pi / 2) == doctest::Approx(0).epsilon(1e-15));
    CHECK(std::abs(delta_E(pi / 2)) <= 1e-15);
    CHECK(stronger_than_quantum_correlation(0.1) == -1);
    CHECK(stronger_than_quantum_correlation(3) == 1);
    CHECK_THROWS_AS(classical_correlation(-0.1), DomainError);
    CHECK_THROWS_AS(delta_E(4), DomainError);
    CHECK_THROWS_AS(stronger_than_quantum_correlation(NAN), DomainError);
    // delta_E is classical minus the quantum -cos
    for (int k = 0; k < 50; ++k) {
        double t = uniform(0, pi);
        CHECK(delta_E(t) == doctest::Approx(classical_correlation(t) - 4 * correlation(0.5, {t, 0}, {0, 0})).epsilon(1e-12));
    }
    // argmax on (0, pi/2) by golden-section search
    double lo = 0, hi = pi / 2;
    const double g = (std::sqrt(5.0) - 1) / 2;
    while (hi - lo > 1e-12) {
        double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
        if (delta_E(a) < delta_E(b)) lo = a;
        else hi = b;
    }
    CHECK(lo == doctest::Approx(std::asin(2 / pi)).epsilon(1e-8));
    CHECK(std::asin(2 / pi) == doctest::Approx(0.690).epsilon(1e-3));
}

TEST_CASE("Jacobi eigensolver") {
    SUBCASE("identity and diagonal") {
        auto ev = eigenvalues(ComplexMatrix::identity(5));
        for (double x : ev) CHECK(x == 1);
        CHECK(eigenvalues(ComplexMatrix::diagonal({3, -1, 2})) == std::vector<double>{-1, 2, 3});
        CHECK(eigenvalues(ComplexMatrix(4)) == std::vector<double>(4, 0.0));
    }
    SUBCASE("2x2 closed form") {
        for (int k = 0; k < 200; ++k) {
            auto h = random_hermitian(2);
            double a = h(0, 0).real(), d = h(1, 1).real(), b = std::abs(h(0, 1));
            double m = (a + d) / 2, r = std::sqrt((a - d) * (a - d) / 4 + b * b);
            auto ev = eigenvalues(h);
            CHECK(ev[0] == doctest::Approx(m - r).epsilon(1e-12));
            CHECK(ev[1] == doctest::Approx(m + r).epsilon(1e-12));
        }
    }
    SUBCASE("trace, Frobenius and residual") {
        for (std::size_t n : {1, 3, 7, 16, 40}) {
            for (int k = 0; k < 5; ++k) {
                auto h = random_hermitian(n);
                auto es = eigensystem(h);
                CHECK(std::is_sorted(es.values.begin(), es.values.end()));
                double s1 = 0, s2 = 0, s3 = 0;
                for (double x : es.values) {
                    s1 += x;
                    s2 += x * x;
                    s3 += x * x * x;
                }
                double f = h.frobenius_norm();
                CHECK(std::abs(s1 - h.trace().real()) <= 1e-8 * std::max(1.0, f));
                CHECK(std::abs(s2 - f * f) <= 1e-8 * f * f);
                CHECK(std::abs(s3 - (h * h * h).trace().real()) <= 1e-8 * f * f * f);
                CHECK(residual(h, es) <= 1e-9);
                CHECK(es.sweeps <= 100);
                // eigenvectors are orthonormal
                CHECK(max_abs_diff(es.vectors.adjoint() * es.vectors, ComplexMatrix::identity(n)) <= 1e-10);
            }
        }
    }
    SUBCASE("degenerate spectra") {
        auto h = kron(ComplexMatrix::diagonal({1, 1, 2}), random_hermitian(3));
        auto es = eigensystem(h);
        CHECK(residual(h, es) <= 1e-9);
    }
    SUBCASE("errors") {
        ComplexMatrix m(2, {0, 1, 0, 0});
        CHECK_THROWS_AS(eigenvalues(m), DomainError);
        ComplexMatrix tiny(2, {0, Complex(1, 1e-13), Complex(1, 0), 0});
        CHECK_NOTHROW(eigenvalues(tiny));
        JacobiOptions one_sweep;
        one_sweep.max_sweeps = 1;
        CHECK_THROWS_AS(eigenvalues(random_hermitian(20), one_sweep), DomainError);
    }
}

TEST_CASE("CHSH operator") {
    const double s = 2 * std::sqrt(2.0);
    auto op = load_operator("builtin:chsh");
    auto t = op.build();
    CHECK(t.hermiticity_defect() <= 1e-12);
    CHECK(max_abs_diff(t, chsh_direct(0, pi / 2, pi / 4, 3 * pi / 4)) <= 1e-12);
    CHECK(std::abs(t(0, 3) - Complex(0, -s)) <= 1e-12);
    CHECK(std::abs(t(3, 0) - Complex(0, s)) <= 1e-12);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            if (i + j != 3) CHECK(std::abs(t(i, j)) <= 1e-12);
    auto ev = eigenvalues(t);
    CHECK(ev[0] == doctest::Approx(-s).epsilon(1e-12));
    CHECK(std::abs(ev[1]) <= 1e-12);
    CHECK(std::abs(ev[2]) <= 1e-12);
    CHECK(ev[3] == doctest::Approx(s).epsilon(1e-12));

    SUBCASE("closed form against the eigensolver") {
        for (int k = 0; k < 1000; ++k) {
            double a = uniform(-pi, pi), b = uniform(-pi, pi), c = uniform(-pi, pi), d = uniform(-pi, pi);
            auto f = chsh_eigen_formula(a, b, c, d);
            auto e = eigenvalues(op.build({a, b, c, d}));
            for (int i = 0; i < 4; ++i) CHECK(std::abs(f[i] - e[i]) <= 1e-9);
        }
        auto e = chsh_eigen_formula(0, pi / 2, 0, pi / 2);
        CHECK(e[0] == doctest::Approx(-s));
        CHECK(e[3] == doctest::Approx(s));
        auto flat = chsh_eigen_formula(0.3, 0.3, 1, 2);
        CHECK(flat == std::array<double, 4>{-2, -2, 2, 2});
    }
    SUBCASE("Bell state projections") {
        CHECK(project_and_bound(op.build({0, pi / 2, pi / 4, -pi / 4}), bell_state(BellState::psi_minus)) ==
              doctest::Approx(-s).epsilon(1e-12));
        auto phi = op.build({0, pi / 2, -pi / 4, pi / 4});
        CHECK(project_and_bound(phi, bell_state(BellState::phi_minus)) == doctest::Approx(-s).epsilon(1e-12));
        CHECK(project_and_bound(phi, bell_state(BellState::phi_plus)) == doctest::Approx(s).epsilon(1e-12));
        for (auto b : {BellState::psi_minus, BellState::psi_plus, BellState::phi_minus, BellState::phi_plus})
            CHECK(project_and_bound(ComplexMatrix::identity(4), bell_state(b)) == doctest::Approx(1));
        CHECK(parse_bell_state("psi-plus") == BellState::psi_plus);
        CHECK_THROWS_AS(parse_bell_state("psi"), FormatError);
        CHECK_THROWS_AS(project_and_bound(ComplexMatrix::identity(3), bell_state(BellState::psi_plus)), DimensionError);
        CHECK_THROWS_AS(project_and_bound(ComplexMatrix::identity(2), StateVector{1, 1}), DomainError);
        // expectation is bounded by the extreme eigenvalues
        for (int k = 0; k < 100; ++k) {
            auto m = op.build({uniform(0, 6), uniform(0, 6), uniform(0, 6), uniform(0, 6)});
            auto e = eigenvalues(m);
            StateVector v(4);
            for (auto& x : v) x = Complex(uniform(-1, 1), uniform(-1, 1));
            double nv = norm(v);
            for (auto& x : v) x /= nv;
            double q = project_and_bound(m, v);
            CHECK(q >= e.front() - 1e-12);
            CHECK(q <= e.back() + 1e-12);
        }
    }
}

TEST_CASE("KCBS operator") {
    auto op = load_operator("builtin:kcbs");
    auto t = op.build();
    CHECK(t.size() == 9);
    CHECK(t.hermiticity_defect() <= 1e-12);
    auto ev = eigenvalues(t);
    std::vector<double> expected{-2.49546, -1.93988, -1.33721, -0.285881, 0.266666, 0.285881, 1.33721, 1.93988, 2.2288};
    REQUIRE(ev.size() == 9);
    for (std::size_t i = 0; i < 9; ++i) CHECK(ev[i] == doctest::Approx(expected[i]).epsilon(1e-5));
}

TEST_CASE("Cabello operator") {
    auto op = load_operator("builtin:cabelloT");
    auto t = op.build();
    REQUIRE(t.size() == 256);
    CHECK(t.hermiticity_defect() <= 1e-12);
    auto es = eigensystem(t);
    CHECK(es.values.front() == doctest::Approx(-6.94177).epsilon(1e-6));
    CHECK(es.values[1] == doctest::Approx(-6.67604).epsilon(1e-6));
    CHECK(es.values[254] == doctest::Approx(5.78503).epsilon(1e-6));
    CHECK(es.values.back() == doctest::Approx(6.023).epsilon(1e-4));
    double s1 = 0, s2 = 0;
    for (double x : es.values) {
        s1 += x;
        s2 += x * x;
    }
    double f = t.frobenius_norm();
    CHECK(std::abs(s1 - t.trace().real()) <= 1e-8 * f);
    CHECK(std::abs(s2 - f * f) <= 1e-8 * f * f);
    CHECK(residual(t, es) <= 1e-9);
    // dichotomic factors: A^2 = I and tr A = 2 - 4
    for (const auto& [label, a] : op.bind()) {
        CHECK(max_abs_diff(a * a, ComplexMatrix::identity(4)) <= 1e-12);
        CHECK(a.trace().real() == doctest::Approx(-2));
    }
}

TEST_CASE("operator files") {
    SUBCASE("angles") {
        CHECK(parse_angle("pi").value == doctest::Approx(pi));
        CHECK(parse_angle("3pi/4").value == doctest::Approx(3 * pi / 4));
        CHECK(parse_angle("3*pi/4").value == doctest::Approx(3 * pi / 4));
        CHECK(parse_angle("-pi/4").value == doctest::Approx(-pi / 4));
        CHECK(parse_angle("1/3").value == doctest::Approx(1.0 / 3));
        CHECK(parse_angle("-0.5").value == -0.5);
        auto p = parse_angle("-$t1");
        CHECK(p.param == "t1");
        CHECK(p.sign == -1);
        for (const char* bad : {"", "x", "pi/0", "2pix", "$", "1/"}) {
            CAPTURE(bad);
            CHECK_THROWS_AS(parse_angle(bad), FormatError);
        }
    }
    SUBCASE("identity term") {
        auto spec = parse_operator("sites 2\nbind i identity 3\nterm 1 i@1 i@2\n");
        CHECK(max_abs_diff(spec.build(), ComplexMatrix::identity(9)) <= 0);
        auto half = parse_operator("sites 2\nbind i identity 2\nbind z spin 1/2 0 0\nterm 1 z@1 i@2\nterm 1 z@1\n");
        CHECK(max_abs_diff(half.build(), kron(ComplexMatrix::diagonal({1, -1}), ComplexMatrix::identity(2))) <= 1e-15);
    }
    SUBCASE("errors") {
        auto throws_format = [](const char* text) {
            CAPTURE(text);
            CHECK_THROWS_AS(parse_operator(text), FormatError);
        };
        throws_format("term 1 a@1\n");
        throws_format("sites 1\nterm 1 a@1\n");
        throws_format("sites 1\nbind a spin 1/2 0 0\nterm 1 a@2\n");
        throws_format("sites 1\nbind a spin 1/2 0 0\nterm 1 a\n");
        throws_format("sites 1\nbind a spin 1/2 0 0\nbind a spin 1/2 0 0\nterm 1 a@1\n");
        throws_format("sites 1\nbind a spin 1/3 0 0\nterm 1 a@1\n");
        throws_format("sites 1\nbind a spin 1/2 $x 0\nterm 1 a@1\n");
        throws_format("sites 1\nbind a wobble\nterm 1 a@1\n");
        throws_format("sites 1\nbind a proj builtin:cabello18 zz\nterm 1 a@1\n");
        throws_format("sites 2\nbind a spin 1/2 0 0\nterm 1 a@1 a@1\n");
        throws_format("sites 1\nfrob\n");
        throws_format("sites 1\n");
        try {
            parse_operator("sites 1\nbind a spin 1/2 0 0\n\nterm x a@1\n");
            FAIL("expected an error");
        } catch (const FormatError& e) {
            CHECK(e.line() == 4);
        }
        auto mixed = parse_operator("sites 1\nbind a spin 1/2 0 0\nbind b spin 1 0 0\nterm 1 a@1\nterm 1 b@1\n");
        CHECK_THROWS_AS(mixed.build(), DimensionError);
        auto open = parse_operator("sites 2\nbind a spin 1/2 0 0\nterm 1 a@1\n");
        CHECK_THROWS_AS(open.build(), DimensionError);
        CHECK_THROWS_AS(load_operator("builtin:nope"), FormatError);
    }
    SUBCASE("build_operator with explicit bindings") {
        OperatorExpr e{2, {{2.0, {"x", "y"}}, {-1.0, {"y", ""}}}};
        std::map<std::string, ComplexMatrix> b{{"x", ComplexMatrix::diagonal({1, 2})}, {"y", ComplexMatrix(2, {0, 1, 1, 0})}};
        auto m = build_operator(e, b);
        auto expected = Complex(2) * kron(b["x"], b["y"]) - kron(b["y"], ComplexMatrix::identity(2));
        CHECK(max_abs_diff(m, expected) <= 1e-15);
        CHECK_THROWS_AS(build_operator({2, {{1.0, {"x"}}}}, b), DimensionError);
        CHECK_THROWS_AS(build_operator({1, {{1.0, {"q"}}}}, b), FormatError);
    }
}

TEST_CASE("maximize_bound") {
    SUBCASE("CHSH reaches the Tsirelson bound") {
        auto r = maximize_bound(load_operator("builtin:chsh"));
        CHECK(r.lambda_max == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-6));
        CHECK(std::abs(r.lambda_max - 2 * std::sqrt(2.0)) <= 1e-6);
        CHECK(r.full_grid);
        CHECK(r.grid_points == 65536u);
        CHECK(r.params.size() == 4);
        auto again = maximize_bound(load_operator("builtin:chsh"));
        CHECK(again.params == r.params);
        CHECK(again.lambda_max == r.lambda_max);
    }
    SUBCASE("single correlation term") {
        auto spec = parse_operator(
            "sites 2\nparam a 0.3\nparam b 1.1\nbind x spin 1/2 pi/2 $a\nbind y spin 1/2 pi/2 $b\nterm 4 x@1 y@2\n");
        auto r = maximize_bound(spec);
        CHECK(r.lambda_max == doctest::Approx(1).epsilon(1e-9));
    }
    SUBCASE("KCBS over five free directions") {
        auto spec = load_operator("builtin:kcbs");
        OptimizeOptions o;
        o.max_grid_points = 512;
        o.starts = 2;
        auto r = maximize_bound(spec, o);
        CHECK_FALSE(r.full_grid);
        CHECK(r.grid_points == 512u);
        CHECK(r.lambda_max >= 2.2288 - 1e-9);
        // the result is an eigenvalue of the operator at the returned angles
        CHECK(eigenvalues(spec.build(r.params)).back() == doctest::Approx(r.lambda_max).epsilon(1e-12));
    }
    SUBCASE("no parameters") {
        CHECK_THROWS_AS(maximize_bound(load_operator("builtin:cabelloT")), DomainError);
    }
}
