#pragma once
#include <cstddef>
#include <vector>

namespace tchaos {

template <class Real>
struct Rule {
  std::vector<Real> nodes;
  std::vector<Real> weights;
};

// Gauss-Hermite for the standard normal density: sum w_i f(x_i) ~ E f(Z).
// Golub-Welsch start, Newton polish on the orthonormal recurrence.
template <class Real>
Rule<Real> gauss_hermite(std::size_t n);

// Gauss-Legendre on [-1,1].
Rule<double> gauss_legendre(std::size_t n);

// Cached rules (thread-safe, built once per order).
const Rule<double>& gauss_hermite_cached(std::size_t n);
const Rule<double>& gauss_legendre_cached(std::size_t n);

}  // namespace tchaos

#include <functional>

namespace tchaos {

// int_a^b f with integrable singularities at the listed points (any inside
// [a,b] split the interval). Each piece is split at its midpoint and graded
// geometrically toward both ends (ratio `grade`, `levels` panels per side),
// with an n-point Gauss-Legendre rule on every panel.
double integrate_graded(const std::function<double(double)>& f, double a, double b, std::vector<double> singular, int levels = 24,
                        int nodes = 16, double grade = 0.35);

// Panel nodes/weights of the graded rule, for reuse across many integrands.
void graded_rule(double a, double b, std::vector<double> singular, int levels, int nodes, double grade, std::vector<double>& x,
                 std::vector<double>& w);

}  // namespace tchaos
