// 50-digit reference integrals for the tests. Deliberately a different
// algorithm (double-exponential) and precision from the library.
#ifndef GVFLAT_TESTS_ORACLE_HPP
#define GVFLAT_TESTS_ORACLE_HPP

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <complex>

namespace oracle {

using mp = boost::multiprecision::cpp_bin_float_50;
using mpc = boost::multiprecision::cpp_complex_50;

inline std::complex<double> to_double(const mpc& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

inline mp pi() { return boost::math::constants::pi<mp>(); }

/// int_0^inf f, f: mp -> mpc.
template <class F>
std::complex<double> half_line(F f) {
  boost::math::quadrature::exp_sinh<mp> q(12);
  const mp re = q.integrate([&](const mp& s) { return mp(f(s).real()); }, mp(1e-40));
  const mp im = q.integrate([&](const mp& s) { return mp(f(s).imag()); }, mp(1e-40));
  return {static_cast<double>(re), static_cast<double>(im)};
}

/// int_a^b f, f: mp -> mpc.
template <class F>
std::complex<double> interval(F f, const mp& a, const mp& b) {
  boost::math::quadrature::tanh_sinh<mp> q(12);
  const mp re = q.integrate([&](const mp& s) { return mp(f(s).real()); }, a, b, mp(1e-40));
  const mp im = q.integrate([&](const mp& s) { return mp(f(s).imag()); }, a, b, mp(1e-40));
  return {static_cast<double>(re), static_cast<double>(im)};
}

inline mp poisson(const mp& eps, const mp& s) { return eps / (pi() * (eps * eps + s * s)); }

}  // namespace oracle

#endif
