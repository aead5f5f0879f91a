// Small tour of the library: the two worked examples and one theorem suite.
#include <iostream>

#include "qik/qik.hpp"

using qik::ComplexMatrix;

int main() {
  const ComplexMatrix t{{-1.0, -1.0}, {3.0, 2.0}};
  const auto flip2 = qik::Conjugation::flip(2);

  const auto te = *qik::exact::to_exact(t);
  const auto ce = *qik::exact::to_exact(flip2);
  std::cout << "T^3 = " << qik::to_string(qik::exact::to_complex(qik::mat_power(te, 3))) << "\n";
  std::cout << "quasi_lambda(T, C, 1, 1) = " << qik::to_string(qik::exact::to_complex(qik::exact::quasi_lambda(te, ce, 1, 1)))
            << "\n";
  std::cout << "T^3 in (1,C), 1-quasi: " << std::boolalpha
            << qik::in_class(qik::mat_power(t, 3), &flip2, 1, 1) << ", T itself: " << qik::in_class(t, &flip2, 1, 1)
            << "\n\n";

  const ComplexMatrix u = qik::ComplexMatrix::identity(3) + qik::ComplexMatrix::unit(3, 0, 2);
  for (const auto& [name, c] : {std::pair{"flip", qik::Conjugation::flip(3)}, {"entrywise", qik::Conjugation::entrywise(3)}}) {
    const auto rep = qik::classify_exact(u, &c, 4, 2);
    std::cout << "I + E13 under " << name << ": minimal pairs";
    for (const auto& [m, n] : rep.minimal_pairs) std::cout << " (" << m << "," << n << ")";
    std::cout << "\n";
  }

  const auto sum = qik::run_suite("th27", 50, 7);
  std::cout << "\nth27: " << sum.passed << "/" << sum.trials << " pass, max conclusion residual "
            << sum.max_conclusion_residual << "\n";
  return sum.all_pass() ? 0 : 1;
}
